#include "netisac/association.hpp"

#include "netisac/model.hpp"

namespace netisac
{

int best_serving_gbs(const Design& design, const Scenario& scenario, int k, int n)
{
    int best = 0;
    double best_rate = rate(design, scenario, 0, k, n);
    for (int m = 1; m < scenario.num_gbs(); ++m)
    {
        const double r = rate(design, scenario, m, k, n);
        if (r > best_rate)
        {
            best = m;
            best_rate = r;
        }
    }
    return best;
}

void optimize_association(Design& design, const Scenario& scenario, Exec exec)
{
    const int num_uavs = scenario.num_uavs();
    // Each iteration writes a distinct (k, n) entry and reads only covariances
    // and positions.
    for_each_index(exec, num_uavs * scenario.num_slots, [&](int idx) {
        const int k = idx % num_uavs;
        const int n = idx / num_uavs;
        design.set_serving(k, n, best_serving_gbs(design, scenario, k, n));
    });
}

} // namespace netisac
