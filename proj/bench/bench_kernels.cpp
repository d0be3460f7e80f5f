// Serial reference versus OpenMP execution of the per-slot and per-(k,n)
// kernels on the bundled scenario. Reports the median wall time of each and
// whether both policies produced the same design.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <omp.h>

#include "netisac/association.hpp"
#include "netisac/beamforming.hpp"
#include "netisac/orchestrator.hpp"
#include "netisac/trajectory.hpp"

using namespace netisac;

namespace
{

double median_seconds(int repeats, const std::function<void()>& body)
{
    std::vector<double> times;
    for (int i = 0; i < repeats; ++i)
    {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

bool same_design(const Design& a, const Design& b)
{
    for (int n = 0; n < a.num_slots(); ++n)
        for (int k = 0; k < a.num_uavs(); ++k)
        {
            if (a.q(k, n) != b.q(k, n) || a.serving(k, n) != b.serving(k, n))
                return false;
            for (int m = 0; m < a.num_gbs(); ++m)
                if (a.w(m, k, n) != b.w(m, k, n) || a.r(m, n) != b.r(m, n))
                    return false;
        }
    return true;
}

void row(const char* kernel, double serial, double parallel, bool identical)
{
    std::printf("%-24s %12.4f %12.4f %8.2fx  %s\n", kernel, serial * 1e3, parallel * 1e3, serial / parallel,
                identical ? "identical" : "DIFFERENT");
}

} // namespace

int main()
{
    const Scenario s = reference_scenario().with_num_slots(20);
    const SolveResult start = baseline_straight_flight(s);
    if (start.status != RunStatus::Solved)
    {
        std::fprintf(stderr, "starting design failed: %s\n", start.message.c_str());
        return 1;
    }
    const Design base = start.design;

    std::printf("threads: %d, slots: %d\n", omp_get_max_threads(), s.num_slots);
    std::printf("%-24s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

    {
        Design ds = base, dp = base;
        const double ts = median_seconds(21, [&] { ds = base; optimize_association(ds, s, Exec::Serial); });
        const double tp = median_seconds(21, [&] { dp = base; optimize_association(dp, s, Exec::Parallel); });
        row("association", ts, tp, same_design(ds, dp));
    }
    {
        SdrOptions serial, parallel;
        serial.exec = Exec::Serial;
        parallel.exec = Exec::Parallel;
        SdrResult rs, rp;
        const double ts = median_seconds(3, [&] { rs = solve_sdr_subproblem(s, base, serial); });
        const double tp = median_seconds(3, [&] { rp = solve_sdr_subproblem(s, base, parallel); });
        row("beamforming subproblem", ts, tp, same_design(rs.candidate, rp.candidate));
    }
    {
        TrajectoryOptions serial, parallel;
        serial.exec = Exec::Serial;
        parallel.exec = Exec::Parallel;
        Design ds = base, dp = base;
        const double ts = median_seconds(3, [&] { ds = base; optimize_trajectory(ds, s, serial); });
        const double tp = median_seconds(3, [&] { dp = base; optimize_trajectory(dp, s, parallel); });
        row("trajectory SCA", ts, tp, same_design(ds, dp));
    }
    return 0;
}
