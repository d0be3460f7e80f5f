#include "netisac/design.hpp"

namespace netisac
{

Design::Design(int num_gbs, int num_uavs, int num_slots, int num_antennas)
    : num_gbs_(num_gbs),
      num_uavs_(num_uavs),
      num_slots_(num_slots),
      num_antennas_(num_antennas)
{
    if (num_gbs < 1 || num_uavs < 1 || num_slots < 1 || num_antennas < 1)
        throw InvalidArgument("Design: all dimensions must be positive");
    const CMatrix zero = CMatrix::Zero(num_antennas, num_antennas);
    w_cov_.assign(static_cast<size_t>(num_gbs) * num_uavs * num_slots, zero);
    r_cov_.assign(static_cast<size_t>(num_gbs) * num_slots, zero);
    trajectories_.assign(static_cast<size_t>(num_uavs) * num_slots, Vec2::Zero());
    serving_.assign(static_cast<size_t>(num_uavs) * num_slots, 0);
}

Design Design::straight_flight(const Scenario& s)
{
    Design d(s.num_gbs(), s.num_uavs(), s.num_slots, s.num_antennas);
    const int N = s.num_slots;
    for (int k = 0; k < s.num_uavs(); ++k)
    {
        for (int n = 0; n < N; ++n)
        {
            const double frac = N == 1 ? 0.0 : static_cast<double>(n) / (N - 1);
            d.q(k, n) = (1.0 - frac) * s.uav_initial[k] + frac * s.uav_final[k];
        }
        d.q(k, N - 1) = s.uav_final[k];
        d.q(k, 0) = s.uav_initial[k];
    }
    for (int n = 0; n < N; ++n)
    {
        for (int k = 0; k < s.num_uavs(); ++k)
        {
            int best = 0;
            double best_d2 = (d.q(k, n) - s.gbs_positions[0]).squaredNorm();
            for (int m = 1; m < s.num_gbs(); ++m)
            {
                const double d2 = (d.q(k, n) - s.gbs_positions[m]).squaredNorm();
                if (d2 < best_d2)
                {
                    best = m;
                    best_d2 = d2;
                }
            }
            d.set_serving(k, n, best);
        }
    }
    return d;
}

CMatrix Design::transmit_covariance(int m, int n) const
{
    CMatrix x = r(m, n);
    for (int k = 0; k < num_uavs_; ++k)
        x += w(m, k, n);
    return x;
}

void Design::fold_unassociated()
{
    for (int n = 0; n < num_slots_; ++n)
        for (int m = 0; m < num_gbs_; ++m)
            for (int k = 0; k < num_uavs_; ++k)
                if (serving(k, n) != m && w(m, k, n).squaredNorm() > 0.0)
                {
                    r(m, n) += w(m, k, n);
                    w(m, k, n).setZero();
                }
}

bool Design::same_shape(const Design& o) const
{
    return num_gbs_ == o.num_gbs_ && num_uavs_ == o.num_uavs_ && num_slots_ == o.num_slots_ &&
           num_antennas_ == o.num_antennas_;
}

} // namespace netisac
