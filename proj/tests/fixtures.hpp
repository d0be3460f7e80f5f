#pragma once

#include <random>

#include "netisac/design.hpp"
#include "netisac/scenario.hpp"

namespace fixtures
{

using namespace netisac;

/// One GBS at the origin and one UAV hovering at `offset`.
inline Scenario single_link(int num_antennas, Vec2 offset = Vec2(30.0, 40.0), int num_slots = 1)
{
    Scenario s;
    s.gbs_positions = {Vec2(0.0, 0.0)};
    s.uav_initial = {offset};
    s.uav_final = {offset};
    s.uav_altitudes = {80.0};
    s.sensing_points = {Vec2(60.0, -20.0)};
    s.sensing_altitude = 50.0;
    s.num_antennas = num_antennas;
    s.num_slots = num_slots;
    s.slot_duration = 1.0;
    s.p_max = 3.0;
    s.gamma = 0.0;
    s.v_max = 10.0;
    s.d_min = 10.0;
    s.kappa = dbw_to_watts(-45.0);
    s.noise_power = dbw_to_watts(-100.0);
    return s;
}

inline Vec2 uniform_point(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    const double x = u(rng);
    return Vec2(x, u(rng));
}

/// Random geometry on a 200 m square; endpoints reachable and collision-free.
inline Scenario random_scenario(std::mt19937_64& rng, int M, int K, int num_antennas, int N, int Q)
{
    Scenario s;
    std::uniform_real_distribution<double> alt(60.0, 120.0);
    for (int m = 0; m < M; ++m)
        s.gbs_positions.push_back(uniform_point(rng, 0.0, 200.0));
    for (int k = 0; k < K; ++k)
    {
        s.uav_initial.push_back(Vec2(0.0, 50.0 * k));
        s.uav_final.push_back(Vec2(200.0, 50.0 * k));
        s.uav_altitudes.push_back(alt(rng));
    }
    for (int q = 0; q < Q; ++q)
        s.sensing_points.push_back(uniform_point(rng, 50.0, 150.0));
    s.sensing_altitude = 40.0;
    s.num_antennas = num_antennas;
    s.num_slots = N;
    s.slot_duration = 1.0;
    s.v_max = N > 1 ? 250.0 / (N - 1) : 0.0;
    if (N == 1)
        s.uav_final = s.uav_initial;
    s.p_max = 3.0;
    s.gamma = 0.0;
    s.d_min = 20.0;
    s.kappa = dbw_to_watts(-45.0);
    s.noise_power = dbw_to_watts(-100.0);
    return s;
}

inline CMatrix random_psd(std::mt19937_64& rng, int n, int rank, double trace)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix f(n, rank);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rank; ++j)
            f(i, j) = Complex(g(rng), g(rng));
    CMatrix x = f * f.adjoint();
    x = 0.5 * (x + x.adjoint()).eval();
    return x * (trace / x.trace().real());
}

inline CMatrix random_hermitian(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix x(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            x(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (x + x.adjoint());
}

/// Random PSD covariances using a random fraction of each GBS budget, random
/// association and straight trajectories. Unassociated beams stay zero.
inline Design random_design(std::mt19937_64& rng, const Scenario& s)
{
    Design d = Design::straight_flight(s);
    std::uniform_int_distribution<int> pick(0, s.num_gbs() - 1);
    std::uniform_int_distribution<int> rank(1, s.num_antennas);
    std::uniform_real_distribution<double> frac(0.05, 1.0);
    for (int n = 0; n < s.num_slots; ++n)
    {
        for (int k = 0; k < s.num_uavs(); ++k)
            d.set_serving(k, n, pick(rng));
        for (int m = 0; m < s.num_gbs(); ++m)
        {
            const double budget = s.p_max * frac(rng);
            int parts = 1;
            for (int k = 0; k < s.num_uavs(); ++k)
                parts += d.serving(k, n) == m ? 1 : 0;
            d.r(m, n) = random_psd(rng, s.num_antennas, rank(rng), budget / parts);
            for (int k = 0; k < s.num_uavs(); ++k)
                if (d.serving(k, n) == m)
                    d.w(m, k, n) = random_psd(rng, s.num_antennas, rank(rng), budget / parts);
        }
    }
    return d;
}

} // namespace fixtures
