#include "netisac/scenario.hpp"

#include <cmath>
#include <sstream>

namespace netisac
{

Scenario Scenario::with_num_slots(int n) const
{
    if (n < 1)
        throw InvalidArgument("with_num_slots: n must be >= 1");
    Scenario out = *this;
    const double horizon = slot_duration * num_slots;
    out.num_slots = n;
    out.slot_duration = horizon / n;
    return out;
}

Scenario Scenario::with_gamma(double gamma_watts) const
{
    Scenario out = *this;
    out.gamma = gamma_watts;
    return out;
}

namespace
{

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ScenarioError("scenario invariant violated: " + what);
}

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

} // namespace

void validate(const Scenario& s)
{
    const int K = s.num_uavs();
    require(s.num_gbs() >= 1, "at least one GBS (M >= 1)");
    require(K >= 1, "at least one UAV (K >= 1)");
    require(s.num_sensing() >= 1, "at least one sensing point (Q >= 1)");
    require(s.num_slots >= 1, "num_slots >= 1");
    require(s.num_antennas >= 1, "num_antennas >= 1");
    require(static_cast<int>(s.uav_final.size()) == K, "uav_final has one entry per UAV");
    require(static_cast<int>(s.uav_altitudes.size()) == K, "uav_altitudes has one entry per UAV");

    for (const auto& p : s.gbs_positions)
        require(finite(p), "gbs_positions are finite");
    for (const auto& p : s.sensing_points)
        require(finite(p), "sensing_points are finite");
    for (int k = 0; k < K; ++k)
    {
        require(finite(s.uav_initial[k]) && finite(s.uav_final[k]), "UAV endpoints are finite");
        require(std::isfinite(s.uav_altitudes[k]) && s.uav_altitudes[k] > 0.0,
                "uav_altitudes > 0");
    }
    require(std::isfinite(s.sensing_altitude) && s.sensing_altitude > 0.0, "sensing_altitude > 0");
    require(std::isfinite(s.antenna_spacing_over_wavelength) && s.antenna_spacing_over_wavelength > 0.0,
            "antenna_spacing_over_wavelength > 0");
    require(std::isfinite(s.slot_duration) && s.slot_duration > 0.0, "slot_duration > 0");
    require(std::isfinite(s.p_max) && s.p_max > 0.0, "p_max > 0");
    require(std::isfinite(s.noise_power) && s.noise_power > 0.0, "noise_power > 0");
    require(std::isfinite(s.kappa) && s.kappa > 0.0, "kappa > 0");
    require(std::isfinite(s.gamma) && s.gamma >= 0.0, "gamma >= 0");
    require(std::isfinite(s.v_max) && s.v_max >= 0.0, "v_max >= 0");
    require(std::isfinite(s.d_min) && s.d_min >= 0.0, "d_min >= 0");

    const double reach = (s.num_slots - 1) * s.v_max * s.slot_duration;
    for (int k = 0; k < K; ++k)
    {
        const double dist = (s.uav_final[k] - s.uav_initial[k]).norm();
        if (dist > reach * (1.0 + 1e-12) + 1e-12)
        {
            std::ostringstream os;
            os << "straight-line reachability |q_F - q_I| <= (N-1) v_max dt for UAV " << k
               << " (" << dist << " m > " << reach << " m)";
            require(false, os.str());
        }
    }

    const double d2 = s.d_min * s.d_min;
    for (int k = 0; k < K; ++k)
    {
        for (int i = k + 1; i < K; ++i)
        {
            const double dh = s.uav_altitudes[k] - s.uav_altitudes[i];
            const double at_start = (s.uav_initial[k] - s.uav_initial[i]).squaredNorm() + dh * dh;
            const double at_end = (s.uav_final[k] - s.uav_final[i]).squaredNorm() + dh * dh;
            if (at_start < d2 || at_end < d2)
            {
                std::ostringstream os;
                os << "collision-free endpoints for UAV pair (" << k << ", " << i << ")";
                require(false, os.str());
            }
        }
    }
}

Scenario reference_scenario()
{
    Scenario s;
    s.gbs_positions = {Vec2(184.0, 213.0), Vec2(184.0, 187.0), Vec2(216.0, 200.0)};
    s.uav_initial = {Vec2(50.0, 250.0), Vec2(50.0, 150.0)};
    s.uav_final = {Vec2(350.0, 250.0), Vec2(350.0, 150.0)};
    s.uav_altitudes = {80.0, 100.0};

    // 5 x 4 grid of monitored locations among the GBSs, 8 m apart.
    for (int iy = 0; iy < 4; ++iy)
        for (int ix = 0; ix < 5; ++ix)
            s.sensing_points.emplace_back(184.0 + 8.0 * ix, 188.0 + 8.0 * iy);
    s.sensing_altitude = 12.0;

    s.num_antennas = 4;
    s.antenna_spacing_over_wavelength = 0.5;
    s.num_slots = 40;
    s.slot_duration = 1.0;
    s.p_max = 3.0;
    s.gamma = dbw_to_watts(-20.0);
    s.v_max = 10.0;
    s.d_min = 30.0;
    s.kappa = dbw_to_watts(-45.0);
    s.noise_power = dbw_to_watts(-100.0);
    return s;
}

} // namespace netisac
