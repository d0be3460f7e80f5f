#pragma once

#include <vector>

#include "netisac/types.hpp"

namespace netisac
{

/// Immutable deployment description. All quantities are SI (meters, seconds,
/// watts); configuration files may use dB variants, converted on load.
struct Scenario
{
    std::vector<Vec2> gbs_positions;
    std::vector<Vec2> uav_initial;
    std::vector<Vec2> uav_final;
    std::vector<double> uav_altitudes;
    std::vector<Vec2> sensing_points;
    double sensing_altitude = 0.0;

    int num_antennas = 0;
    double antenna_spacing_over_wavelength = 0.5;

    int num_slots = 0;
    double slot_duration = 0.0;

    double p_max = 0.0;
    double gamma = 0.0; ///< illumination threshold, watts
    double v_max = 0.0;
    double d_min = 0.0;
    double kappa = 0.0;
    double noise_power = 0.0;

    int num_gbs() const { return static_cast<int>(gbs_positions.size()); }
    int num_uavs() const { return static_cast<int>(uav_initial.size()); }
    int num_sensing() const { return static_cast<int>(sensing_points.size()); }

    /// Largest horizontal displacement per slot.
    double max_step() const { return v_max * slot_duration; }

    /// Same deployment with `n` slots over the same flight duration.
    Scenario with_num_slots(int n) const;

    /// Same deployment with a different illumination threshold.
    Scenario with_gamma(double gamma_watts) const;
};

/// Violation of a Scenario invariant; the message names the invariant.
class ScenarioError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Throws ScenarioError on the first violated invariant.
void validate(const Scenario& scenario);

/// Deployment used in the numerical study (M=3, K=2, Q=20, N=40).
Scenario reference_scenario();

} // namespace netisac
