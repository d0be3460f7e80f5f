#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netisac/beamforming.hpp"
#include "netisac/trajectory.hpp"

namespace netisac
{

struct IlluminationFloor
{
    conic::Status status = conic::Status::Optimal;
    double floor = 0.0;               ///< watts
    std::vector<CMatrix> covariances; ///< per GBS, attaining the floor
};

/// Largest threshold every sensing point can receive at once under the power
/// budget. Trajectories play no part: illumination depends only on GBS and
/// sensing geometry.
IlluminationFloor max_min_illumination(const Scenario& scenario,
                                       const conic::SolverSettings& settings = {});

/// Sensing limit of isotropic transmission at full power,
/// min_q sum_l P_max / d_{l,q}^2.
double isotropic_illumination_limit(const Scenario& scenario);

enum class Method
{
    Proposed,
    StraightFlight,
    Isotropic,
};

const char* to_string(Method method);
std::optional<Method> parse_method(const std::string& name);

enum class Stage
{
    Initial,
    Association,
    Beamforming,
    Trajectory,
};

const char* to_string(Stage stage);

/// One stage of one outer iteration; `objective` is the exact sum over slots
/// after the stage.
struct StageRecord
{
    int outer = 0;
    Stage stage = Stage::Initial;
    double objective = 0.0;
    double seconds = 0.0;
    conic::Status status = conic::Status::Optimal;
    int inner_iterations = 0;
    double trust_radius = 0.0; ///< final radius of a trajectory stage, else 0
};

struct AoTrace
{
    std::vector<StageRecord> stages;
    int outer_iterations = 0;
    bool converged = false;

    std::vector<double> objectives() const;
};

enum class RunStatus
{
    Solved,
    Infeasible,
    NumericalFailure,
};

const char* to_string(RunStatus status);

struct SolveOptions
{
    Method method = Method::Proposed;
    double rel_tol = 1e-4;
    int max_outer = 20;
    /// Proposed only: also run the straight-flight pipeline and start the
    /// full pipeline from the better of its result and the initial design.
    bool straight_stage = true;
    BeamformingOptions beamforming;
    TrajectoryOptions trajectory;
    Exec exec = Exec::Parallel;
};

struct SolveResult
{
    RunStatus status = RunStatus::Solved;
    Method method = Method::Proposed;
    Design design;
    AoTrace trace;
    double objective = 0.0; ///< sum over slots of the sum rate
    std::string message;

    double average_sum_rate() const
    {
        return design.num_slots() > 0 ? objective / design.num_slots() : 0.0;
    }
};

/// Alternating optimization of association, covariances and trajectories for
/// `options.method`. A feasible `initial` design of the right class may seed
/// the run; otherwise the run starts from straight flight, nearest-GBS
/// association and the beamforming initializer. Every stage is kept only if
/// the exact objective does not drop.
SolveResult solve(const Scenario& scenario, const SolveOptions& options = {},
                  const Design* initial = nullptr);

/// Straight constant-speed flight; alternates association and covariances.
SolveResult baseline_straight_flight(const Scenario& scenario, SolveOptions options = {},
                                     const Design* initial = nullptr);

/// Scaled-identity covariances; alternates association, powers and
/// trajectories.
SolveResult baseline_isotropic(const Scenario& scenario, SolveOptions options = {},
                               const Design* initial = nullptr);

struct SweepPoint
{
    double gamma_dbw = 0.0;
    Method method = Method::Proposed;
    bool feasible = false;
    double average_sum_rate = 0.0; ///< meaningful only when feasible
    RunStatus status = RunStatus::Infeasible;
    std::string message;
};

struct SweepResult
{
    std::vector<SweepPoint> points; ///< ascending gamma, then method order given
};

/// Runs every method at every threshold. Thresholds are visited in
/// descending order and each method warm-starts from its own previous
/// feasible design; a failed point is recorded and the sweep goes on.
SweepResult gamma_sweep(const Scenario& scenario, std::vector<double> gammas_dbw,
                        const std::vector<Method>& methods, const SolveOptions& options = {});

} // namespace netisac
