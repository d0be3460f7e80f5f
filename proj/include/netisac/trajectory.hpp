#pragma once

#include <string>
#include <vector>

#include "netisac/conic/solver.hpp"
#include "netisac/design.hpp"
#include "netisac/parallel.hpp"

namespace netisac
{

/// g^H X g written as a cosine series in the entries of X, where g is the
/// steering vector from GBS m toward UAV k at horizontal position q:
/// sum_r X_rr + 2 sum_{p<s} |X_ps| cos(arg X_ps + 2 pi (d/lambda)(s-p) H_k / D).
double eta_mu(const CMatrix& covariance, const Vec2& q, const Scenario& scenario, int m, int k);

/// d eta_mu / dq = nu * (q - u_m); returns the scalar nu.
double eta_mu_slope(const CMatrix& covariance, const Vec2& q, const Scenario& scenario, int m, int k);

/// First-order model of r_{m,k}[n] around the current position q_k[n]:
/// r ~ intercept + gradient^T (q - q_k[n]).
struct TrajectoryTaylor
{
    double intercept = 0.0;
    Vec2 gradient = Vec2::Zero();
    double total = 0.0;        ///< all received power plus noise, in eta units
    double interference = 0.0; ///< total minus the own beam
    double total_slope = 0.0;
    double interference_slope = 0.0;
};

TrajectoryTaylor taylor_coefficients(const Design& design, const Scenario& scenario, int m, int k, int n);

/// Affine inner approximation of the separation constraint between UAVs k and
/// i: coeff^T (q_k - q_i) >= rhs.
struct CollisionCut
{
    Vec2 coeff = Vec2::Zero();
    double rhs = 0.0;
    /// False when the expansion points coincide and the altitude gap alone
    /// cannot provide the separation, so no (q_k, q_i) satisfies the cut.
    bool satisfiable = true;

    bool holds(const Vec2& q_k, const Vec2& q_i, double slack = 0.0) const
    {
        return coeff.dot(q_k - q_i) >= rhs - slack;
    }
};

CollisionCut linearize_collision(const Vec2& q_k, const Vec2& q_i, double h_k, double h_i, double d_min);

struct TrajectorySubproblemResult
{
    conic::Status status = conic::Status::NumericalFailure;
    std::vector<Vec2> positions; ///< [k * N + n], valid when status is optimal
    double model_objective = 0.0; ///< sum of the first-order models at the optimum
};

/// Maximizes the summed first-order rate models over all interior waypoints
/// subject to the speed limit, the linearized separation constraints and a
/// trust region of radius `radius` around the current trajectory. Endpoints
/// are constants. `taylor` is indexed [n * K + k] for the serving GBS.
TrajectorySubproblemResult solve_trajectory_subproblem(const Scenario& scenario, const Design& design,
                                                       const std::vector<TrajectoryTaylor>& taylor,
                                                       double radius,
                                                       const conic::SolverSettings& settings = {});

struct TrajectoryOptions
{
    /// Non-positive selects one slot's reach, v_max * slot_duration.
    double initial_radius = 0.0;
    double min_radius = 1e-3;
    int max_iterations = 50;
    double min_gain = 1e-7;
    conic::SolverSettings solver;
    Exec exec = Exec::Parallel;
};

struct TrajectoryResult
{
    conic::Status status = conic::Status::Optimal;
    std::vector<double> objective_trace; ///< exact objective, initial then each accepted step
    std::vector<double> radius_trace;    ///< radius used by each subproblem
    int iterations = 0;
    int accepted_steps = 0;
    double final_radius = 0.0;
    std::string message;
};

/// Trust-region SCA over the trajectories with covariances and association
/// fixed. A step is kept only if the exact objective improves by at least
/// min_gain; otherwise the radius halves. Stops below min_radius or after
/// max_iterations subproblems.
TrajectoryResult optimize_trajectory(Design& design, const Scenario& scenario,
                                     const TrajectoryOptions& options = {});

} // namespace netisac
