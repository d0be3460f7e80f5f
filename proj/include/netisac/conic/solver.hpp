#pragma once

#include "netisac/conic/problem.hpp"

namespace netisac::conic
{

enum class Status
{
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
};

const char* to_string(Status status);

struct SolverSettings
{
    double feasibility_tol = 1e-8;
    /// Stop once the barrier duality-gap bound nu/tau is below
    /// gap_tol * (1 + |objective|).
    double gap_tol = 1e-8;
    /// When round-off stalls the central path before gap_tol, the last
    /// centered point is still reported optimal if its gap bound is below
    /// this.
    double acceptable_gap_tol = 1e-6;
    /// Newton-step cap, applied separately to the feasibility and the
    /// optimality phase.
    int max_iterations = 200;
    double barrier_growth = 20.0;
    /// Centering stops once half the squared Newton decrement is below this.
    double newton_tol = 1e-8;
};

struct Solution
{
    Status status = Status::NumericalFailure;
    double objective = 0.0;
    Eigen::VectorXd x;
    int iterations = 0;
    double gap = 0.0;
    double seconds = 0.0;

    bool ok() const { return status == Status::Optimal; }
};

/// Primal log-barrier interior-point method.
///
/// A phase-I problem relaxes every cone by a common scalar to find a strictly
/// feasible start; phase II follows the central path. Returned points are
/// strictly interior, so every cone constraint holds exactly. Deterministic
/// and free of shared state.
Solution solve(const Problem& problem, const SolverSettings& settings = {});

} // namespace netisac::conic
