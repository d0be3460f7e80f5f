#pragma once

#include <string>
#include <vector>

#include "netisac/conic/solver.hpp"
#include "netisac/design.hpp"
#include "netisac/parallel.hpp"

namespace netisac
{

/// Linearization data of the interference term of r_{m,k}[n] at an expansion
/// point: B = log2(e) H / D and a = log2(D), where D is the
/// interference-plus-noise power at the expansion point.
struct SurrogateCoefficients
{
    CMatrix b;
    double a = 0.0;
    double interference_plus_noise = 0.0;
};

/// Coefficients for pair (m, k) at slot n; the channel uses the expansion's
/// trajectory.
SurrogateCoefficients surrogate_coefficients(const Design& expansion, const Scenario& scenario, int m,
                                             int k, int n);

/// Concave lower bound of r_{m,k}[n], tight at the expansion point. The
/// candidate must share the expansion's trajectory.
double surrogate_rate(const Design& candidate, const Design& expansion,
                      const SurrogateCoefficients& coeffs, const Scenario& scenario, int m, int k,
                      int n);

/// Admissible covariance shapes. Isotropic restricts every covariance to a
/// scaled identity, leaving only powers free.
enum class CovarianceClass
{
    Full,
    Isotropic,
};

struct SdrOptions
{
    CovarianceClass covariance = CovarianceClass::Full;
    conic::SolverSettings solver;
    Exec exec = Exec::Parallel;
};

struct SlotSdrResult
{
    conic::Status status = conic::Status::NumericalFailure;
    double surrogate_objective = 0.0; ///< sum of surrogate rates at the optimum
    int solver_iterations = 0;
};

/// Solves the relaxed surrogate problem of slot n around `expansion` and
/// writes the optimal covariances of slot n into `out`. Unassociated W_{m,k}
/// are fixed to zero. On a non-optimal status `out` is left untouched.
/// A numerical failure is retried once with more conservative settings.
SlotSdrResult solve_sdr_slot(const Scenario& scenario, const Design& expansion, int n,
                             const SdrOptions& options, Design& out);

struct SdrResult
{
    conic::Status status = conic::Status::Optimal; ///< worst slot status
    Design candidate;
    double surrogate_objective = 0.0;
    std::vector<conic::Status> slot_status;
    std::string message;
};

/// All slots of the relaxed surrogate problem; slots are independent.
SdrResult solve_sdr_subproblem(const Scenario& scenario, const Design& expansion,
                               const SdrOptions& options);

/// Rank-one beams and residual sensing covariance for one GBS and slot.
struct ReconstructedCovariances
{
    std::vector<CMatrix> beams;
    CMatrix sensing;
};

/// beams[i] is served through channels[i]. Each beam becomes
/// W h h^H W / (h^H W h); the remainder moves into the sensing covariance, so
/// the transmit covariance is unchanged. A beam carrying no power toward its
/// channel is folded entirely into the sensing covariance.
ReconstructedCovariances rank_one_reconstruct(const std::vector<CMatrix>& beams,
                                              const CMatrix& sensing,
                                              const std::vector<CVector>& channels);

/// Applies rank_one_reconstruct to every associated pair of every slot.
void rank_one_reconstruct(Design& design, const Scenario& scenario);

struct BeamformingOptions
{
    SdrOptions sdr;
    double rel_tol = 1e-4;
    int max_iterations = 30;
    bool reconstruct = true;
};

struct BeamformingResult
{
    conic::Status status = conic::Status::Optimal;
    /// Exact objective sum_n r[n] before the first and after each iteration.
    std::vector<double> objective_trace;
    int iterations = 0;
    std::string message;
};

/// SCA over the covariances with association and trajectory held fixed. Each
/// slot iterates until its relative improvement drops below rel_tol; a
/// candidate that lowers the exact slot rate is rejected, so the objective
/// never decreases. Statuses of failed slots are reported; those slots keep
/// their last accepted covariances.
BeamformingResult optimize_beamforming(Design& design, const Scenario& scenario,
                                       const BeamformingOptions& options = {});

/// Feasible starting covariances for every slot.
///
/// Full: MRT beams toward each associated UAV sharing a fraction rho of P_max,
/// plus an isotropic sensing covariance with the rest; rho is the largest
/// value keeping every sensing constraint of the slot. When even rho = 0 fails
/// and `sensing_fallback` (one covariance per GBS) meets the threshold, the
/// slot starts from it with zero beams.
/// Isotropic: full power split evenly, which fixes the illumination.
/// Returns Infeasible when some slot cannot meet the threshold.
conic::Status initialize_beamforming(Design& design, const Scenario& scenario, CovarianceClass cls,
                                     const std::vector<CMatrix>* sensing_fallback = nullptr);

} // namespace netisac
