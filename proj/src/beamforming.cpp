#include "netisac/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "netisac/conic/problem.hpp"
#include "netisac/model.hpp"

namespace netisac
{

SurrogateCoefficients surrogate_coefficients(const Design& expansion, const Scenario& scenario, int m,
                                             int k, int n)
{
    const CVector h = channel_vector(scenario, m, expansion.q(k, n), scenario.uav_altitudes[k]);
    const LinkBudget budget = link_budget(expansion, scenario, m, k, n);
    SurrogateCoefficients out;
    out.interference_plus_noise = budget.interference_plus_noise;
    out.a = std::log2(budget.interference_plus_noise);
    out.b = (kLog2E / budget.interference_plus_noise) * (h * h.adjoint());
    return out;
}

double surrogate_rate(const Design& candidate, const Design& expansion,
                      const SurrogateCoefficients& coeffs, const Scenario& scenario, int m, int k,
                      int n)
{
    const CVector h = channel_vector(scenario, m, expansion.q(k, n), scenario.uav_altitudes[k]);
    double received = scenario.noise_power;
    double linear = 0.0;
    for (int l = 0; l < candidate.num_gbs(); ++l)
    {
        for (int i = 0; i < candidate.num_uavs(); ++i)
        {
            received += quad_form(candidate.w(l, i, n), h);
            if (l == m && i == k)
                continue;
            linear += (coeffs.b * (candidate.w(l, i, n) - expansion.w(l, i, n))).trace().real();
        }
        received += quad_form(candidate.r(l, n), h);
        linear += (coeffs.b * (candidate.r(l, n) - expansion.r(l, n))).trace().real();
    }
    return std::log2(received) - coeffs.a - linear;
}

namespace
{

using conic::LinExpr;

/// One covariance decision of the slot problem in either admissible class.
struct CovarianceVar
{
    bool isotropic = false;
    conic::HermitianBlock block;
    int power_index = -1;
    int dim = 0;

    static CovarianceVar add(conic::Problem& p, CovarianceClass cls, int dim, const std::string& name)
    {
        CovarianceVar v;
        v.dim = dim;
        if (cls == CovarianceClass::Full)
        {
            v.block = p.add_hermitian_psd(name, dim);
            return v;
        }
        v.isotropic = true;
        const auto power = p.add_free(name, 1);
        v.power_index = power.offset;
        p.add_nonneg(power[0]);
        return v;
    }

    /// Re tr(A X).
    LinExpr trace_product(const CMatrix& a) const
    {
        if (!isotropic)
            return block.trace_product(a);
        return LinExpr::variable(power_index, a.trace().real() / dim);
    }

    LinExpr trace() const { return isotropic ? LinExpr::variable(power_index) : block.trace(); }

    CMatrix value(const Eigen::VectorXd& x) const
    {
        if (!isotropic)
            return block.value(x);
        return CMatrix::Identity(dim, dim) * std::max(0.0, x[power_index]) / static_cast<double>(dim);
    }
};

struct SlotPair
{
    int m;
    int k;
    CVector h;
    SurrogateCoefficients coeffs;
};

conic::Solution solve_with_retry(const conic::Problem& p, const conic::SolverSettings& settings,
                                 int& iterations)
{
    conic::Solution sol = conic::solve(p, settings);
    iterations = sol.iterations;
    if (sol.status != conic::Status::NumericalFailure)
        return sol;
    conic::SolverSettings careful = settings;
    careful.barrier_growth = std::min(settings.barrier_growth, 6.0);
    careful.max_iterations = std::max(settings.max_iterations, 2 * settings.max_iterations);
    sol = conic::solve(p, careful);
    iterations += sol.iterations;
    return sol;
}

} // namespace

SlotSdrResult solve_sdr_slot(const Scenario& scenario, const Design& expansion, int n,
                             const SdrOptions& options, Design& out)
{
    const int M = scenario.num_gbs();
    const int K = scenario.num_uavs();
    const int na = scenario.num_antennas;
    const double noise = scenario.noise_power;

    conic::Problem p;
    std::vector<CovarianceVar> sensing(M);
    std::vector<std::vector<int>> beam_of(M, std::vector<int>(K, -1));
    std::vector<CovarianceVar> beams;
    for (int m = 0; m < M; ++m)
    {
        sensing[m] = CovarianceVar::add(p, options.covariance, na, "R" + std::to_string(m));
        for (int k = 0; k < K; ++k)
            if (expansion.serving(k, n) == m)
            {
                beam_of[m][k] = static_cast<int>(beams.size());
                beams.push_back(CovarianceVar::add(p, options.covariance, na,
                                                   "W" + std::to_string(m) + "_" + std::to_string(k)));
            }
    }

    auto total_form = [&](int m, const CMatrix& a) {
        LinExpr e = sensing[m].trace_product(a);
        for (int k = 0; k < K; ++k)
            if (beam_of[m][k] >= 0)
                e += beams[beam_of[m][k]].trace_product(a);
        return e;
    };

    // Rate terms: t_k <= ln(1 + sum_l tr(H X_l) / noise).
    std::vector<SlotPair> pairs;
    for (int k = 0; k < K; ++k)
    {
        const int m = expansion.serving(k, n);
        SlotPair pair{m, k, channel_vector(scenario, m, expansion.q(k, n), scenario.uav_altitudes[k]),
                      surrogate_coefficients(expansion, scenario, m, k, n)};
        pairs.push_back(std::move(pair));
    }
    const auto t = p.add_free("t", K);
    LinExpr objective;
    std::vector<LinExpr> received(K);
    std::vector<LinExpr> linearized(K);
    for (int k = 0; k < K; ++k)
    {
        const SlotPair& pair = pairs[k];
        const CMatrix h_scaled = (pair.h * pair.h.adjoint()) / noise;
        LinExpr u(1.0);
        LinExpr lin;
        for (int l = 0; l < M; ++l)
        {
            u += total_form(l, h_scaled);
            lin += total_form(l, pair.coeffs.b);
        }
        lin -= beams[beam_of[pair.m][k]].trace_product(pair.coeffs.b);
        p.add_log_hypograph(t[k], u);
        objective += kLog2E * t[k];
        objective -= lin;
        received[k] = std::move(u);
        linearized[k] = std::move(lin);
    }
    p.set_objective(conic::Sense::Maximize, objective);

    for (int m = 0; m < M; ++m)
    {
        LinExpr slack(1.0);
        slack -= (1.0 / scenario.p_max) * total_form(m, CMatrix::Identity(na, na)).compressed();
        p.add_nonneg(slack);
    }

    if (scenario.gamma > 0.0)
    {
        for (int q = 0; q < scenario.num_sensing(); ++q)
        {
            LinExpr zeta(-1.0);
            for (int l = 0; l < M; ++l)
            {
                const Vec2& u = scenario.gbs_positions[l];
                const Vec2& v = scenario.sensing_points[q];
                const double h = scenario.sensing_altitude;
                const double dist2 = (u - v).squaredNorm() + h * h;
                const CVector a = steering_vector(h / std::sqrt(dist2), na,
                                                  scenario.antenna_spacing_over_wavelength);
                zeta += total_form(l, (a * a.adjoint()) / (dist2 * scenario.gamma));
            }
            p.add_nonneg(zeta.compressed());
        }
    }

    SlotSdrResult result;
    const conic::Solution sol = solve_with_retry(p, options.solver, result.solver_iterations);
    result.status = sol.status;
    if (!sol.ok())
        return result;

    // Surrogate value with the logarithm evaluated exactly at the optimum.
    double value = 0.0;
    for (int k = 0; k < K; ++k)
    {
        const double d = pairs[k].coeffs.interference_plus_noise;
        value += std::log2(noise * received[k].eval(sol.x)) - pairs[k].coeffs.a -
                 (linearized[k].eval(sol.x) - kLog2E * (d - noise) / d);
    }
    result.surrogate_objective = value;

    for (int m = 0; m < M; ++m)
    {
        out.r(m, n) = sensing[m].value(sol.x);
        for (int k = 0; k < K; ++k)
            out.w(m, k, n) = beam_of[m][k] >= 0 ? beams[beam_of[m][k]].value(sol.x)
                                                : CMatrix::Zero(na, na);
    }
    return result;
}

namespace
{

int severity(conic::Status s)
{
    switch (s)
    {
    case conic::Status::Optimal: return 0;
    case conic::Status::Unbounded: return 1;
    case conic::Status::NumericalFailure: return 2;
    case conic::Status::Infeasible: return 3;
    }
    return 2;
}

std::string infeasibility_message(const Scenario& s, int slot)
{
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "illumination threshold %.3f dBW is not achievable with P_max = %.4g W (slot %d)",
                  watts_to_dbw(s.gamma), s.p_max, slot);
    return buf;
}

} // namespace

SdrResult solve_sdr_subproblem(const Scenario& scenario, const Design& expansion,
                               const SdrOptions& options)
{
    SdrResult out;
    out.candidate = expansion;
    const int N = scenario.num_slots;
    out.slot_status.assign(N, conic::Status::Optimal);
    std::vector<double> values(N, 0.0);
    for_each_index(options.exec, N, [&](int n) {
        const SlotSdrResult r = solve_sdr_slot(scenario, expansion, n, options, out.candidate);
        out.slot_status[n] = r.status;
        values[n] = r.surrogate_objective;
    });
    for (int n = 0; n < N; ++n)
    {
        out.surrogate_objective += values[n];
        if (severity(out.slot_status[n]) > severity(out.status))
        {
            out.status = out.slot_status[n];
            out.message = out.status == conic::Status::Infeasible
                              ? infeasibility_message(scenario, n)
                              : std::string("slot ") + std::to_string(n) + ": " + conic::to_string(out.status);
        }
    }
    return out;
}

ReconstructedCovariances rank_one_reconstruct(const std::vector<CMatrix>& beams,
                                              const CMatrix& sensing,
                                              const std::vector<CVector>& channels)
{
    if (beams.size() != channels.size())
        throw InvalidArgument("rank_one_reconstruct: one channel per beam required");
    ReconstructedCovariances out;
    out.sensing = sensing;
    for (size_t i = 0; i < beams.size(); ++i)
    {
        const CMatrix& w = beams[i];
        const CVector& h = channels[i];
        const CVector wh = w * h;
        const double gain = h.dot(wh).real();
        const double scale = std::max(0.0, w.trace().real()) * h.squaredNorm();
        if (!(gain > 1e-14 * scale) || !(gain > 0.0))
        {
            out.beams.push_back(CMatrix::Zero(w.rows(), w.cols()));
            out.sensing += w;
            continue;
        }
        const CVector beam = wh / std::sqrt(gain);
        CMatrix rank_one = beam * beam.adjoint();
        out.sensing += w - rank_one;
        out.beams.push_back(std::move(rank_one));
    }
    out.sensing = 0.5 * (out.sensing + out.sensing.adjoint()).eval();
    return out;
}

void rank_one_reconstruct(Design& design, const Scenario& scenario)
{
    design.fold_unassociated();
    for (int n = 0; n < design.num_slots(); ++n)
    {
        for (int m = 0; m < design.num_gbs(); ++m)
        {
            std::vector<int> served;
            std::vector<CMatrix> beams;
            std::vector<CVector> channels;
            for (int k = 0; k < design.num_uavs(); ++k)
                if (design.serving(k, n) == m)
                {
                    served.push_back(k);
                    beams.push_back(design.w(m, k, n));
                    channels.push_back(channel_vector(scenario, m, design.q(k, n), scenario.uav_altitudes[k]));
                }
            if (served.empty())
                continue;
            ReconstructedCovariances rc = rank_one_reconstruct(beams, design.r(m, n), channels);
            design.r(m, n) = std::move(rc.sensing);
            for (size_t i = 0; i < served.size(); ++i)
                design.w(m, served[i], n) = std::move(rc.beams[i]);
        }
    }
}

BeamformingResult optimize_beamforming(Design& design, const Scenario& scenario,
                                       const BeamformingOptions& options)
{
    design.fold_unassociated();
    const int N = scenario.num_slots;
    const int M = scenario.num_gbs();
    const int K = scenario.num_uavs();
    std::vector<std::vector<double>> history(N);
    std::vector<conic::Status> status(N, conic::Status::Optimal);

    for_each_index(options.sdr.exec, N, [&](int n) {
        std::vector<CMatrix> backup_w(static_cast<size_t>(M) * K);
        std::vector<CMatrix> backup_r(M);
        double current = sum_rate(design, scenario, n);
        history[n].push_back(current);
        for (int it = 0; it < options.max_iterations; ++it)
        {
            for (int m = 0; m < M; ++m)
            {
                backup_r[m] = design.r(m, n);
                for (int k = 0; k < K; ++k)
                    backup_w[m * K + k] = design.w(m, k, n);
            }
            // Reads slot n of the expansion before writing the candidate over it.
            const SlotSdrResult r = solve_sdr_slot(scenario, design, n, options.sdr, design);
            if (!(r.status == conic::Status::Optimal))
            {
                status[n] = r.status;
                break;
            }
            const double candidate = sum_rate(design, scenario, n);
            if (candidate < current)
            {
                for (int m = 0; m < M; ++m)
                {
                    design.r(m, n) = backup_r[m];
                    for (int k = 0; k < K; ++k)
                        design.w(m, k, n) = backup_w[m * K + k];
                }
                break;
            }
            const double improvement = (candidate - current) / std::max(std::abs(candidate), 1e-12);
            current = candidate;
            history[n].push_back(current);
            if (improvement < options.rel_tol)
                break;
        }
    });

    BeamformingResult out;
    size_t longest = 0;
    for (const auto& h : history)
        longest = std::max(longest, h.size());
    for (size_t it = 0; it < longest; ++it)
    {
        double total = 0.0;
        for (const auto& h : history)
            total += h[std::min(it, h.size() - 1)];
        out.objective_trace.push_back(total);
    }
    out.iterations = static_cast<int>(longest) - 1;

    for (int n = 0; n < N; ++n)
        if (severity(status[n]) > severity(out.status))
        {
            out.status = status[n];
            out.message = status[n] == conic::Status::Infeasible
                              ? infeasibility_message(scenario, n)
                              : std::string("slot ") + std::to_string(n) + ": " + conic::to_string(status[n]);
        }

    if (options.reconstruct && options.sdr.covariance == CovarianceClass::Full)
    {
        const Design relaxed = design;
        const double before = total_rate(relaxed, scenario);
        rank_one_reconstruct(design, scenario);
        const double after = total_rate(design, scenario);
        bool conserved = std::abs(after - before) <= 1e-7 * std::max(std::abs(before), 1e-300);
        for (int n = 0; n < N && conserved; ++n)
            for (int m = 0; m < M && conserved; ++m)
                conserved = min_eigenvalue(design.r(m, n)) >= -1e-8 * scenario.p_max;
        if (conserved)
        {
            out.objective_trace.back() = after;
        }
        else
        {
            design = relaxed;
            if (out.message.empty())
                out.message = "rank-one reconstruction changed the design; kept the relaxed covariances";
        }
    }
    return out;
}

conic::Status initialize_beamforming(Design& design, const Scenario& scenario, CovarianceClass cls,
                                     const std::vector<CMatrix>* sensing_fallback)
{
    const int M = scenario.num_gbs();
    const int K = scenario.num_uavs();
    const int Q = scenario.num_sensing();
    const int na = scenario.num_antennas;
    const double power = scenario.p_max;
    const CMatrix iso = CMatrix::Identity(na, na) / static_cast<double>(na);

    auto meets_threshold = [&](int n, double rel_tol) {
        for (int q = 0; q < Q; ++q)
            if (illumination_power(design, scenario, q, n) < scenario.gamma * (1.0 - rel_tol))
                return false;
        return true;
    };
    auto set_split = [&](int n, double rho) {
        for (int m = 0; m < M; ++m)
        {
            int served = 0;
            for (int k = 0; k < K; ++k)
                served += design.serving(k, n) == m ? 1 : 0;
            const double beam_share = served > 0 ? rho * power / served : 0.0;
            for (int k = 0; k < K; ++k)
            {
                if (design.serving(k, n) != m)
                {
                    design.w(m, k, n).setZero();
                    continue;
                }
                if (cls == CovarianceClass::Isotropic)
                {
                    design.w(m, k, n) = beam_share * iso;
                    continue;
                }
                const CVector h = channel_vector(scenario, m, design.q(k, n), scenario.uav_altitudes[k]);
                design.w(m, k, n) = beam_share * (h * h.adjoint()) / h.squaredNorm();
            }
            design.r(m, n) = (served > 0 ? (1.0 - rho) * power : power) * iso;
        }
    };

    conic::Status status = conic::Status::Optimal;
    for (int n = 0; n < scenario.num_slots; ++n)
    {
        if (cls == CovarianceClass::Isotropic)
        {
            set_split(n, 1.0);
            if (!meets_threshold(n, 0.0))
                status = conic::Status::Infeasible;
            continue;
        }

        // Illumination is affine in rho, so the largest admissible rho is exact.
        set_split(n, 0.0);
        std::vector<double> base(Q);
        for (int q = 0; q < Q; ++q)
            base[q] = illumination_power(design, scenario, q, n);
        if (meets_threshold(n, 0.0))
        {
            set_split(n, 1.0);
            double rho = 1.0;
            for (int q = 0; q < Q; ++q)
            {
                const double full = illumination_power(design, scenario, q, n);
                if (full < scenario.gamma)
                    rho = std::min(rho, (base[q] - scenario.gamma) / (base[q] - full));
            }
            set_split(n, std::clamp(rho, 0.0, 1.0));
            if (!meets_threshold(n, 1e-9))
                set_split(n, 0.0);
            continue;
        }

        if (sensing_fallback && static_cast<int>(sensing_fallback->size()) == M)
        {
            for (int m = 0; m < M; ++m)
            {
                design.r(m, n) = (*sensing_fallback)[m];
                for (int k = 0; k < K; ++k)
                    design.w(m, k, n).setZero();
            }
            if (meets_threshold(n, 1e-7))
                continue;
        }
        status = conic::Status::Infeasible;
    }
    return status;
}

} // namespace netisac
