#include "netisac/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>

#include "netisac/association.hpp"
#include "netisac/conic/problem.hpp"
#include "netisac/model.hpp"

namespace netisac
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double sensing_distance2(const Scenario& s, int l, int q)
{
    const double h = s.sensing_altitude;
    return (s.gbs_positions[l] - s.sensing_points[q]).squaredNorm() + h * h;
}

CVector sensing_steering(const Scenario& s, int l, int q)
{
    return steering_vector(s.sensing_altitude / std::sqrt(sensing_distance2(s, l, q)), s.num_antennas,
                           s.antenna_spacing_over_wavelength);
}

std::string format_dbw(double watts)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f dBW", watts_to_dbw(watts));
    return buf;
}

bool has_straight_trajectories(const Design& d, const Scenario& s)
{
    const Design straight = Design::straight_flight(s);
    for (int k = 0; k < s.num_uavs(); ++k)
        for (int n = 0; n < s.num_slots; ++n)
            if ((d.q(k, n) - straight.q(k, n)).norm() > 1e-9 * (1.0 + straight.q(k, n).norm()))
                return false;
    return true;
}

bool is_scaled_identity(const CMatrix& x)
{
    const double scale = x.trace().real() / static_cast<double>(x.rows());
    const CMatrix expected = scale * CMatrix::Identity(x.rows(), x.cols());
    return (x - expected).norm() <= 1e-12 * std::max(1.0, std::abs(x.trace()));
}

bool has_isotropic_covariances(const Design& d)
{
    for (int n = 0; n < d.num_slots(); ++n)
        for (int m = 0; m < d.num_gbs(); ++m)
        {
            if (!is_scaled_identity(d.r(m, n)))
                return false;
            for (int k = 0; k < d.num_uavs(); ++k)
                if (!is_scaled_identity(d.w(m, k, n)))
                    return false;
        }
    return true;
}

struct Pipeline
{
    CovarianceClass covariance = CovarianceClass::Full;
    bool trajectory = true;
};

Pipeline pipeline_of(Method method)
{
    switch (method)
    {
    case Method::Proposed:
        return {CovarianceClass::Full, true};
    case Method::StraightFlight:
        return {CovarianceClass::Full, false};
    case Method::Isotropic:
        return {CovarianceClass::Isotropic, true};
    }
    return {};
}

/// Whether `d` may seed `method` on this scenario.
bool usable_seed(const Design& d, const Scenario& s, Method method)
{
    if (!d.same_shape(Design(s.num_gbs(), s.num_uavs(), s.num_slots, s.num_antennas)))
        return false;
    if (!check_constraints(d, s).empty())
        return false;
    if (method == Method::StraightFlight && !has_straight_trajectories(d, s))
        return false;
    if (method == Method::Isotropic && !has_isotropic_covariances(d))
        return false;
    return true;
}

struct Start
{
    RunStatus status = RunStatus::Solved;
    Design design;
    std::string message;
};

Start fresh_start(const Scenario& s, CovarianceClass cls, const IlluminationFloor& floor)
{
    Start out;
    if (cls == CovarianceClass::Full)
    {
        if (floor.status != conic::Status::Optimal)
        {
            out.status = RunStatus::NumericalFailure;
            out.message = std::string("illumination floor: ") + conic::to_string(floor.status);
            return out;
        }
        if (s.gamma > floor.floor * (1.0 + 1e-6))
        {
            out.status = RunStatus::Infeasible;
            out.message = "illumination threshold " + format_dbw(s.gamma) + " exceeds the achievable floor " +
                          format_dbw(floor.floor) + " at P_max = " + std::to_string(s.p_max) + " W";
            return out;
        }
    }
    else
    {
        const double limit = isotropic_illumination_limit(s);
        if (s.gamma > limit * (1.0 + 1e-9))
        {
            out.status = RunStatus::Infeasible;
            out.message = "illumination threshold " + format_dbw(s.gamma) +
                          " exceeds the isotropic limit " + format_dbw(limit) + " at P_max = " +
                          std::to_string(s.p_max) + " W";
            return out;
        }
    }
    out.design = Design::straight_flight(s);
    const conic::Status init = initialize_beamforming(out.design, s, cls, &floor.covariances);
    if (init != conic::Status::Optimal)
    {
        out.status = init == conic::Status::Infeasible ? RunStatus::Infeasible : RunStatus::NumericalFailure;
        out.message = "beamforming initialization: " + std::string(conic::to_string(init)) +
                      " at threshold " + format_dbw(s.gamma);
    }
    return out;
}

SolveResult run_ao(const Scenario& s, const SolveOptions& o, Method method, Design design)
{
    const Pipeline p = pipeline_of(method);
    SolveResult out;
    out.method = method;
    AoTrace& trace = out.trace;

    BeamformingOptions bf = o.beamforming;
    bf.sdr.covariance = p.covariance;
    bf.sdr.exec = o.exec;
    bf.reconstruct = bf.reconstruct && p.covariance == CovarianceClass::Full;
    TrajectoryOptions tr = o.trajectory;
    tr.exec = o.exec;

    double current = total_rate(design, s);
    trace.stages.push_back({0, Stage::Initial, current, 0.0, conic::Status::Optimal, 0, 0.0});
    std::string stage_notes;

    // Keeps the stage output only when the exact objective did not drop.
    auto settle = [&](Design& backup, StageRecord record, Clock::time_point started) {
        const double value = total_rate(design, s);
        if (value < current)
            design = std::move(backup);
        else
            current = value;
        record.objective = current;
        record.seconds = seconds_since(started);
        trace.stages.push_back(record);
    };

    for (int outer = 1; outer <= o.max_outer; ++outer)
    {
        const double before = current;

        auto started = Clock::now();
        Design backup = design;
        optimize_association(design, s, o.exec);
        settle(backup, {outer, Stage::Association, 0.0, 0.0, conic::Status::Optimal, 1, 0.0}, started);

        started = Clock::now();
        backup = design;
        const BeamformingResult b = optimize_beamforming(design, s, bf);
        if (b.status != conic::Status::Optimal)
            stage_notes = "beamforming, outer " + std::to_string(outer) + ": " + b.message;
        settle(backup, {outer, Stage::Beamforming, 0.0, 0.0, b.status, b.iterations, 0.0}, started);

        if (p.trajectory)
        {
            started = Clock::now();
            backup = design;
            const TrajectoryResult t = optimize_trajectory(design, s, tr);
            settle(backup, {outer, Stage::Trajectory, 0.0, 0.0, t.status, t.iterations, t.final_radius},
                   started);
        }

        trace.outer_iterations = outer;
        if (current - before <= o.rel_tol * std::max(std::abs(current), 1e-12))
        {
            trace.converged = true;
            break;
        }
    }

    out.objective = current;
    out.design = std::move(design);
    const ViolationReport report = check_constraints(out.design, s);
    if (!report.empty())
    {
        out.status = RunStatus::NumericalFailure;
        out.message = "final design violates constraints: " + report.summary();
    }
    else
    {
        out.message = stage_notes;
    }
    return out;
}

SolveResult failed(Method method, const Start& start)
{
    SolveResult out;
    out.method = method;
    out.status = start.status;
    out.message = start.message;
    return out;
}

SolveResult solve_with_floor(const Scenario& s, const SolveOptions& o, const Design* initial,
                             const IlluminationFloor& floor)
{
    const Method method = o.method;
    const Pipeline p = pipeline_of(method);
    const bool seeded = initial != nullptr && usable_seed(*initial, s, method);

    if (method != Method::Proposed || !o.straight_stage)
    {
        if (seeded)
            return run_ao(s, o, method, *initial);
        const Start start = fresh_start(s, p.covariance, floor);
        if (start.status != RunStatus::Solved)
            return failed(method, start);
        return run_ao(s, o, method, start.design);
    }

    SolveOptions straight_options = o;
    straight_options.method = Method::StraightFlight;
    const SolveResult straight = solve_with_floor(s, straight_options, nullptr, floor);
    if (straight.status == RunStatus::Infeasible)
    {
        SolveResult out = straight;
        out.method = method;
        return out;
    }
    const bool straight_ok = straight.status == RunStatus::Solved;
    if (!straight_ok && !seeded)
    {
        const Start start = fresh_start(s, p.covariance, floor);
        if (start.status != RunStatus::Solved)
            return failed(method, start);
        return run_ao(s, o, method, start.design);
    }
    const Design* best = straight_ok ? &straight.design : initial;
    if (seeded && straight_ok && total_rate(*initial, s) > straight.objective)
        best = initial;
    return run_ao(s, o, method, *best);
}

} // namespace

IlluminationFloor max_min_illumination(const Scenario& s, const conic::SolverSettings& settings)
{
    IlluminationFloor out;
    const int M = s.num_gbs();
    const int na = s.num_antennas;
    out.covariances.assign(M, CMatrix::Zero(na, na));
    if (s.p_max <= 0.0 || M == 0)
        return out;

    // Illumination is expressed in units of 1 / (min squared distance) so the
    // cone rows are O(P_max).
    double scale = std::numeric_limits<double>::infinity();
    for (int l = 0; l < M; ++l)
        for (int q = 0; q < s.num_sensing(); ++q)
            scale = std::min(scale, sensing_distance2(s, l, q));

    conic::Problem p;
    std::vector<conic::HermitianBlock> blocks;
    for (int l = 0; l < M; ++l)
        blocks.push_back(p.add_hermitian_psd("X" + std::to_string(l), na));
    const conic::FreeBlock floor = p.add_free("s", 1);
    p.set_objective(conic::Sense::Maximize, floor[0]);
    for (int l = 0; l < M; ++l)
        p.add_nonneg(conic::LinExpr(1.0) - (1.0 / s.p_max) * blocks[l].trace());
    for (int q = 0; q < s.num_sensing(); ++q)
    {
        conic::LinExpr row = -1.0 * floor[0];
        for (int l = 0; l < M; ++l)
        {
            const CVector a = sensing_steering(s, l, q);
            row += (scale / sensing_distance2(s, l, q)) * blocks[l].trace_product(a * a.adjoint());
        }
        p.add_nonneg(row.compressed());
    }

    const conic::Solution sol = conic::solve(p, settings);
    out.status = sol.status;
    if (!sol.ok())
        return out;
    for (int l = 0; l < M; ++l)
    {
        CMatrix x = blocks[l].value(sol.x);
        x = 0.5 * (x + x.adjoint()).eval();
        const double trace = x.trace().real();
        if (trace > s.p_max)
            x *= s.p_max / trace;
        out.covariances[l] = x;
    }
    // Report the floor the returned covariances actually attain.
    double attained = std::numeric_limits<double>::infinity();
    for (int q = 0; q < s.num_sensing(); ++q)
    {
        double zeta = 0.0;
        for (int l = 0; l < M; ++l)
            zeta += quad_form(out.covariances[l], sensing_steering(s, l, q)) / sensing_distance2(s, l, q);
        attained = std::min(attained, zeta);
    }
    out.floor = std::max(0.0, attained);
    return out;
}

double isotropic_illumination_limit(const Scenario& s)
{
    double limit = std::numeric_limits<double>::infinity();
    for (int q = 0; q < s.num_sensing(); ++q)
    {
        double zeta = 0.0;
        for (int l = 0; l < s.num_gbs(); ++l)
            zeta += s.p_max / sensing_distance2(s, l, q);
        limit = std::min(limit, zeta);
    }
    return limit;
}

const char* to_string(Method method)
{
    switch (method)
    {
    case Method::Proposed:
        return "proposed";
    case Method::StraightFlight:
        return "straight";
    case Method::Isotropic:
        return "isotropic";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& name)
{
    for (Method m : {Method::Proposed, Method::StraightFlight, Method::Isotropic})
        if (name == to_string(m))
            return m;
    return std::nullopt;
}

const char* to_string(Stage stage)
{
    switch (stage)
    {
    case Stage::Initial:
        return "initial";
    case Stage::Association:
        return "association";
    case Stage::Beamforming:
        return "beamforming";
    case Stage::Trajectory:
        return "trajectory";
    }
    return "?";
}

const char* to_string(RunStatus status)
{
    switch (status)
    {
    case RunStatus::Solved:
        return "solved";
    case RunStatus::Infeasible:
        return "infeasible";
    case RunStatus::NumericalFailure:
        return "numerical-failure";
    }
    return "?";
}

std::vector<double> AoTrace::objectives() const
{
    std::vector<double> out;
    out.reserve(stages.size());
    for (const auto& r : stages)
        out.push_back(r.objective);
    return out;
}

SolveResult solve(const Scenario& scenario, const SolveOptions& options, const Design* initial)
{
    validate(scenario);
    const IlluminationFloor floor = pipeline_of(options.method).covariance == CovarianceClass::Full
                                        ? max_min_illumination(scenario, options.beamforming.sdr.solver)
                                        : IlluminationFloor{};
    return solve_with_floor(scenario, options, initial, floor);
}

SolveResult baseline_straight_flight(const Scenario& scenario, SolveOptions options, const Design* initial)
{
    options.method = Method::StraightFlight;
    return solve(scenario, options, initial);
}

SolveResult baseline_isotropic(const Scenario& scenario, SolveOptions options, const Design* initial)
{
    options.method = Method::Isotropic;
    return solve(scenario, options, initial);
}

SweepResult gamma_sweep(const Scenario& scenario, std::vector<double> gammas_dbw,
                        const std::vector<Method>& methods, const SolveOptions& options)
{
    validate(scenario);
    std::sort(gammas_dbw.begin(), gammas_dbw.end(), std::greater<>());
    gammas_dbw.erase(std::unique(gammas_dbw.begin(), gammas_dbw.end()), gammas_dbw.end());

    const IlluminationFloor floor = max_min_illumination(scenario, options.beamforming.sdr.solver);
    const bool wants_proposed = std::find(methods.begin(), methods.end(), Method::Proposed) != methods.end();
    const bool wants_straight =
        std::find(methods.begin(), methods.end(), Method::StraightFlight) != methods.end();

    std::map<Method, Design> warm;
    SweepResult out;
    for (double gamma_dbw : gammas_dbw)
    {
        const Scenario s = scenario.with_gamma(dbw_to_watts(gamma_dbw));
        std::map<Method, SolveResult> here;
        // Every candidate start is solved; the best solved run is kept. The
        // warm start keeps each curve non-increasing in the threshold.
        auto run = [&](Method m, const std::vector<const Design*>& seeds) {
            SolveOptions o = options;
            o.method = m;
            o.straight_stage = false;
            std::optional<SolveResult> best;
            for (const Design* seed : seeds)
            {
                SolveResult r = solve_with_floor(s, o, seed, floor);
                const bool better = r.status == RunStatus::Solved &&
                                    (!best || best->status != RunStatus::Solved || r.objective > best->objective);
                if (!best || better)
                    best = std::move(r);
            }
            if (best->status == RunStatus::Solved)
                warm[m] = best->design;
            here[m] = std::move(*best);
        };
        auto seeds_of = [&](Method m) {
            std::vector<const Design*> seeds{nullptr};
            if (const auto it = warm.find(m); it != warm.end())
                seeds.push_back(&it->second);
            return seeds;
        };

        if (wants_straight || wants_proposed)
            run(Method::StraightFlight, seeds_of(Method::StraightFlight));
        if (std::find(methods.begin(), methods.end(), Method::Isotropic) != methods.end())
            run(Method::Isotropic, seeds_of(Method::Isotropic));
        if (wants_proposed)
        {
            std::vector<const Design*> seeds;
            if (const auto it = warm.find(Method::Proposed); it != warm.end())
                seeds.push_back(&it->second);
            if (here[Method::StraightFlight].status == RunStatus::Solved)
                seeds.push_back(&here[Method::StraightFlight].design);
            if (seeds.empty())
                seeds.push_back(nullptr);
            run(Method::Proposed, seeds);
        }

        for (Method m : methods)
        {
            const SolveResult& r = here[m];
            SweepPoint point;
            point.gamma_dbw = gamma_dbw;
            point.method = m;
            point.status = r.status;
            point.feasible = r.status == RunStatus::Solved;
            point.average_sum_rate = point.feasible ? r.average_sum_rate() : 0.0;
            point.message = r.message;
            out.points.push_back(point);
        }
    }

    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const SweepPoint& a, const SweepPoint& b) { return a.gamma_dbw < b.gamma_dbw; });
    return out;
}

} // namespace netisac
