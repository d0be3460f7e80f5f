#include "netisac/trajectory.hpp"

#include <cmath>

#include "netisac/conic/problem.hpp"
#include "netisac/model.hpp"

namespace netisac
{

namespace
{

/// Phase increment between adjacent elements, 2 pi (d/lambda) H / D, and D.
struct Geometry
{
    double phase_step;
    double dist;
};

Geometry geometry(const Vec2& q, const Scenario& s, int m, int k)
{
    const double h = s.uav_altitudes[k];
    const double dist = std::sqrt((q - s.gbs_positions[m]).squaredNorm() + h * h);
    return {2.0 * kPi * s.antenna_spacing_over_wavelength * h / dist, dist};
}

} // namespace

double eta_mu(const CMatrix& x, const Vec2& q, const Scenario& s, int m, int k)
{
    const Geometry g = geometry(q, s, m, k);
    double value = 0.0;
    const int na = static_cast<int>(x.rows());
    for (int r = 0; r < na; ++r)
        value += x(r, r).real();
    for (int p = 0; p < na; ++p)
        for (int c = p + 1; c < na; ++c)
            value += 2.0 * std::abs(x(p, c)) * std::cos(std::arg(x(p, c)) + g.phase_step * (c - p));
    return value;
}

double eta_mu_slope(const CMatrix& x, const Vec2& q, const Scenario& s, int m, int k)
{
    const Geometry g = geometry(q, s, m, k);
    const double h = s.uav_altitudes[k];
    const double scale = 4.0 * kPi * s.antenna_spacing_over_wavelength * h / (g.dist * g.dist * g.dist);
    double slope = 0.0;
    const int na = static_cast<int>(x.rows());
    for (int p = 0; p < na; ++p)
        for (int c = p + 1; c < na; ++c)
            slope += scale * (c - p) * std::abs(x(p, c)) *
                     std::sin(std::arg(x(p, c)) + g.phase_step * (c - p));
    return slope;
}

TrajectoryTaylor taylor_coefficients(const Design& d, const Scenario& s, int m, int k, int n)
{
    const Vec2& q = d.q(k, n);
    const Vec2 offset = q - s.gbs_positions[m];
    const double h = s.uav_altitudes[k];
    const double noise_ratio = s.noise_power / s.kappa;

    double all = 0.0;
    double all_slope = 0.0;
    double own = 0.0;
    double own_slope = 0.0;
    for (int l = 0; l < d.num_gbs(); ++l)
    {
        for (int i = 0; i < d.num_uavs(); ++i)
        {
            const CMatrix& w = d.w(l, i, n);
            const double e = eta_mu(w, q, s, m, k);
            const double v = eta_mu_slope(w, q, s, m, k);
            all += e;
            all_slope += v;
            if (l == m && i == k)
            {
                own = e;
                own_slope = v;
            }
        }
        all += eta_mu(d.r(l, n), q, s, m, k);
        all_slope += eta_mu_slope(d.r(l, n), q, s, m, k);
    }

    TrajectoryTaylor t;
    const double noise_term = noise_ratio * (offset.squaredNorm() + h * h);
    t.total = all + noise_term;
    t.interference = all - own + noise_term;
    t.total_slope = all_slope + 2.0 * noise_ratio;
    t.interference_slope = all_slope - own_slope + 2.0 * noise_ratio;
    t.intercept = std::log2(t.total) - std::log2(t.interference);
    t.gradient = kLog2E * (t.total_slope / t.total - t.interference_slope / t.interference) * offset;
    return t;
}

CollisionCut linearize_collision(const Vec2& q_k, const Vec2& q_i, double h_k, double h_i, double d_min)
{
    const Vec2 diff = q_k - q_i;
    const double dh = h_k - h_i;
    CollisionCut cut;
    cut.coeff = 2.0 * diff;
    cut.rhs = d_min * d_min - dh * dh + diff.squaredNorm();
    cut.satisfiable = diff.squaredNorm() > 0.0 || cut.rhs <= 0.0;
    return cut;
}

TrajectorySubproblemResult solve_trajectory_subproblem(const Scenario& s, const Design& d,
                                                       const std::vector<TrajectoryTaylor>& taylor,
                                                       double radius, const conic::SolverSettings& settings)
{
    using conic::LinExpr;
    const int K = s.num_uavs();
    const int N = s.num_slots;
    TrajectorySubproblemResult out;

    double constant = 0.0;
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < K; ++k)
            constant += taylor[n * K + k].intercept;

    const int interior = std::max(0, N - 2);
    if (interior == 0)
    {
        out.status = conic::Status::Optimal;
        out.positions.resize(static_cast<size_t>(K) * N);
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
                out.positions[k * N + n] = d.q(k, n);
        out.model_objective = constant;
        return out;
    }

    conic::Problem p;
    const auto vars = p.add_free("q", 2 * K * interior);
    auto coord = [&](int k, int n, int axis) -> LinExpr {
        if (n == 0)
            return LinExpr(s.uav_initial[k][axis]);
        if (n == N - 1)
            return LinExpr(s.uav_final[k][axis]);
        return vars[2 * (k * interior + n - 1) + axis];
    };

    LinExpr objective;
    for (int k = 0; k < K; ++k)
        for (int n = 1; n < N - 1; ++n)
        {
            const Vec2& grad = taylor[n * K + k].gradient;
            objective += grad.x() * coord(k, n, 0) + grad.y() * coord(k, n, 1);
        }
    p.set_objective(conic::Sense::Maximize, objective);

    const double step = s.max_step();
    for (int k = 0; k < K; ++k)
    {
        for (int n = 0; n + 1 < N; ++n)
            p.add_soc(LinExpr(step), {coord(k, n + 1, 0) - coord(k, n, 0), coord(k, n + 1, 1) - coord(k, n, 1)});
        for (int n = 1; n < N - 1; ++n)
            p.add_soc(LinExpr(radius), {coord(k, n, 0) - LinExpr(d.q(k, n).x()), coord(k, n, 1) - LinExpr(d.q(k, n).y())});
    }

    for (int n = 1; n < N - 1; ++n)
        for (int k = 0; k < K; ++k)
            for (int i = k + 1; i < K; ++i)
            {
                CollisionCut cut = linearize_collision(d.q(k, n), d.q(i, n), s.uav_altitudes[k],
                                                       s.uav_altitudes[i], s.d_min);
                if (!cut.satisfiable)
                {
                    // Re-seed the pair from the straight-line waypoints.
                    const double frac = static_cast<double>(n) / (N - 1);
                    const Vec2 a = (1.0 - frac) * s.uav_initial[k] + frac * s.uav_final[k];
                    const Vec2 b = (1.0 - frac) * s.uav_initial[i] + frac * s.uav_final[i];
                    cut = linearize_collision(a, b, s.uav_altitudes[k], s.uav_altitudes[i], s.d_min);
                    if (!cut.satisfiable)
                    {
                        out.status = conic::Status::Infeasible;
                        return out;
                    }
                }
                LinExpr e = cut.coeff.x() * (coord(k, n, 0) - coord(i, n, 0)) +
                            cut.coeff.y() * (coord(k, n, 1) - coord(i, n, 1));
                e -= LinExpr(cut.rhs);
                p.add_nonneg(e.compressed());
            }

    const conic::Solution sol = conic::solve(p, settings);
    out.status = sol.status;
    if (!sol.ok())
        return out;

    out.positions.resize(static_cast<size_t>(K) * N);
    out.model_objective = constant;
    for (int k = 0; k < K; ++k)
        for (int n = 0; n < N; ++n)
        {
            const Vec2 q(coord(k, n, 0).eval(sol.x), coord(k, n, 1).eval(sol.x));
            out.positions[k * N + n] = q;
            out.model_objective += taylor[n * K + k].gradient.dot(q - d.q(k, n));
        }
    return out;
}

TrajectoryResult optimize_trajectory(Design& design, const Scenario& s, const TrajectoryOptions& options)
{
    const int K = s.num_uavs();
    const int N = s.num_slots;
    TrajectoryResult out;
    double radius = options.initial_radius > 0.0 ? options.initial_radius : s.max_step();
    double current = total_rate(design, s);
    out.objective_trace.push_back(current);

    std::vector<TrajectoryTaylor> taylor(static_cast<size_t>(N) * K);
    bool stale = true;
    while (out.iterations < options.max_iterations && radius >= options.min_radius)
    {
        if (stale)
        {
            for_each_index(options.exec, N * K, [&](int idx) {
                const int k = idx % K;
                const int n = idx / K;
                taylor[idx] = taylor_coefficients(design, s, design.serving(k, n), k, n);
            });
            stale = false;
        }
        ++out.iterations;
        out.radius_trace.push_back(radius);
        const TrajectorySubproblemResult sub = solve_trajectory_subproblem(s, design, taylor, radius, options.solver);
        if (sub.status != conic::Status::Optimal)
        {
            radius *= 0.5;
            continue;
        }
        Design candidate = design;
        for (int k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
                candidate.q(k, n) = sub.positions[k * N + n];
        const double value = total_rate(candidate, s);
        if (value >= current + options.min_gain)
        {
            design = std::move(candidate);
            current = value;
            out.objective_trace.push_back(current);
            ++out.accepted_steps;
            stale = true;
        }
        else
        {
            radius *= 0.5;
        }
    }
    out.final_radius = radius;
    return out;
}

} // namespace netisac
