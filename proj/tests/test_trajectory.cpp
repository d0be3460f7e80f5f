#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "netisac/model.hpp"
#include "netisac/trajectory.hpp"

using namespace netisac;
using fixtures::random_design;
using fixtures::random_psd;

namespace
{

double rate_at(Design d, const Scenario& s, int m, int k, int n, const Vec2& q)
{
    d.q(k, n) = q;
    return rate(d, s, m, k, n);
}

/// Highest separation-safe objective on a zoomed 4-D grid; returns -inf when
/// nothing on the grid is feasible.
double grid_oracle_two_waypoints(const Scenario& s, const Vec2& g1, const Vec2& g2, const Vec2& c1,
                                 const Vec2& c2, double radius)
{
    const Vec2 start = s.uav_initial[0];
    const Vec2 end = s.uav_final[0];
    const double step = s.max_step();
    double best = -std::numeric_limits<double>::infinity();
    Vec2 lo1 = c1.array() - radius, hi1 = c1.array() + radius;
    Vec2 lo2 = c2.array() - radius, hi2 = c2.array() + radius;
    const int steps = 24;
    for (int zoom = 0; zoom < 7; ++zoom)
    {
        Vec2 b1 = c1, b2 = c2;
        for (int a = 0; a <= steps; ++a)
            for (int b = 0; b <= steps; ++b)
            {
                const Vec2 q1(lo1.x() + (hi1.x() - lo1.x()) * a / steps, lo1.y() + (hi1.y() - lo1.y()) * b / steps);
                if ((q1 - c1).norm() > radius || (q1 - start).norm() > step)
                    continue;
                for (int c = 0; c <= steps; ++c)
                    for (int e = 0; e <= steps; ++e)
                    {
                        const Vec2 q2(lo2.x() + (hi2.x() - lo2.x()) * c / steps,
                                      lo2.y() + (hi2.y() - lo2.y()) * e / steps);
                        if ((q2 - c2).norm() > radius || (q2 - q1).norm() > step || (end - q2).norm() > step)
                            continue;
                        const double v = g1.dot(q1) + g2.dot(q2);
                        if (v > best)
                        {
                            best = v;
                            b1 = q1;
                            b2 = q2;
                        }
                    }
            }
        const Vec2 w1 = (hi1 - lo1) / 6.0, w2 = (hi2 - lo2) / 6.0;
        lo1 = b1 - w1;
        hi1 = b1 + w1;
        lo2 = b2 - w2;
        hi2 = b2 + w2;
    }
    return best;
}

} // namespace

TEST_CASE("cosine series of the received power matches the steering quadratic form")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial)
    {
        const int na = 1 + trial % 6;
        Scenario s = fixtures::random_scenario(rng, 2, 2, na, 3, 1);
        s.antenna_spacing_over_wavelength = 0.25 + 0.05 * (trial % 7);
        const CMatrix x = random_psd(rng, na, 1 + trial % na, 2.0);
        const Vec2 q = fixtures::uniform_point(rng, -50.0, 250.0);
        const int m = trial % 2, k = (trial / 2) % 2;
        const CVector a = steering_vector(cos_aod(q, s.gbs_positions[m], s.uav_altitudes[k]), na,
                                          s.antenna_spacing_over_wavelength);
        const double expected = quad_form(x, a);
        CHECK(eta_mu(x, q, s, m, k) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("slope of the cosine series matches a central difference")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 40; ++trial)
    {
        const int na = 2 + trial % 5;
        const Scenario s = fixtures::random_scenario(rng, 1, 1, na, 3, 1);
        const CMatrix x = random_psd(rng, na, 1, 3.0);
        const Vec2 q = fixtures::uniform_point(rng, -100.0, 300.0);
        const Vec2 offset = q - s.gbs_positions[0];
        const double nu = eta_mu_slope(x, q, s, 0, 0);
        const double h = 1e-3;
        for (int axis = 0; axis < 2; ++axis)
        {
            Vec2 e = Vec2::Zero();
            e[axis] = h;
            const double fd = (eta_mu(x, q + e, s, 0, 0) - eta_mu(x, q - e, s, 0, 0)) / (2 * h);
            CHECK(std::abs(nu * offset[axis] - fd) <= 1e-4 * std::abs(fd) + 1e-6);
        }
    }
}

TEST_CASE("first-order rate model is exact at the expansion point and matches its gradient")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial)
    {
        const Scenario s = fixtures::random_scenario(rng, 2, 2, 2 + trial % 3, 4, 2);
        const Design d = random_design(rng, s);
        const int k = trial % 2, n = 1 + trial % 2;
        const int m = d.serving(k, n);
        const TrajectoryTaylor t = taylor_coefficients(d, s, m, k, n);
        CHECK(t.intercept == doctest::Approx(rate(d, s, m, k, n)).epsilon(1e-9));

        const double h = 1e-3;
        for (int axis = 0; axis < 2; ++axis)
        {
            Vec2 e = Vec2::Zero();
            e[axis] = h;
            const double fd = (rate_at(d, s, m, k, n, d.q(k, n) + e) - rate_at(d, s, m, k, n, d.q(k, n) - e)) / (2 * h);
            CHECK(std::abs(t.gradient[axis] - fd) <= 1e-4 * std::abs(fd) + 1e-6);
        }
    }
}

TEST_CASE("gradient vanishes directly above the serving GBS")
{
    std::mt19937_64 rng(14);
    Scenario s = fixtures::single_link(4, Vec2(0.0, 0.0));
    Design d = Design::straight_flight(s);
    d.w(0, 0, 0) = random_psd(rng, 4, 1, 1.0);
    d.r(0, 0) = random_psd(rng, 4, 2, 1.0);
    const TrajectoryTaylor t = taylor_coefficients(d, s, 0, 0, 0);
    CHECK(std::isfinite(t.intercept));
    CHECK(t.gradient.norm() == 0.0);
    CHECK(t.intercept == doctest::Approx(rate(d, s, 0, 0, 0)).epsilon(1e-12));
}

TEST_CASE("linearized separation is an inner approximation tight at the expansion point")
{
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-60.0, 60.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const Vec2 a(u(rng), u(rng)), b(u(rng), u(rng));
        const double ha = 60.0 + trial % 5, hb = 70.0;
        const double dmin = 25.0;
        const CollisionCut cut = linearize_collision(a, b, ha, hb, dmin);
        REQUIRE(cut.satisfiable);
        const double at_expansion = cut.coeff.dot(a - b) - cut.rhs;
        const double exact = (a - b).squaredNorm() + (ha - hb) * (ha - hb) - dmin * dmin;
        CHECK(at_expansion == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
        for (int sample = 0; sample < 20; ++sample)
        {
            const Vec2 qa(u(rng), u(rng)), qb(u(rng), u(rng));
            if (cut.holds(qa, qb))
                CHECK((qa - qb).squaredNorm() + (ha - hb) * (ha - hb) >= dmin * dmin - 1e-9);
        }
    }
    const CollisionCut stacked = linearize_collision(Vec2(1, 1), Vec2(1, 1), 50.0, 60.0, 20.0);
    CHECK_FALSE(stacked.satisfiable);
    const CollisionCut separated = linearize_collision(Vec2(1, 1), Vec2(1, 1), 50.0, 80.0, 20.0);
    CHECK(separated.satisfiable);
}

TEST_CASE("a single interior waypoint moves a full radius along the gradient")
{
    Scenario s = fixtures::single_link(2, Vec2(0.0, 0.0), 3);
    s.uav_initial = {Vec2(0.0, 0.0)};
    s.uav_final = {Vec2(20.0, 0.0)};
    s.v_max = 100.0;
    Design d = Design::straight_flight(s);
    std::vector<TrajectoryTaylor> taylor(3);
    taylor[1].gradient = Vec2(0.3, -0.4);
    const double radius = 2.5;
    const TrajectorySubproblemResult sub = solve_trajectory_subproblem(s, d, taylor, radius);
    REQUIRE(sub.status == conic::Status::Optimal);
    const Vec2 expected = d.q(0, 1) + radius * taylor[1].gradient.normalized();
    CHECK((sub.positions[1] - expected).norm() < 1e-5);
    CHECK(sub.positions[0] == s.uav_initial[0]);
    CHECK(sub.positions[2] == s.uav_final[0]);
    CHECK(sub.model_objective == doctest::Approx(radius * 0.5).epsilon(1e-6));
}

TEST_CASE("two-waypoint subproblem agrees with a grid oracle")
{
    std::mt19937_64 rng(16);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 4; ++trial)
    {
        Scenario s = fixtures::single_link(2, Vec2(0.0, 0.0), 4);
        s.uav_initial = {Vec2(0.0, 0.0)};
        s.uav_final = {Vec2(24.0, 6.0)};
        s.v_max = 10.0;
        Design d = Design::straight_flight(s);
        std::vector<TrajectoryTaylor> taylor(4);
        taylor[1].gradient = Vec2(g(rng), g(rng));
        taylor[2].gradient = Vec2(g(rng), g(rng));
        const double radius = 4.0;
        const TrajectorySubproblemResult sub = solve_trajectory_subproblem(s, d, taylor, radius);
        REQUIRE(sub.status == conic::Status::Optimal);
        const double solver_value = taylor[1].gradient.dot(sub.positions[1]) + taylor[2].gradient.dot(sub.positions[2]);
        const double oracle = grid_oracle_two_waypoints(s, taylor[1].gradient, taylor[2].gradient, d.q(0, 1),
                                                        d.q(0, 2), radius);
        const double scale = taylor[1].gradient.norm() + taylor[2].gradient.norm();
        CHECK(solver_value >= oracle - 1e-6 * scale);
        CHECK(solver_value <= oracle + 1e-2 * scale);
        for (int n = 0; n + 1 < 4; ++n)
            CHECK((sub.positions[n + 1] - sub.positions[n]).norm() <= s.max_step() * (1 + 1e-9));
    }
}

TEST_CASE("trajectory SCA is monotone, keeps constraints and is schedule independent")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3; ++trial)
    {
        const Scenario s = fixtures::random_scenario(rng, 2, 2, 3, 6, 2);
        const Design start = random_design(rng, s);
        REQUIRE(check_constraints(start, s).find(ConstraintFamily::Collision) == std::nullopt);

        Design serial = start;
        TrajectoryOptions options;
        options.max_iterations = 15;
        options.exec = Exec::Serial;
        const TrajectoryResult a = optimize_trajectory(serial, s, options);
        Design parallel = start;
        options.exec = Exec::Parallel;
        const TrajectoryResult b = optimize_trajectory(parallel, s, options);

        REQUIRE(a.objective_trace.size() >= 1);
        for (size_t i = 1; i < a.objective_trace.size(); ++i)
            CHECK(a.objective_trace[i] >= a.objective_trace[i - 1]);
        CHECK(a.objective_trace.back() == doctest::Approx(total_rate(serial, s)).epsilon(1e-12));
        CHECK(a.accepted_steps >= 1);
        CHECK(a.objective_trace == b.objective_trace);

        const ViolationReport report = check_constraints(serial, s);
        CHECK_MESSAGE(report.find(ConstraintFamily::Speed) == std::nullopt, report.summary());
        CHECK_MESSAGE(report.find(ConstraintFamily::Collision) == std::nullopt, report.summary());
        CHECK_MESSAGE(report.find(ConstraintFamily::Endpoint) == std::nullopt, report.summary());
    }
}
