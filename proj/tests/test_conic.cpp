#include "doctest.h"

#include <cmath>
#include <sstream>

#include "netisac/conic/embedding.hpp"
#include "netisac/conic/problem.hpp"
#include "netisac/conic/solver.hpp"

using namespace netisac;
using namespace netisac::conic;

namespace
{

// Water-filling by bisection on the water level: maximize sum log2(1 + g_i p_i)
// subject to sum p_i = budget, p >= 0.
double water_filling(const std::vector<double>& gains, double budget)
{
    double lo = 0.0, hi = budget + 1.0 / *std::min_element(gains.begin(), gains.end());
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        double used = 0.0;
        for (double g : gains)
            used += std::max(0.0, mid - 1.0 / g);
        (used > budget ? hi : lo) = mid;
    }
    double value = 0.0;
    for (double g : gains)
        value += std::log2(1.0 + g * std::max(0.0, lo - 1.0 / g));
    return value;
}

} // namespace

TEST_CASE("symmetric SDP picks the dominant eigenvector")
{
    Problem p;
    const auto x = p.add_symmetric_psd("X", 2);
    p.set_objective(Sense::Maximize, x.entry(0, 0) + 2.0 * x.entry(1, 1));
    p.add_equality(x.entry(0, 0) + x.entry(1, 1) - LinExpr(1.0));
    const Solution s = solve(p);
    REQUIRE(s.ok());
    CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(x.value(s.x)(1, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hermitian SDP reaches the largest eigenvalue")
{
    CMatrix a(2, 2);
    a << 1.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 1.0;
    Problem p;
    const auto x = p.add_hermitian_psd("X", 2);
    p.set_objective(Sense::Maximize, x.trace_product(a));
    p.add_equality(x.trace() - LinExpr(1.0));
    const Solution s = solve(p);
    REQUIRE(s.ok());
    CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-7));
    const CMatrix xv = x.value(s.x);
    CHECK((xv * a).trace().real() == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("second-order cone norm minimization")
{
    Problem p;
    const auto v = p.add_free("v", 3);
    p.set_objective(Sense::Minimize, v[0]);
    p.add_soc(v[0], {v[1], v[2]});
    p.add_equality(v[1] - LinExpr(3.0));
    p.add_equality(v[2] - LinExpr(4.0));
    const Solution s = solve(p);
    REQUIRE(s.ok());
    CHECK(s.objective == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("log hypograph through the exponential cone")
{
    for (double u : {std::exp(1.0), 1.0, std::exp(3.0)})
    {
        Problem p;
        const auto v = p.add_free("v", 2);
        p.set_objective(Sense::Maximize, v[0]);
        p.add_log_hypograph(v[0], v[1]);
        p.add_equality(v[1] - LinExpr(u));
        const Solution s = solve(p);
        REQUIRE(s.ok());
        CHECK(s.objective == doctest::Approx(std::log(u)).epsilon(1e-7));
    }
}

TEST_CASE("water-filling matches the bisection oracle")
{
    const std::vector<double> gains{4.0, 1.0, 0.25, 2.5};
    const double budget = 2.0;
    Problem p;
    const auto pw = p.add_free("p", 4);
    const auto t = p.add_free("t", 4);
    LinExpr total, obj;
    for (int i = 0; i < 4; ++i)
    {
        p.add_nonneg(pw[i]);
        p.add_log_hypograph(t[i], LinExpr(1.0) + gains[i] * pw[i]);
        total += pw[i];
        obj += kLog2E * t[i];
    }
    p.add_equality(total - LinExpr(budget));
    p.set_objective(Sense::Maximize, obj);
    const Solution s = solve(p);
    REQUIRE(s.ok());
    CHECK(s.objective == doctest::Approx(water_filling(gains, budget)).epsilon(1e-7));
}

TEST_CASE("infeasible and unbounded problems are classified")
{
    SUBCASE("disjoint half-lines")
    {
        Problem p;
        const auto v = p.add_free("v", 1);
        p.set_objective(Sense::Minimize, v[0]);
        p.add_nonneg(v[0] - LinExpr(1.0));
        p.add_nonneg(LinExpr(0.0) - v[0]);
        CHECK(solve(p).status == Status::Infeasible);
    }
    SUBCASE("trace budget below a forced diagonal")
    {
        Problem p;
        const auto x = p.add_hermitian_psd("X", 2);
        p.set_objective(Sense::Maximize, x.trace());
        p.add_nonneg(LinExpr(1.0) - x.trace());
        p.add_nonneg(x.re(0, 0) - LinExpr(2.0));
        CHECK(solve(p).status == Status::Infeasible);
    }
    SUBCASE("ray")
    {
        Problem p;
        const auto v = p.add_free("v", 1);
        p.set_objective(Sense::Maximize, v[0]);
        p.add_nonneg(v[0]);
        CHECK(solve(p).status == Status::Unbounded);
    }
    SUBCASE("inconsistent equalities")
    {
        Problem p;
        const auto v = p.add_free("v", 1);
        p.set_objective(Sense::Minimize, v[0]);
        p.add_equality(v[0] - LinExpr(1.0));
        p.add_equality(v[0] - LinExpr(2.0));
        CHECK(solve(p).status == Status::Infeasible);
    }
}

TEST_CASE("embedding preserves quadratic forms")
{
    CMatrix x(2, 2);
    x << 2.0, Complex(0.5, -0.3), Complex(0.5, 0.3), 1.0;
    CVector v(2);
    v << Complex(0.7, 0.1), Complex(-0.2, 0.9);
    const Eigen::MatrixXd xe = embed_hermitian(x);
    const double exact = (v.adjoint() * x * v)(0, 0).real();

    const Eigen::VectorXd vr = stack_real(v);
    CHECK(vr.dot(xe * vr) == doctest::Approx(exact).epsilon(1e-14));

    // Two-column stacking counts the form twice.
    CVector jv = Complex(0.0, 1.0) * v;
    Eigen::MatrixXd two(4, 2);
    two.col(0) = vr;
    two.col(1) = stack_real(jv);
    CHECK((two.transpose() * xe * two).trace() / 2.0 == doctest::Approx(exact).epsilon(1e-14));

    CHECK((extract_hermitian(xe) - x).norm() == 0.0);
    CMatrix bad = x;
    bad(0, 1) += 1.0;
    CHECK_THROWS_AS(embed_hermitian(bad), InvalidArgument);
}

TEST_CASE("CBF export lists every cone section")
{
    Problem p;
    const auto x = p.add_hermitian_psd("X", 2);
    const auto v = p.add_free("v", 2);
    p.set_objective(Sense::Maximize, v[0]);
    p.add_equality(x.trace() - LinExpr(1.0));
    p.add_nonneg(v[1]);
    p.add_soc(v[1], {x.re(0, 1)});
    p.add_log_hypograph(v[0], LinExpr(1.0) + x.re(0, 0));
    std::ostringstream os;
    p.write_cbf(os);
    const std::string cbf = os.str();
    for (const char* key : {"VER\n3", "OBJSENSE\nMAX", "CON\n", "L= 1", "L+ 1", "Q 2", "EXP 3", "PSDCON\n1\n4", "HCOORD", "OBJACOORD"})
        CHECK_MESSAGE(cbf.find(key) != std::string::npos, key);
}
