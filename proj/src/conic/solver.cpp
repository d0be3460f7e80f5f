#include "netisac/conic/solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

namespace netisac::conic
{

const char* to_string(Status status)
{
    switch (status)
    {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

namespace
{

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Squared Newton decrement below which a point counts as centered when
/// round-off prevents further progress.
constexpr double kLooseCentering = 1e-3;

/// Newton steps allowed without halving the decrement before centering is
/// declared stalled.
constexpr int kStallSteps = 15;

struct Row
{
    std::vector<int> idx;
    std::vector<double> val;
    double c = 0.0;

    double eval(const VectorXd& x) const
    {
        double v = c;
        for (size_t i = 0; i < idx.size(); ++i)
            v += val[i] * x[idx[i]];
        return v;
    }
};

Row make_row(const LinExpr& e, int extra = -1, double extra_coeff = 0.0)
{
    Row r;
    r.c = e.constant;
    for (const auto& [i, v] : e.terms)
    {
        r.idx.push_back(i);
        r.val.push_back(v);
    }
    if (extra >= 0 && extra_coeff != 0.0)
    {
        r.idx.push_back(extra);
        r.val.push_back(extra_coeff);
    }
    return r;
}

struct Lmi
{
    int dim = 0;
    MatrixXd f0;
    std::vector<int> vars;
    std::vector<MatrixXd> coeffs;

    MatrixXd eval(const VectorXd& x) const
    {
        MatrixXd s = f0;
        for (size_t j = 0; j < vars.size(); ++j)
            s.noalias() += x[vars[j]] * coeffs[j];
        return s;
    }
};

Lmi make_lmi(const LmiCone& cone, int extra)
{
    Lmi out;
    out.dim = cone.dim;
    out.f0 = MatrixXd::Zero(cone.dim, cone.dim);
    std::vector<int> slot_of;
    auto coeff_for = [&](int var) -> MatrixXd& {
        if (var >= static_cast<int>(slot_of.size()))
            slot_of.resize(var + 1, -1);
        if (slot_of[var] < 0)
        {
            slot_of[var] = static_cast<int>(out.vars.size());
            out.vars.push_back(var);
            out.coeffs.push_back(MatrixXd::Zero(cone.dim, cone.dim));
        }
        return out.coeffs[slot_of[var]];
    };
    for (int i = 0; i < cone.dim; ++i)
    {
        for (int j = 0; j <= i; ++j)
        {
            const LinExpr& e = cone.at(i, j);
            out.f0(i, j) = out.f0(j, i) = e.constant;
            for (const auto& [var, v] : e.terms)
            {
                MatrixXd& f = coeff_for(var);
                f(i, j) += v;
                if (i != j)
                    f(j, i) += v;
            }
        }
    }
    if (extra >= 0)
        coeff_for(extra) += MatrixXd::Identity(cone.dim, cone.dim);
    return out;
}

/// Barrier-ready form of a problem. With `phase1`, an extra last variable s
/// relaxes every cone and the objective becomes "minimize s".
struct Compiled
{
    int n = 0;
    VectorXd c;
    MatrixXd a_eq;
    VectorXd b_eq;
    std::vector<Row> lin;
    std::vector<std::vector<Row>> soc;
    std::vector<std::array<Row, 3>> exp;
    std::vector<Lmi> lmi;
    double nu = 0.0;
    int num_cones = 0;
};

Compiled compile(const Problem& p, bool phase1, double ball_radius)
{
    Compiled out;
    const int n0 = p.num_variables();
    const int s = phase1 ? n0 : -1;
    out.n = phase1 ? n0 + 1 : n0;

    out.c = VectorXd::Zero(out.n);
    if (phase1)
        out.c[s] = 1.0;
    else
    {
        const double sign = p.sense() == Sense::Minimize ? 1.0 : -1.0;
        for (const auto& [i, v] : p.objective().terms)
            out.c[i] += sign * v;
    }

    const int n_eq = static_cast<int>(p.equalities().size());
    out.a_eq = MatrixXd::Zero(n_eq, out.n);
    out.b_eq = VectorXd::Zero(n_eq);
    for (int r = 0; r < n_eq; ++r)
    {
        const LinExpr& e = p.equalities()[r];
        for (const auto& [i, v] : e.terms)
            out.a_eq(r, i) += v;
        out.b_eq[r] = -e.constant;
    }

    for (const auto& e : p.nonnegatives())
    {
        out.lin.push_back(make_row(e, s, 1.0));
        out.nu += 1.0;
    }
    for (const auto& cone : p.second_order())
    {
        std::vector<Row> rows;
        rows.push_back(make_row(cone.t, s, 1.0));
        for (const auto& u : cone.u)
            rows.push_back(make_row(u));
        out.soc.push_back(std::move(rows));
        out.nu += 2.0;
    }
    for (const auto& cone : p.exponential())
    {
        out.exp.push_back({make_row(cone.x, s, -1.0), make_row(cone.y, s, 1.0), make_row(cone.z, s, 1.0)});
        out.nu += 3.0;
    }
    for (const auto& cone : p.lmis())
    {
        out.lmi.push_back(make_lmi(cone, s));
        out.nu += cone.dim;
    }
    out.num_cones = static_cast<int>(out.lin.size() + out.soc.size() + out.exp.size() + out.lmi.size());

    if (phase1)
    {
        // Bounds the phase-I search so that an infeasible problem still has a
        // well-defined analytic center.
        std::vector<Row> ball;
        Row t;
        t.c = ball_radius;
        ball.push_back(t);
        for (int i = 0; i < n0; ++i)
        {
            Row r;
            r.idx.push_back(i);
            r.val.push_back(1.0);
            ball.push_back(r);
        }
        out.soc.push_back(std::move(ball));
        out.nu += 2.0;
    }
    return out;
}

/// Accumulates value, gradient and Hessian of the log barrier. Returns false
/// outside the cone interiors. Gradient/Hessian are skipped when null.
class Barrier
{
public:
    explicit Barrier(const Compiled& p) : p_(p) {}

    bool eval(const VectorXd& x, double& value, VectorXd* grad, MatrixXd* hess) const
    {
        value = 0.0;
        if (grad)
            grad->setZero(p_.n);
        if (hess)
            hess->setZero(p_.n, p_.n);

        for (const Row& r : p_.lin)
        {
            const double s = r.eval(x);
            if (!(s > 0.0))
                return false;
            value -= std::log(s);
            if (grad)
                for (size_t i = 0; i < r.idx.size(); ++i)
                    (*grad)[r.idx[i]] -= r.val[i] / s;
            if (hess)
                outer(*hess, r, r, 1.0 / (s * s));
        }

        for (const auto& rows : p_.soc)
            if (!soc(rows, x, value, grad, hess))
                return false;

        for (const auto& rows : p_.exp)
            if (!exp_cone(rows, x, value, grad, hess))
                return false;

        for (const Lmi& l : p_.lmi)
            if (!lmi(l, x, value, grad, hess))
                return false;

        return std::isfinite(value);
    }

private:
    static void outer(MatrixXd& h, const Row& a, const Row& b, double w)
    {
        for (size_t i = 0; i < a.idx.size(); ++i)
        {
            const double wa = w * a.val[i];
            for (size_t j = 0; j < b.idx.size(); ++j)
                h(a.idx[i], b.idx[j]) += wa * b.val[j];
        }
    }

    bool soc(const std::vector<Row>& rows, const VectorXd& x, double& value, VectorXd* grad,
             MatrixXd* hess) const
    {
        const size_t k = rows.size();
        VectorXd v(k);
        for (size_t r = 0; r < k; ++r)
            v[r] = rows[r].eval(x);
        const double t = v[0];
        const double unorm = v.tail(k - 1).norm();
        if (!(t > unorm))
            return false;
        const double s = (t - unorm) * (t + unorm);
        if (!(s > 0.0))
            return false;
        value -= std::log(s);
        if (!grad && !hess)
            return true;

        VectorXd g(k);
        g[0] = -2.0 * t / s;
        g.tail(k - 1) = 2.0 * v.tail(k - 1) / s;
        if (grad)
            for (size_t r = 0; r < k; ++r)
                for (size_t i = 0; i < rows[r].idx.size(); ++i)
                    (*grad)[rows[r].idx[i]] += g[r] * rows[r].val[i];
        if (hess)
        {
            // H = (2/s) diag(-1, I) + 4 w w^T / s^2 with w = (-t, u)
            VectorXd w = v;
            w[0] = -t;
            for (size_t r = 0; r < k; ++r)
            {
                for (size_t q = 0; q < k; ++q)
                {
                    double h = 4.0 * w[r] * w[q] / (s * s);
                    if (r == q)
                        h += (r == 0 ? -2.0 : 2.0) / s;
                    if (h != 0.0)
                        outer(*hess, rows[r], rows[q], h);
                }
            }
        }
        return true;
    }

    bool exp_cone(const std::array<Row, 3>& rows, const VectorXd& x, double& value, VectorXd* grad,
                  MatrixXd* hess) const
    {
        const double a = rows[0].eval(x);
        const double y = rows[1].eval(x);
        const double z = rows[2].eval(x);
        if (!(y > 0.0) || !(z > 0.0))
            return false;
        const double lzy = std::log(z / y);
        const double psi = y * lzy - a;
        if (!(psi > 0.0))
            return false;
        value -= std::log(psi) + std::log(y) + std::log(z);
        if (!grad && !hess)
            return true;

        const Eigen::Vector3d dpsi(-1.0, lzy - 1.0, y / z);
        Eigen::Matrix3d d2psi = Eigen::Matrix3d::Zero();
        d2psi(1, 1) = -1.0 / y;
        d2psi(1, 2) = d2psi(2, 1) = 1.0 / z;
        d2psi(2, 2) = -y / (z * z);

        Eigen::Vector3d g = -dpsi / psi;
        g[1] -= 1.0 / y;
        g[2] -= 1.0 / z;
        Eigen::Matrix3d h = -d2psi / psi + dpsi * dpsi.transpose() / (psi * psi);
        h(1, 1) += 1.0 / (y * y);
        h(2, 2) += 1.0 / (z * z);

        if (grad)
            for (int r = 0; r < 3; ++r)
                for (size_t i = 0; i < rows[r].idx.size(); ++i)
                    (*grad)[rows[r].idx[i]] += g[r] * rows[r].val[i];
        if (hess)
            for (int r = 0; r < 3; ++r)
                for (int q = 0; q < 3; ++q)
                    if (h(r, q) != 0.0)
                        outer(*hess, rows[r], rows[q], h(r, q));
        return true;
    }

    bool lmi(const Lmi& l, const VectorXd& x, double& value, VectorXd* grad, MatrixXd* hess) const
    {
        const MatrixXd s = l.eval(x);
        Eigen::LLT<MatrixXd> chol(s);
        if (chol.info() != Eigen::Success)
            return false;
        const MatrixXd lower = chol.matrixL();
        double logdet = 0.0;
        for (int i = 0; i < l.dim; ++i)
        {
            if (!(lower(i, i) > 0.0))
                return false;
            logdet += std::log(lower(i, i));
        }
        value -= 2.0 * logdet;
        if (!grad && !hess)
            return true;

        const size_t nv = l.vars.size();
        std::vector<MatrixXd> g(nv);
        for (size_t j = 0; j < nv; ++j)
        {
            // G_j = L^{-1} F_j L^{-T}
            MatrixXd t = chol.matrixL().solve(l.coeffs[j]);
            g[j] = chol.matrixL().solve(t.transpose());
        }
        if (grad)
            for (size_t j = 0; j < nv; ++j)
                (*grad)[l.vars[j]] -= g[j].trace();
        if (hess)
            for (size_t j = 0; j < nv; ++j)
                for (size_t k = j; k < nv; ++k)
                {
                    const double h = (g[j].array() * g[k].array()).sum();
                    (*hess)(l.vars[j], l.vars[k]) += h;
                    if (k != j)
                        (*hess)(l.vars[k], l.vars[j]) += h;
                }
        return true;
    }

    const Compiled& p_;
};

enum class CenterOutcome
{
    Centered,
    EarlyExit,
    IterationLimit,
    Stalled,
    Failed,
    Diverged,
};

/// Damped Newton on tau c^T x + F(x) subject to A dx = 0.
class Centering
{
public:
    Centering(const Compiled& p, const SolverSettings& settings) : p_(p), barrier_(p), settings_(settings)
    {
        if (p.a_eq.rows() > 0)
        {
            Eigen::ColPivHouseholderQR<MatrixXd> qr(p.a_eq.transpose());
            const int rank = static_cast<int>(qr.rank());
            const MatrixXd q = qr.householderQ();
            null_ = q.rightCols(p.n - rank);
            has_null_ = true;
        }
    }

    template <typename StopFn>
    CenterOutcome run(VectorXd& x, double tau, int& iterations, StopFn early_stop)
    {
        VectorXd grad;
        MatrixXd hess;
        double fval = 0.0;
        double previous_lambda2 = kInf;
        double best_lambda2 = kInf;
        int since_best = 0;
        int stalled = 0;
        while (true)
        {
            if (!barrier_.eval(x, fval, &grad, &hess))
                return CenterOutcome::Failed;
            const VectorXd g = tau * p_.c + grad;
            VectorXd dx;
            if (!newton_direction(hess, g, dx))
                return CenterOutcome::Failed;
            const double lambda2 = -g.dot(dx);
            if (!std::isfinite(lambda2))
                return CenterOutcome::Failed;
            if (lambda2 * 0.5 <= settings_.newton_tol)
                return CenterOutcome::Centered;
            // Close to the center, round-off in the Hessian caps the attainable
            // decrement; stop once it no longer shrinks.
            if (lambda2 < kLooseCentering)
            {
                stalled = lambda2 > 0.9 * previous_lambda2 ? stalled + 1 : 0;
                if (stalled >= 3)
                    return CenterOutcome::Centered;
            }
            previous_lambda2 = lambda2;
            // Only inside the quadratic-convergence region, where Newton must
            // make fast progress; farther out each damped step is a fixed gain.
            if (lambda2 >= 1.0 || lambda2 < 0.5 * best_lambda2)
            {
                best_lambda2 = lambda2;
                since_best = 0;
            }
            else if (++since_best > kStallSteps)
                return CenterOutcome::Stalled;
            if (iterations >= settings_.max_iterations)
                return CenterOutcome::IterationLimit;
            ++iterations;

            // Backtrack into the domain, then to sufficient decrease.
            double alpha = 1.0;
            double trial = 0.0;
            VectorXd xt;
            const double slope = g.dot(dx);
            bool accepted = false;
            while (alpha > 1e-14)
            {
                xt = x + alpha * dx;
                if (barrier_.eval(xt, trial, nullptr, nullptr))
                {
                    const double change = tau * p_.c.dot(alpha * dx) + (trial - fval);
                    if (change <= 0.01 * alpha * slope)
                    {
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted)
            {
                // No progress possible at machine precision: treat a nearly
                // centered point as centered.
                return lambda2 < kLooseCentering ? CenterOutcome::Centered : CenterOutcome::Failed;
            }
            if (alpha < 1e-6 && lambda2 < kLooseCentering)
                return CenterOutcome::Centered;
            x = xt;
            if (!x.allFinite())
                return CenterOutcome::Failed;
            if (x.lpNorm<Eigen::Infinity>() > 1e15)
                return CenterOutcome::Diverged;
            if (early_stop(x))
                return CenterOutcome::EarlyExit;
        }
    }

private:
    bool newton_direction(const MatrixXd& hess, const VectorXd& g, VectorXd& dx) const
    {
        // Newton step restricted to the null space of the equalities.
        const MatrixXd hr = has_null_ ? MatrixXd(null_.transpose() * hess * null_) : hess;
        const VectorXd gr = has_null_ ? VectorXd(null_.transpose() * g) : g;
        if (hr.rows() == 0)
        {
            dx = VectorXd::Zero(p_.n);
            return true;
        }
        // Jacobi scaling: blocks near the cone boundary carry curvature many
        // orders above the rest.
        const VectorXd d = hr.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        const MatrixXd hs = d.asDiagonal() * hr * d.asDiagonal();
        const VectorXd gs = d.cwiseProduct(gr);
        for (double reg : {0.0, 1e-14, 1e-11, 1e-8})
        {
            MatrixXd h = hs;
            if (reg > 0.0)
                h.diagonal().array() += reg;
            Eigen::LLT<MatrixXd> llt(h);
            if (llt.info() != Eigen::Success)
                continue;
            VectorXd ds = llt.solve(-gs);
            ds += llt.solve(-gs - hs * ds); // one refinement step
            const VectorXd dy = d.cwiseProduct(ds);
            dx = has_null_ ? VectorXd(null_ * dy) : dy;
            if (dx.allFinite())
                return true;
        }
        return false;
    }

    const Compiled& p_;
    Barrier barrier_;
    const SolverSettings& settings_;
    MatrixXd null_;
    bool has_null_ = false;
};

/// Smallest relaxation s making every cone of `p` strictly feasible at x.
double required_relaxation(const Problem& problem, const VectorXd& x)
{
    double need = -kInf;
    for (const auto& e : problem.nonnegatives())
        need = std::max(need, -e.eval(x));
    for (const auto& cone : problem.second_order())
    {
        double u2 = 0.0;
        for (const auto& u : cone.u)
            u2 += std::pow(u.eval(x), 2);
        need = std::max(need, std::sqrt(u2) - cone.t.eval(x));
    }
    for (const auto& cone : problem.exponential())
    {
        const double a = cone.x.eval(x);
        const double y = cone.y.eval(x);
        const double z = cone.z.eval(x);
        double s = std::max(-y, -z) + 1e-3;
        auto inside = [&](double s_) {
            const double ys = y + s_;
            const double zs = z + s_;
            return ys > 0.0 && zs > 0.0 && ys * std::log(zs / ys) - (a - s_) > 0.0;
        };
        double step = std::max(1.0, std::abs(s));
        while (!inside(s))
        {
            s += step;
            step *= 2.0;
        }
        need = std::max(need, s);
    }
    for (const auto& cone : problem.lmis())
    {
        MatrixXd m(cone.dim, cone.dim);
        for (int i = 0; i < cone.dim; ++i)
            for (int j = 0; j <= i; ++j)
                m(i, j) = m(j, i) = cone.at(i, j).eval(x);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
        need = std::max(need, -es.eigenvalues()[0]);
    }
    return need;
}

/// tau that best balances the objective against the barrier gradient.
double initial_tau(const Compiled& p, const VectorXd& x)
{
    Barrier barrier(p);
    double f = 0.0;
    VectorXd grad;
    MatrixXd hess;
    if (!barrier.eval(x, f, &grad, &hess))
        return 1.0;
    const int n = p.n;
    MatrixXd h = hess;
    h.diagonal().array() += 1e-12 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    Eigen::LDLT<MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success || n == 0)
        return 1.0;
    const VectorXd hc = ldlt.solve(p.c);
    const double chc = p.c.dot(hc);
    if (!(chc > 0.0) || !std::isfinite(chc))
        return 1.0;
    const double tau = -grad.dot(hc) / chc;
    if (!std::isfinite(tau))
        return 1.0;
    return std::clamp(tau, 1e-6, 1e6);
}

} // namespace

Solution solve(const Problem& problem, const SolverSettings& settings)
{
    const auto start = std::chrono::steady_clock::now();
    Solution out;
    auto finish = [&](Status status) {
        out.status = status;
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    };
    const int n = problem.num_variables();
    if (n == 0)
        throw InvalidArgument("solve: problem has no variables");

    // Point on the affine set (minimum-norm).
    VectorXd x0 = VectorXd::Zero(n);
    const int n_eq = static_cast<int>(problem.equalities().size());
    MatrixXd a_eq = MatrixXd::Zero(n_eq, n);
    VectorXd b_eq = VectorXd::Zero(n_eq);
    for (int r = 0; r < n_eq; ++r)
    {
        for (const auto& [i, v] : problem.equalities()[r].terms)
            a_eq(r, i) += v;
        b_eq[r] = -problem.equalities()[r].constant;
    }
    if (n_eq > 0)
    {
        Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(a_eq);
        x0 = cod.solve(b_eq);
        if ((a_eq * x0 - b_eq).norm() > settings.feasibility_tol * (1.0 + b_eq.norm()))
            return finish(Status::Infeasible);
    }

    Compiled phase2 = compile(problem, false, 0.0);
    auto user_objective = [&](const VectorXd& x) { return problem.objective().eval(x); };

    if (phase2.num_cones == 0)
    {
        // Linear objective over an affine set: bounded iff c lies in the row
        // space of the equality matrix.
        double residual = phase2.c.norm();
        if (n_eq > 0)
        {
            const MatrixXd at = a_eq.transpose();
            const VectorXd y = at.completeOrthogonalDecomposition().solve(phase2.c);
            residual = (at * y - phase2.c).norm();
        }
        out.x = x0;
        out.objective = user_objective(x0);
        return finish(residual <= 1e-12 * (1.0 + phase2.c.norm()) ? Status::Optimal : Status::Unbounded);
    }

    // Phase I: minimize s over the relaxed cones until s < 0.
    VectorXd x = x0;
    const double need = required_relaxation(problem, x0);
    if (need >= 0.0 || !(need > -kInf))
    {
        const double radius = 1e4 * (1.0 + x0.lpNorm<Eigen::Infinity>()) * std::sqrt(static_cast<double>(n));
        Compiled phase1 = compile(problem, true, radius);
        phase1.a_eq.conservativeResize(Eigen::NoChange, n + 1);
        phase1.a_eq.col(n).setZero();
        VectorXd z(n + 1);
        z.head(n) = x0;
        z[n] = need + std::max(1.0, 0.1 * std::abs(need));

        Centering centering(phase1, settings);
        double tau = initial_tau(phase1, z);
        int iters = 0;
        bool feasible = false;
        while (true)
        {
            const CenterOutcome oc =
                centering.run(z, tau, iters, [n](const VectorXd& v) { return v[n] < 0.0; });
            out.iterations = iters;
            if (oc == CenterOutcome::EarlyExit)
            {
                feasible = true;
                break;
            }
            if (oc == CenterOutcome::Failed || oc == CenterOutcome::Diverged || oc == CenterOutcome::Stalled)
                return finish(Status::NumericalFailure);
            if (oc == CenterOutcome::IterationLimit)
                return finish(z[n] < settings.feasibility_tol ? Status::NumericalFailure : Status::Infeasible);
            const double gap = phase1.nu / tau;
            if (z[n] - gap > 0.0)
                return finish(Status::Infeasible); // certified: optimal s is positive
            if (gap <= settings.feasibility_tol * 1e-2)
                return finish(Status::Infeasible); // s* within tolerance of 0: no interior
            tau *= settings.barrier_growth;
        }
        if (!feasible)
            return finish(Status::Infeasible);
        x = z.head(n);
    }

    // Phase II.
    Centering centering(phase2, settings);
    double tau = initial_tau(phase2, x);
    int iters = 0;
    VectorXd last_centered;
    double last_gap = kInf;
    auto done = [&](Status status, const VectorXd& at, double gap) {
        out.x = at;
        out.objective = user_objective(at);
        out.gap = gap;
        out.iterations += iters;
        return finish(status);
    };
    while (true)
    {
        const CenterOutcome oc = centering.run(x, tau, iters, [](const VectorXd&) { return false; });
        if (oc == CenterOutcome::Diverged)
            return done(Status::Unbounded, x, kInf);
        if (oc != CenterOutcome::Centered)
        {
            // Round-off stops progress: fall back to the last centered point
            // when its certified gap is acceptable.
            if (last_centered.size() > 0 &&
                last_gap <= settings.acceptable_gap_tol * (1.0 + std::abs(user_objective(last_centered))))
                return done(Status::Optimal, last_centered, last_gap);
            return done(Status::NumericalFailure, x, phase2.nu / tau);
        }
        const double obj = user_objective(x);
        if (std::abs(obj) > 1e15)
            return done(Status::Unbounded, x, kInf);
        const double gap = phase2.nu / tau;
        if (gap <= settings.gap_tol * (1.0 + std::abs(obj)))
            return done(Status::Optimal, x, gap);
        last_centered = x;
        last_gap = gap;
        tau *= settings.barrier_growth;
    }
}

} // namespace netisac::conic
