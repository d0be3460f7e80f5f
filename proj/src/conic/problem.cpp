#include "netisac/conic/problem.hpp"

#include <algorithm>
#include <ostream>

namespace netisac::conic
{

LinExpr LinExpr::variable(int index, double coeff)
{
    LinExpr e;
    e.terms.emplace_back(index, coeff);
    return e;
}

LinExpr& LinExpr::add_term(int index, double coeff)
{
    terms.emplace_back(index, coeff);
    return *this;
}

LinExpr& LinExpr::operator+=(const LinExpr& other)
{
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    constant += other.constant;
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other)
{
    for (const auto& [i, c] : other.terms)
        terms.emplace_back(i, -c);
    constant -= other.constant;
    return *this;
}

LinExpr& LinExpr::operator*=(double factor)
{
    for (auto& t : terms)
        t.second *= factor;
    constant *= factor;
    return *this;
}

double LinExpr::eval(const Eigen::VectorXd& x) const
{
    double v = constant;
    for (const auto& [i, c] : terms)
        v += c * x[i];
    return v;
}

LinExpr LinExpr::compressed() const
{
    LinExpr out(constant);
    out.terms = terms;
    std::sort(out.terms.begin(), out.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, double>> merged;
    for (const auto& t : out.terms)
    {
        if (!merged.empty() && merged.back().first == t.first)
            merged.back().second += t.second;
        else
            merged.push_back(t);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const auto& t) { return t.second == 0.0; }),
                 merged.end());
    out.terms = std::move(merged);
    return out;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double f, LinExpr a) { return a *= f; }
LinExpr operator*(LinExpr a, double f) { return a *= f; }

int SymmetricBlock::param(int i, int j) const
{
    if (i > j)
        std::swap(i, j);
    return offset + i * dim - i * (i - 1) / 2 + (j - i);
}

Eigen::MatrixXd SymmetricBlock::value(const Eigen::VectorXd& x) const
{
    Eigen::MatrixXd out(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            out(i, j) = out(j, i) = x[param(i, j)];
    return out;
}

namespace
{

int upper_pair_index(int i, int j, int n)
{
    // strictly-upper entries enumerated row by row
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

} // namespace

int HermitianBlock::re_param(int i, int j) const
{
    if (i == j)
        return offset + i;
    if (i > j)
        std::swap(i, j);
    return offset + dim + 2 * upper_pair_index(i, j, dim);
}

int HermitianBlock::im_param(int i, int j) const
{
    if (i >= j)
        throw InvalidArgument("HermitianBlock::im_param expects i < j");
    return offset + dim + 2 * upper_pair_index(i, j, dim) + 1;
}

LinExpr HermitianBlock::re(int i, int j) const { return LinExpr::variable(re_param(i, j)); }

LinExpr HermitianBlock::im(int i, int j) const
{
    if (i == j)
        return LinExpr();
    if (i < j)
        return LinExpr::variable(im_param(i, j));
    return LinExpr::variable(im_param(j, i), -1.0);
}

LinExpr HermitianBlock::trace_product(const CMatrix& a) const
{
    LinExpr e;
    for (int i = 0; i < dim; ++i)
    {
        if (a(i, i).real() != 0.0)
            e.add_term(re_param(i, i), a(i, i).real());
        for (int j = i + 1; j < dim; ++j)
        {
            if (a(i, j).real() != 0.0)
                e.add_term(re_param(i, j), 2.0 * a(i, j).real());
            if (a(i, j).imag() != 0.0)
                e.add_term(im_param(i, j), 2.0 * a(i, j).imag());
        }
    }
    return e;
}

LinExpr HermitianBlock::trace() const
{
    LinExpr e;
    for (int i = 0; i < dim; ++i)
        e.add_term(re_param(i, i), 1.0);
    return e;
}

CMatrix HermitianBlock::value(const Eigen::VectorXd& x) const
{
    CMatrix out(dim, dim);
    for (int i = 0; i < dim; ++i)
    {
        out(i, i) = Complex(x[re_param(i, i)], 0.0);
        for (int j = i + 1; j < dim; ++j)
        {
            const Complex v(x[re_param(i, j)], x[im_param(i, j)]);
            out(i, j) = v;
            out(j, i) = std::conj(v);
        }
    }
    return out;
}

int Problem::reserve(std::string name, VariableBlockInfo::Kind kind, int size, int dim)
{
    if (size <= 0)
        throw InvalidArgument("Problem: variable blocks must have positive size");
    const int offset = num_vars_;
    blocks_.push_back({std::move(name), kind, offset, size, dim});
    num_vars_ += size;
    return offset;
}

FreeBlock Problem::add_free(std::string name, int size)
{
    return FreeBlock{reserve(std::move(name), VariableBlockInfo::Kind::Free, size, 0), size};
}

SymmetricBlock Problem::add_symmetric_psd(std::string name, int dim)
{
    if (dim <= 0)
        throw InvalidArgument("Problem: PSD blocks must have positive dimension");
    SymmetricBlock b{reserve(std::move(name), VariableBlockInfo::Kind::Symmetric,
                             SymmetricBlock::num_params(dim), dim),
                     dim};
    std::vector<LinExpr> entries(static_cast<size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            entries[i * dim + j] = b.entry(i, j);
    add_lmi(dim, std::move(entries));
    return b;
}

HermitianBlock Problem::add_hermitian_psd(std::string name, int dim)
{
    if (dim <= 0)
        throw InvalidArgument("Problem: PSD blocks must have positive dimension");
    HermitianBlock b{reserve(std::move(name), VariableBlockInfo::Kind::Hermitian,
                             HermitianBlock::num_params(dim), dim),
                     dim};
    const int n2 = 2 * dim;
    std::vector<LinExpr> entries(static_cast<size_t>(n2) * n2);
    for (int i = 0; i < dim; ++i)
    {
        for (int j = 0; j < dim; ++j)
        {
            entries[i * n2 + j] = b.re(i, j);
            entries[(dim + i) * n2 + dim + j] = b.re(i, j);
            entries[i * n2 + dim + j] = -1.0 * b.im(i, j);
            entries[(dim + i) * n2 + j] = b.im(i, j);
        }
    }
    add_lmi(n2, std::move(entries));
    return b;
}

void Problem::check(const LinExpr& e) const
{
    for (const auto& [i, c] : e.terms)
    {
        if (i < 0 || i >= num_vars_)
            throw InvalidArgument("Problem: expression references an undeclared variable");
        if (!std::isfinite(c))
            throw InvalidArgument("Problem: non-finite coefficient");
    }
    if (!std::isfinite(e.constant))
        throw InvalidArgument("Problem: non-finite constant");
}

void Problem::set_objective(Sense sense, LinExpr objective)
{
    check(objective);
    sense_ = sense;
    objective_ = objective.compressed();
}

ConstraintHandle Problem::add_equality(LinExpr expr)
{
    check(expr);
    equalities_.push_back(expr.compressed());
    return {ConeKind::Zero, static_cast<int>(equalities_.size()) - 1};
}

ConstraintHandle Problem::add_nonneg(LinExpr expr)
{
    check(expr);
    nonneg_.push_back(expr.compressed());
    return {ConeKind::Nonnegative, static_cast<int>(nonneg_.size()) - 1};
}

ConstraintHandle Problem::add_soc(LinExpr t, std::vector<LinExpr> u)
{
    check(t);
    SocCone cone{t.compressed(), {}};
    for (auto& e : u)
    {
        check(e);
        cone.u.push_back(e.compressed());
    }
    soc_.push_back(std::move(cone));
    return {ConeKind::SecondOrder, static_cast<int>(soc_.size()) - 1};
}

ConstraintHandle Problem::add_exp(LinExpr x, LinExpr y, LinExpr z)
{
    check(x);
    check(y);
    check(z);
    exp_.push_back({x.compressed(), y.compressed(), z.compressed()});
    return {ConeKind::Exponential, static_cast<int>(exp_.size()) - 1};
}

ConstraintHandle Problem::add_lmi(int dim, std::vector<LinExpr> entries)
{
    if (dim <= 0 || entries.size() != static_cast<size_t>(dim) * dim)
        throw InvalidArgument("Problem: LMI entry count must be dim^2");
    for (auto& e : entries)
    {
        check(e);
        e = e.compressed();
    }
    lmi_.push_back({dim, std::move(entries)});
    return {ConeKind::Psd, static_cast<int>(lmi_.size()) - 1};
}

ConstraintHandle Problem::add_log_hypograph(LinExpr t, LinExpr u)
{
    return add_exp(std::move(t), LinExpr(1.0), std::move(u));
}

void Problem::write_cbf(std::ostream& os) const
{
    os.precision(17);
    os << "VER\n3\n\n";
    os << "OBJSENSE\n" << (sense_ == Sense::Minimize ? "MIN" : "MAX") << "\n\n";
    os << "VAR\n" << num_vars_ << " 1\nF " << num_vars_ << "\n\n";

    // Scalar rows in cone order: equalities, nonnegatives, SOCs, EXPs.
    std::vector<const LinExpr*> rows;
    std::vector<std::pair<std::string, int>> groups;
    if (!equalities_.empty())
    {
        groups.emplace_back("L=", static_cast<int>(equalities_.size()));
        for (const auto& e : equalities_)
            rows.push_back(&e);
    }
    if (!nonneg_.empty())
    {
        groups.emplace_back("L+", static_cast<int>(nonneg_.size()));
        for (const auto& e : nonneg_)
            rows.push_back(&e);
    }
    for (const auto& c : soc_)
    {
        groups.emplace_back("Q", static_cast<int>(c.u.size()) + 1);
        rows.push_back(&c.t);
        for (const auto& e : c.u)
            rows.push_back(&e);
    }
    for (const auto& c : exp_)
    {
        // CBF orders the exponential cone as (z, y, x): z >= y exp(x / y).
        groups.emplace_back("EXP", 3);
        rows.push_back(&c.z);
        rows.push_back(&c.y);
        rows.push_back(&c.x);
    }
    if (!rows.empty())
    {
        os << "CON\n" << rows.size() << ' ' << groups.size() << '\n';
        for (const auto& [name, size] : groups)
            os << name << ' ' << size << '\n';
        os << '\n';
    }
    if (!lmi_.empty())
    {
        os << "PSDCON\n" << lmi_.size() << '\n';
        for (const auto& c : lmi_)
            os << c.dim << '\n';
        os << '\n';
    }

    if (!objective_.terms.empty())
    {
        os << "OBJACOORD\n" << objective_.terms.size() << '\n';
        for (const auto& [j, v] : objective_.terms)
            os << j << ' ' << v << '\n';
        os << '\n';
    }
    if (objective_.constant != 0.0)
        os << "OBJBCOORD\n" << objective_.constant << "\n\n";

    size_t nnz = 0;
    size_t nb = 0;
    for (const auto* r : rows)
    {
        nnz += r->terms.size();
        nb += r->constant != 0.0 ? 1 : 0;
    }
    if (nnz > 0)
    {
        os << "ACOORD\n" << nnz << '\n';
        for (size_t i = 0; i < rows.size(); ++i)
            for (const auto& [j, v] : rows[i]->terms)
                os << i << ' ' << j << ' ' << v << '\n';
        os << '\n';
    }
    if (nb > 0)
    {
        os << "BCOORD\n" << nb << '\n';
        for (size_t i = 0; i < rows.size(); ++i)
            if (rows[i]->constant != 0.0)
                os << i << ' ' << rows[i]->constant << '\n';
        os << '\n';
    }

    size_t hnnz = 0;
    size_t dnnz = 0;
    for (const auto& c : lmi_)
        for (int k = 0; k < c.dim; ++k)
            for (int l = 0; l <= k; ++l)
            {
                hnnz += c.at(k, l).terms.size();
                dnnz += c.at(k, l).constant != 0.0 ? 1 : 0;
            }
    if (hnnz > 0)
    {
        os << "HCOORD\n" << hnnz << '\n';
        for (size_t i = 0; i < lmi_.size(); ++i)
            for (int k = 0; k < lmi_[i].dim; ++k)
                for (int l = 0; l <= k; ++l)
                    for (const auto& [j, v] : lmi_[i].at(k, l).terms)
                        os << i << ' ' << j << ' ' << k << ' ' << l << ' ' << v << '\n';
        os << '\n';
    }
    if (dnnz > 0)
    {
        os << "DCOORD\n" << dnnz << '\n';
        for (size_t i = 0; i < lmi_.size(); ++i)
            for (int k = 0; k < lmi_[i].dim; ++k)
                for (int l = 0; l <= k; ++l)
                    if (lmi_[i].at(k, l).constant != 0.0)
                        os << i << ' ' << k << ' ' << l << ' ' << lmi_[i].at(k, l).constant << '\n';
        os << '\n';
    }
}

} // namespace netisac::conic
