#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "netisac/types.hpp"

namespace netisac::conic
{

/// Sparse affine function of the problem's scalar variables.
struct LinExpr
{
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;

    LinExpr() = default;
    explicit LinExpr(double c) : constant(c) {}

    static LinExpr variable(int index, double coeff = 1.0);

    LinExpr& add_term(int index, double coeff);
    LinExpr& operator+=(const LinExpr& other);
    LinExpr& operator-=(const LinExpr& other);
    LinExpr& operator*=(double factor);

    double eval(const Eigen::VectorXd& x) const;

    /// Merges duplicate indices and drops exact zeros; sorted by index.
    LinExpr compressed() const;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double f, LinExpr a);
LinExpr operator*(LinExpr a, double f);

enum class Sense
{
    Minimize,
    Maximize,
};

struct FreeBlock
{
    int offset = 0;
    int size = 0;

    LinExpr operator[](int i) const { return LinExpr::variable(offset + i); }
    Eigen::VectorXd value(const Eigen::VectorXd& x) const { return x.segment(offset, size); }
};

/// Real symmetric dim x dim block, parametrized by its upper triangle.
struct SymmetricBlock
{
    int offset = 0;
    int dim = 0;

    int param(int i, int j) const;
    LinExpr entry(int i, int j) const { return LinExpr::variable(param(i, j)); }
    Eigen::MatrixXd value(const Eigen::VectorXd& x) const;
    static int num_params(int dim) { return dim * (dim + 1) / 2; }
};

/// Complex Hermitian dim x dim block parametrized by dim^2 reals: the real
/// diagonal followed by (Re, Im) of each strictly-upper entry, row-major.
struct HermitianBlock
{
    int offset = 0;
    int dim = 0;

    int re_param(int i, int j) const;
    int im_param(int i, int j) const;
    LinExpr re(int i, int j) const;
    LinExpr im(int i, int j) const;

    /// Re tr(A X) for a Hermitian coefficient matrix A.
    LinExpr trace_product(const CMatrix& a) const;
    LinExpr trace() const;

    CMatrix value(const Eigen::VectorXd& x) const;
    static int num_params(int dim) { return dim * dim; }
};

enum class ConeKind
{
    Zero,        ///< expr == 0
    Nonnegative, ///< expr >= 0
    SecondOrder, ///< |(u_1..u_k)| <= t
    Exponential, ///< (x, y, z) with y exp(x/y) <= z, y > 0
    Psd,         ///< symmetric affine matrix >= 0
};

struct ConstraintHandle
{
    ConeKind kind;
    int index;
};

struct ExpCone
{
    LinExpr x, y, z;
};

struct SocCone
{
    LinExpr t;
    std::vector<LinExpr> u;
};

/// Symmetric affine matrix; entries stored row-major, only the lower
/// triangle (j <= i) is read.
struct LmiCone
{
    int dim = 0;
    std::vector<LinExpr> entries;

    const LinExpr& at(int i, int j) const { return i >= j ? entries[i * dim + j] : entries[j * dim + i]; }
};

struct VariableBlockInfo
{
    enum class Kind
    {
        Free,
        Symmetric,
        Hermitian,
    };
    std::string name;
    Kind kind;
    int offset;
    int size; ///< scalar count
    int dim;  ///< matrix dimension, 0 for free blocks
};

/// Convex conic program over real scalar variables.
///
/// Matrix blocks automatically carry their PSD membership (Hermitian blocks
/// through the real embedding).
class Problem
{
public:
    FreeBlock add_free(std::string name, int size);
    SymmetricBlock add_symmetric_psd(std::string name, int dim);
    HermitianBlock add_hermitian_psd(std::string name, int dim);

    void set_objective(Sense sense, LinExpr objective);

    /// expr == 0
    ConstraintHandle add_equality(LinExpr expr);
    /// expr >= 0
    ConstraintHandle add_nonneg(LinExpr expr);
    ConstraintHandle add_soc(LinExpr t, std::vector<LinExpr> u);
    ConstraintHandle add_exp(LinExpr x, LinExpr y, LinExpr z);
    ConstraintHandle add_lmi(int dim, std::vector<LinExpr> entries_row_major);

    /// t <= ln(u) through the exponential cone (t, 1, u). Scale t by log2(e)
    /// in the objective to work in bits.
    ConstraintHandle add_log_hypograph(LinExpr t, LinExpr u);

    int num_variables() const { return num_vars_; }
    Sense sense() const { return sense_; }
    const LinExpr& objective() const { return objective_; }
    const std::vector<LinExpr>& equalities() const { return equalities_; }
    const std::vector<LinExpr>& nonnegatives() const { return nonneg_; }
    const std::vector<SocCone>& second_order() const { return soc_; }
    const std::vector<ExpCone>& exponential() const { return exp_; }
    const std::vector<LmiCone>& lmis() const { return lmi_; }
    const std::vector<VariableBlockInfo>& blocks() const { return blocks_; }

    /// Writes the problem in the Conic Benchmark Format (CBF v3).
    void write_cbf(std::ostream& os) const;

private:
    int reserve(std::string name, VariableBlockInfo::Kind kind, int size, int dim);
    void check(const LinExpr& e) const;

    int num_vars_ = 0;
    Sense sense_ = Sense::Minimize;
    LinExpr objective_;
    std::vector<LinExpr> equalities_;
    std::vector<LinExpr> nonneg_;
    std::vector<SocCone> soc_;
    std::vector<ExpCone> exp_;
    std::vector<LmiCone> lmi_;
    std::vector<VariableBlockInfo> blocks_;
};

} // namespace netisac::conic
