#include "netisac/conic/embedding.hpp"

namespace netisac::conic
{

Eigen::MatrixXd embed_hermitian(const CMatrix& x)
{
    if (x.rows() != x.cols())
        throw InvalidArgument("embed_hermitian: matrix must be square");
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if ((x - x.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidArgument("embed_hermitian: matrix is not Hermitian");
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = x.real();
    out.bottomRightCorner(n, n) = x.real();
    out.topRightCorner(n, n) = -x.imag();
    out.bottomLeftCorner(n, n) = x.imag();
    return out;
}

CMatrix extract_hermitian(const Eigen::MatrixXd& embedded)
{
    if (embedded.rows() != embedded.cols() || embedded.rows() % 2 != 0)
        throw InvalidArgument("extract_hermitian: expected a 2n x 2n matrix");
    const Eigen::Index n = embedded.rows() / 2;
    CMatrix out(n, n);
    out.real() = embedded.topLeftCorner(n, n);
    out.imag() = embedded.bottomLeftCorner(n, n);
    return out;
}

Eigen::VectorXd stack_real(const CVector& v)
{
    Eigen::VectorXd out(2 * v.size());
    out << v.real(), v.imag();
    return out;
}

} // namespace netisac::conic
