#pragma once

#include "netisac/types.hpp"

namespace netisac::conic
{

/// [[Re X, -Im X], [Im X, Re X]]. The embedding is PSD iff X is, its trace is
/// twice tr X, and v^H X v = vt^T Xt vt for vt = [Re v; Im v].
///
/// Throws InvalidArgument unless X is Hermitian within 1e-12 relative.
Eigen::MatrixXd embed_hermitian(const CMatrix& x);

/// Inverse of embed_hermitian; reads the top-left and bottom-left blocks.
CMatrix extract_hermitian(const Eigen::MatrixXd& embedded);

/// [Re v; Im v].
Eigen::VectorXd stack_real(const CVector& v);

} // namespace netisac::conic
