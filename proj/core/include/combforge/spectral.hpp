#ifndef COMBFORGE_SPECTRAL_HPP
#define COMBFORGE_SPECTRAL_HPP

#include "combforge/matrix.hpp"

namespace combforge {

struct EigResult {
  RVector values;   // descending
  Matrix vectors;   // orthonormal columns, deterministic phase
};

// Hermitian eigendecomposition (tridiagonalization + implicit QR via Eigen's
// self-adjoint solver).  Eigenvalues descending; each eigenvector's first
// non-negligible component is made real positive so golden tests reproduce.
EigResult eig_hermitian(const HermitianOperator& m);

// PSD square root.  Eigenvalues in [-psd_tol, 0) are clipped to zero where
// psd_tol = kPsdTolFactor * |lambda|_max; anything lower throws.
HermitianOperator matrix_sqrt_psd(const HermitianOperator& m);

// Moore-Penrose pseudoinverse; singular values <= rank_tol * sigma_max are
// treated as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol);

// Uhlmann fidelity F(p, q) = || sqrt(p) sqrt(q) ||_1 for PSD p, q on the same
// layout (small negative eigenvalues clipped as in matrix_sqrt_psd).
double fidelity(const HermitianOperator& p, const HermitianOperator& q);

// Extends a matrix with orthonormal columns to a square unitary whose leading
// columns equal the input.  Throws if the Gram residual exceeds tolerance.
Matrix complete_isometry(const Matrix& columns);

}  // namespace combforge

#endif
