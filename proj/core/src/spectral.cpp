#include "combforge/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "combforge/conventions.hpp"

namespace combforge {

namespace {

void fix_phase(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    const double top = vectors.col(j).cwiseAbs().maxCoeff();
    if (top == 0.0) continue;
    for (Index i = 0; i < vectors.rows(); ++i) {
      const Complex z = vectors(i, j);
      if (std::abs(z) > 1e-12 * top) {
        vectors.col(j) *= std::conj(z) / std::abs(z);
        break;
      }
    }
  }
}

// Eigenvalues of a PSD operator with the tolerated clip applied; throws on a
// genuinely negative spectrum.
RVector clipped_psd_eigenvalues(const EigResult& eig, const char* who) {
  const double top = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double floor = -kPsdTolFactor * top;
  RVector vals = eig.values;
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < floor) {
      throw std::invalid_argument(std::string(who) +
                                  ": eigenvalue " + std::to_string(vals(i)) +
                                  " below PSD tolerance");
    }
    if (vals(i) < 0.0) vals(i) = 0.0;
  }
  return vals;
}

}  // namespace

EigResult eig_hermitian(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: solver failed");
  }
  const Index n = m.dim();
  EigResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order.
  for (Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  fix_phase(out.vectors);
  return out;
}

HermitianOperator matrix_sqrt_psd(const HermitianOperator& m) {
  EigResult eig = eig_hermitian(m);
  RVector vals = clipped_psd_eigenvalues(eig, "matrix_sqrt_psd");
  Matrix s = eig.vectors * vals.cwiseSqrt().asDiagonal() *
             eig.vectors.adjoint();
  return HermitianOperator::from_symmetrized(m.layout(), std::move(s));
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(m.m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? rank_tol * sv(0) : 0.0;
  RVector inv = RVector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  Matrix p = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return {m.cols, m.rows, std::move(p)};
}

double fidelity(const HermitianOperator& p, const HermitianOperator& q) {
  if (p.layout() != q.layout()) {
    throw std::invalid_argument("fidelity: layout mismatch");
  }
  const HermitianOperator sp = matrix_sqrt_psd(p);
  // F = Tr sqrt(sqrt(p) q sqrt(p)); the inner operator is PSD up to the
  // clipped noise in q, so clip again after conjugation.
  Matrix inner = sp.matrix() * q.matrix() * sp.matrix();
  HermitianOperator h =
      HermitianOperator::from_symmetrized(p.layout(), std::move(inner));
  EigResult eig = eig_hermitian(h);
  RVector vals = clipped_psd_eigenvalues(eig, "fidelity");
  return vals.cwiseSqrt().sum();
}

Matrix complete_isometry(const Matrix& columns) {
  const Index n = columns.rows();
  const Index k = columns.cols();
  if (k > n) {
    throw std::invalid_argument("complete_isometry: more columns than rows");
  }
  const double gram_residual =
      max_abs(columns.adjoint() * columns - Matrix::Identity(k, k));
  if (gram_residual > kOrthonormTol) {
    throw std::invalid_argument(
        "complete_isometry: input columns not orthonormal (Gram residual " +
        std::to_string(gram_residual) + ")");
  }
  Matrix u(n, n);
  u.leftCols(k) = columns;
  Index filled = k;
  // Deterministic completion: project standard basis vectors onto the
  // orthogonal complement, re-orthogonalizing twice for stability.
  for (Index cand = 0; cand < n && filled < n; ++cand) {
    CVector v = CVector::Zero(n);
    v(cand) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      v -= u.leftCols(filled) * (u.leftCols(filled).adjoint() * v).eval();
    }
    const double norm = v.norm();
    if (norm > 0.5 / std::sqrt(static_cast<double>(n))) {
      u.col(filled++) = v / norm;
    }
  }
  // A full basis always falls out of the candidates above, but guard anyway.
  for (Index cand = 0; cand < n && filled < n; ++cand) {
    CVector v = CVector::Zero(n);
    v(cand) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      v -= u.leftCols(filled) * (u.leftCols(filled).adjoint() * v).eval();
    }
    const double norm = v.norm();
    if (norm > 1e-8) u.col(filled++) = v / norm;
  }
  if (filled < n) {
    throw std::runtime_error("complete_isometry: completion failed");
  }
  return u;
}

}  // namespace combforge
