#ifndef COMBFORGE_TEST_ORACLES_HPP
#define COMBFORGE_TEST_ORACLES_HPP

// Independent oracles used to freeze expected values.  Everything here is
// written against raw indices, separate from the library's layout machinery.

#include <combforge/channel.hpp>
#include <combforge/matrix.hpp>

namespace oracles {

using combforge::Complex;
using combforge::CounterRng;
using combforge::Index;
using combforge::Matrix;

// Entry-by-entry Kronecker product: out(i*rb+k, j*cb+l) = a(i,j) b(k,l).
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Partial trace over the second factor of a (da x db) system by explicit
// index sums.
inline Matrix ptrace_second(const Matrix& m, Index da, Index db) {
  Matrix out = Matrix::Zero(da, da);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index t = 0; t < db; ++t)
        out(i, j) += m(i * db + t, j * db + t);
  return out;
}

// Partial trace over the first factor.
inline Matrix ptrace_first(const Matrix& m, Index da, Index db) {
  Matrix out = Matrix::Zero(db, db);
  for (Index k = 0; k < db; ++k)
    for (Index l = 0; l < db; ++l)
      for (Index t = 0; t < da; ++t)
        out(k, l) += m(t * db + k, t * db + l);
  return out;
}

// Factor swap on a (da x db) operator: out[(k,i),(l,j)] = m[(i,k),(j,l)].
inline Matrix swap_factors(const Matrix& m, Index da, Index db) {
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < da; ++i)
    for (Index k = 0; k < db; ++k)
      for (Index j = 0; j < da; ++j)
        for (Index l = 0; l < db; ++l)
          out(k * da + i, l * da + j) = m(i * db + k, j * db + l);
  return out;
}

inline Matrix random_matrix(Index rows, Index cols, CounterRng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
  return m;
}

inline Matrix random_hermitian(Index d, CounterRng& rng) {
  Matrix g = random_matrix(d, d, rng);
  return (g + Matrix(g.adjoint())) / 2.0;
}

inline Matrix random_psd(Index d, CounterRng& rng) {
  Matrix g = random_matrix(d, d, rng);
  return g * g.adjoint();
}

// D_max by bisection over lambda with an eigenvalue PSD test, independent of
// the closed form used by the library.
inline double d_max_bisection(const Matrix& p, const Matrix& q) {
  auto psd = [&](double lambda) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(lambda * q - p,
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -1e-12;
  };
  double lo = 0.0, hi = 1.0;
  while (!psd(hi)) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psd(mid) ? hi : lo) = mid;
  }
  return std::log2(hi);
}

// min Tr(Y) s.t. I (x) Y >= rho by penalized gradient descent over Hermitian
// Y; rho on (dx * dy) with the X factor first.  A direct numerical
// minimization oracle, independent of any SDP machinery.
inline double hmin_optimum_descent(const Matrix& rho, Index dx, Index dy) {
  Matrix y = Matrix::Identity(dy, dy) * (rho.cwiseAbs().maxCoeff() + 1.0);
  const Matrix ix = Matrix::Identity(dx, dx);
  double beta = 1e4;
  for (int stage = 0; stage < 5; ++stage, beta *= 100.0) {
    double step = 0.1;
    for (int it = 0; it < 4000; ++it) {
      Matrix slack = kron(ix, y) - rho;
      Eigen::SelfAdjointEigenSolver<Matrix> es(slack);
      // Penalty sum over negative eigenvalues, differentiable a.e.
      Matrix grad = Matrix::Identity(dy, dy);
      double pen = 0.0;
      for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam < 0.0) {
          pen += lam * lam;
          const Matrix vv =
              es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
          grad += 2.0 * beta * lam * ptrace_first(vv, dx, dy);
        }
      }
      const double f0 = y.trace().real() + beta * pen;
      Matrix cand = y - step * grad;
      cand = (cand + Matrix(cand.adjoint())) / 2.0;
      Matrix cslack = kron(ix, cand) - rho;
      Eigen::SelfAdjointEigenSolver<Matrix> es2(cslack,
                                                Eigen::EigenvaluesOnly);
      double cpen = 0.0;
      for (Index i = 0; i < es2.eigenvalues().size(); ++i) {
        const double lam = es2.eigenvalues()(i);
        if (lam < 0.0) cpen += lam * lam;
      }
      const double f1 = cand.trace().real() + beta * cpen;
      if (f1 < f0) {
        y = cand;
        step *= 1.1;
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
      }
    }
  }
  // Project to exact feasibility before reading the objective.
  Matrix slack = kron(ix, y) - rho;
  Eigen::SelfAdjointEigenSolver<Matrix> es(slack, Eigen::EigenvaluesOnly);
  const double lift = std::max(0.0, -es.eigenvalues()(0));
  y += lift * Matrix::Identity(dy, dy);
  return y.trace().real();
}

}  // namespace oracles

#endif
