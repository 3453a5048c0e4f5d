#include <combforge/rng.hpp>
#include <combforge/spectral.hpp>
#include <combforge/tensor_ops.hpp>
#include <doctest.h>

#include "oracles.hpp"

using namespace combforge;

TEST_CASE("eig reconstructs and orders descending") {
  CounterRng rng(51);
  Matrix m = oracles::random_hermitian(6, rng);
  HermitianOperator h(Layout::single("A", 6), m);
  EigResult e = eig_hermitian(h);
  Matrix rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
  CHECK(frobenius(rec - m) < 1e-11 * frobenius(m));
  for (Index i = 0; i + 1 < e.values.size(); ++i) {
    CHECK(e.values(i) >= e.values(i + 1));
  }
}

TEST_CASE("eig is deterministic with a fixed phase convention") {
  CounterRng rng(53);
  Matrix m = oracles::random_hermitian(5, rng);
  HermitianOperator h(Layout::single("A", 5), m);
  EigResult a = eig_hermitian(h);
  EigResult b = eig_hermitian(h);
  CHECK(max_abs(a.vectors - b.vectors) == 0.0);
  // First non-negligible component of each eigenvector is real positive.
  for (Index j = 0; j < 5; ++j) {
    for (Index i = 0; i < 5; ++i) {
      const Complex z = a.vectors(i, j);
      if (std::abs(z) > 1e-9) {
        CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(z.real() > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("matrix_sqrt_psd squares back") {
  CounterRng rng(59);
  for (int t = 0; t < 10; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    Matrix p = oracles::random_psd(d, rng);
    HermitianOperator h(Layout::single("A", d), p);
    HermitianOperator s = matrix_sqrt_psd(h);
    CHECK(frobenius(s.matrix() * s.matrix() - p) < 1e-10 * frobenius(p));
  }
}

TEST_CASE("matrix_sqrt_psd clips solver noise but rejects real negativity") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1e-12;  // within psd_tol of the top eigenvalue
  HermitianOperator ok(Layout::single("A", 2), m);
  CHECK_NOTHROW(matrix_sqrt_psd(ok));
  m(1, 1) = -1e-3;
  HermitianOperator bad(Layout::single("A", 2), m);
  CHECK_THROWS_AS(matrix_sqrt_psd(bad), std::invalid_argument);
}

TEST_CASE("pseudo_inverse satisfies the Moore-Penrose identities") {
  CounterRng rng(61);
  Matrix m = oracles::random_matrix(4, 2, rng);
  ComplexMatrix cm{Layout::single("A", 4), Layout::single("B", 2), m};
  ComplexMatrix p = pseudo_inverse(cm, 1e-12);
  CHECK(frobenius(m * p.m * m - m) < 1e-12 * frobenius(m));
  CHECK(frobenius(p.m * m * p.m - p.m) < 1e-12 * frobenius(p.m));
}

TEST_CASE("fidelity closed forms") {
  Layout l = Layout::single("A", 2);
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 0.25;
  rho(1, 1) = 0.75;
  HermitianOperator state(l, rho);
  CHECK(fidelity(state, state) ==
        doctest::Approx(rho.trace().real()).epsilon(1e-12));

  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(fidelity(HermitianOperator(l, p0), HermitianOperator(l, p1)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  Matrix half = 0.5 * Matrix::Identity(2, 2);
  CHECK(fidelity(HermitianOperator(l, p0), HermitianOperator(l, half)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("fidelity symmetry and unitary invariance (property)") {
  CounterRng rng(67);
  Layout l = Layout::single("A", 3);
  for (int t = 0; t < 10; ++t) {
    Matrix p = oracles::random_psd(3, rng);
    Matrix q = oracles::random_psd(3, rng);
    HermitianOperator hp(l, p), hq(l, q);
    const double f = fidelity(hp, hq);
    CHECK(std::abs(f - fidelity(hq, hp)) < 1e-10);
    CHECK(f <= std::sqrt(p.trace().real() * q.trace().real()) + 1e-10);

    Matrix u = combforge::random_unitary(3, rng);
    HermitianOperator up =
        HermitianOperator::from_symmetrized(l, u * p * u.adjoint());
    HermitianOperator uq =
        HermitianOperator::from_symmetrized(l, u * q * u.adjoint());
    CHECK(std::abs(fidelity(up, uq) - f) < 1e-10);
  }
}

TEST_CASE("complete_isometry") {
  // Identity stays identity.
  Matrix i3 = Matrix::Identity(3, 3);
  CHECK(max_abs(complete_isometry(i3) - i3) == 0.0);

  // A single basis vector extends to a unitary with that first column.
  Matrix e1 = Matrix::Zero(3, 1);
  e1(0, 0) = 1.0;
  Matrix u = complete_isometry(e1);
  CHECK(max_abs(u.col(0) - e1.col(0)) == 0.0);
  CHECK(max_abs(u.adjoint() * u - i3) < 1e-12);

  // Random 6 -> 2 isometry: completion is unitary with matching leading block.
  CounterRng rng(71);
  Matrix g = oracles::random_matrix(6, 2, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = Matrix(qr.householderQ()).leftCols(2);
  Matrix full = complete_isometry(q);
  CHECK(max_abs(full.leftCols(2) - q) < 1e-14);
  CHECK(max_abs(full.adjoint() * full - Matrix::Identity(6, 6)) < 1e-12);

  // Non-orthonormal input is rejected.
  CHECK_THROWS_AS(complete_isometry(2.0 * q), std::invalid_argument);
}
