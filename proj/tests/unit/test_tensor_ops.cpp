#include <combforge/rng.hpp>
#include <combforge/tensor_ops.hpp>
#include <doctest.h>

#include "oracles.hpp"

using namespace combforge;

namespace {

ComplexMatrix op(const std::string& label_a, Index da,
                 const std::string& label_b, Index db, const Matrix& m) {
  Layout l({{label_a, da}, {label_b, db}});
  return {l, l, m};
}

}  // namespace

TEST_CASE("tensor product identities") {
  ComplexMatrix i2 = ComplexMatrix::identity(Layout::single("A", 2));
  ComplexMatrix i3 = ComplexMatrix::identity(Layout::single("B", 3));
  ComplexMatrix i6 = tensor_product(i2, i3);
  CHECK(max_abs(i6.m - Matrix::Identity(6, 6)) == 0.0);
  CHECK(i6.rows.total_dim() == 6);

  // Trivial 1x1 factor extends the layout without touching entries.
  ComplexMatrix one = ComplexMatrix::identity(Layout::single("T", 1));
  CounterRng rng(7);
  Matrix a = oracles::random_matrix(3, 3, rng);
  ComplexMatrix am{Layout::single("C", 3), Layout::single("C", 3), a};
  ComplexMatrix ext = tensor_product(one, am);
  CHECK(max_abs(ext.m - a) == 0.0);
  CHECK(ext.rows.factor_count() == 2);
}

TEST_CASE("tensor product matches the index-formula oracle") {
  CounterRng rng(11);
  Matrix a = oracles::random_matrix(2, 2, rng);
  Matrix b = oracles::random_matrix(3, 3, rng);
  ComplexMatrix am{Layout::single("A", 2), Layout::single("A", 2), a};
  ComplexMatrix bm{Layout::single("B", 3), Layout::single("B", 3), b};
  CHECK(max_abs(tensor_product(am, bm).m - oracles::kron(a, b)) < 1e-15);
}

TEST_CASE("tensor product rejects label collisions") {
  ComplexMatrix i2 = ComplexMatrix::identity(Layout::single("A", 2));
  CHECK_THROWS_AS(tensor_product(i2, i2), std::invalid_argument);
}

TEST_CASE("partial trace: product state and entangled marginal") {
  CounterRng rng(3);
  Matrix a = oracles::random_hermitian(2, rng);
  Matrix b = oracles::random_hermitian(3, rng);
  HermitianOperator ha(Layout::single("A", 2), a);
  HermitianOperator hb(Layout::single("B", 3), b);
  HermitianOperator ab = tensor_product(ha, hb);

  HermitianOperator ta = partial_trace(ab, {"B"});
  CHECK(max_abs(ta.matrix() - b.trace() * a) < 1e-12 * max_abs(a));

  // vec(I_d) vec(I_d)* has identity marginals.
  const Index d = 3;
  ComplexMatrix ident{Layout::single("L", d), Layout::single("R", d),
                      Matrix::Identity(d, d)};
  ComplexMatrix v = vectorize(ident, {"R"});
  HermitianOperator vv =
      HermitianOperator::from_symmetrized(v.rows, v.m * v.m.adjoint());
  HermitianOperator marg = partial_trace(vv, {"L"});
  CHECK(max_abs(marg.matrix() - Matrix::Identity(d, d)) < 1e-14);
}

TEST_CASE("partial trace matches the index-sum oracle") {
  CounterRng rng(5);
  Matrix m = oracles::random_hermitian(4, rng);
  HermitianOperator h(Layout({{"A", 2}, {"B", 2}}), m);
  CHECK(max_abs(partial_trace(h, {"B"}).matrix() -
                oracles::ptrace_second(m, 2, 2)) < 1e-14);
  CHECK(max_abs(partial_trace(h, {"A"}).matrix() -
                oracles::ptrace_first(m, 2, 2)) < 1e-14);
  // Trace preserved.
  CHECK(partial_trace(h, {"A"}).matrix().trace().real() ==
        doctest::Approx(m.trace().real()).epsilon(1e-14));
  CHECK_THROWS_AS(partial_trace(h, {"Z"}), std::invalid_argument);
}

TEST_CASE("partial trace of tensor product is a scaled factor (property)") {
  CounterRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Index da = 1 + static_cast<Index>(rng.below(3));
    const Index db = 1 + static_cast<Index>(rng.below(3));
    Matrix a = oracles::random_hermitian(da, rng);
    Matrix b = oracles::random_hermitian(db, rng);
    HermitianOperator ha(Layout::single("A", da), a);
    HermitianOperator hb(Layout::single("B", db), b);
    HermitianOperator ab = tensor_product(ha, hb);
    const double scale = std::max(1.0, max_abs(a) * std::abs(b.trace()));
    CHECK(max_abs(partial_trace(ab, {"B"}).matrix() - b.trace() * a) <=
          1e-12 * scale);
  }
}

TEST_CASE("permute_factors: vectors, identity, reversal oracle") {
  CounterRng rng(23);
  // Product vector (x (x) y) -> (y, x).
  CVector x(2), y(3);
  for (Index i = 0; i < 2; ++i) x(i) = rng.cgaussian();
  for (Index i = 0; i < 3; ++i) y(i) = rng.cgaussian();
  ComplexMatrix xy = ComplexMatrix::column(Layout({{"x", 2}, {"y", 3}}),
                                           oracles::kron(x, y).col(0));
  ComplexMatrix yx = permute_rows(xy, {"y", "x"});
  CHECK(max_abs(yx.m - oracles::kron(y, x).col(0)) < 1e-15);

  // Identity permutation is a no-op.
  Matrix m = oracles::random_hermitian(6, rng);
  HermitianOperator h(Layout({{"A", 2}, {"B", 3}}), m);
  CHECK(max_abs(permute_factors(h, {"A", "B"}).matrix() - m) == 0.0);

  // Reversal against the index-relabel oracle.
  HermitianOperator r = permute_factors(h, {"B", "A"});
  CHECK(max_abs(r.matrix() - oracles::swap_factors(m, 2, 3)) < 1e-15);
}

TEST_CASE("permute_factors is a group action") {
  CounterRng rng(29);
  Matrix m = oracles::random_hermitian(8, rng);
  HermitianOperator h(Layout({{"A", 2}, {"B", 2}, {"C", 2}}), m);
  auto p1 = permute_factors(permute_factors(h, {"B", "C", "A"}),
                            {"C", "A", "B"});
  // Composition: first B,C,A then relabel-order C,A,B of that equals the
  // direct permutation to C,A,B applied twice... compare against the direct
  // composite order.
  auto p2 = permute_factors(h, {"C", "A", "B"});
  // Going B,C,A and then C,A,B lands on C,A,B overall order only if composed
  // correctly; verify via round-trips instead: undo and compare.
  auto undo = permute_factors(p1, {"A", "B", "C"});
  CHECK(max_abs(undo.matrix() - m) < 1e-14);
  auto undo2 = permute_factors(p2, {"A", "B", "C"});
  CHECK(max_abs(undo2.matrix() - m) < 1e-14);
}

TEST_CASE("reversal isometry") {
  // Single factor: identity.
  ComplexMatrix w1 = reversal_isometry(Layout::single("A", 3));
  CHECK(max_abs(w1.m - Matrix::Identity(3, 3)) == 0.0);

  Layout l({{"A", 2}, {"B", 3}, {"C", 2}});
  ComplexMatrix w = reversal_isometry(l);
  CHECK(max_abs((w.m.adjoint() * w.m) - Matrix::Identity(12, 12)) == 0.0);

  // <W u u* W*, W X W*> = <u u*, X>.
  CounterRng rng(31);
  CVector u(12);
  for (Index i = 0; i < 12; ++i) u(i) = rng.cgaussian();
  Matrix x = oracles::random_hermitian(12, rng);
  const Complex lhs = (u.adjoint() * x * u)(0);
  const CVector wu = w.m * u;
  const Matrix wx = w.m * x * w.m.adjoint();
  const Complex rhs = (wu.adjoint() * wx * wu)(0);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));

  // Applying the reversal twice is the identity exactly.
  ComplexMatrix wrev = reversal_isometry(l.reversed());
  CHECK(max_abs(wrev.m * w.m - Matrix::Identity(12, 12)) == 0.0);
}

TEST_CASE("vec convention") {
  CHECK(vec(Matrix::Identity(2, 2)) == CVector{{1.0, 0.0, 0.0, 1.0}});
  Matrix e01 = Matrix::Zero(2, 2);
  e01(0, 1) = 1.0;
  CVector v = vec(e01);
  CHECK(v(1) == Complex(1.0, 0.0));
  CHECK(v(0) == Complex(0.0, 0.0));

  // vec(ABC) = (A (x) C^T) vec(B).
  CounterRng rng(37);
  Matrix a = oracles::random_matrix(2, 2, rng);
  Matrix b = oracles::random_matrix(2, 2, rng);
  Matrix c = oracles::random_matrix(2, 2, rng);
  CHECK(max_abs((oracles::kron(a, c.transpose()) * vec(b)) - vec(a * b * c)) <
        1e-13);
}

TEST_CASE("matricize and vectorize round-trip") {
  CounterRng rng(41);
  Matrix m = oracles::random_matrix(6, 2, rng);
  ComplexMatrix cm{Layout({{"A", 2}, {"B", 3}}), Layout::single("C", 2), m};
  ComplexMatrix v = vectorize(cm);  // (A, B, C')
  ComplexMatrix back = matricize(v, {"A", "B"}, {"C'"});
  CHECK(max_abs(back.m - m) == 0.0);
  ComplexMatrix regrouped = matricize(v, {"B"}, {"A", "C'"});
  CHECK(regrouped.m.rows() == 3);
  CHECK(regrouped.m.cols() == 4);
  // Entry bookkeeping: v[(a,b,c)] = regrouped(b, (a,c)).
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 3; ++b)
      for (Index c = 0; c < 2; ++c)
        CHECK(regrouped.m(b, a * 2 + c) == v.m(a * 6 + b * 2 + c, 0));
}

TEST_CASE("embed places an operator with identity padding") {
  CounterRng rng(43);
  Matrix a = oracles::random_hermitian(2, rng);
  HermitianOperator ha(Layout::single("B", 2), a);
  Layout target({{"A", 3}, {"B", 2}});
  HermitianOperator wide = embed(ha, target);
  CHECK(max_abs(wide.matrix() - oracles::kron(Matrix::Identity(3, 3), a)) <
        1e-15);
}

TEST_CASE("apply_left contracts a factor group") {
  CounterRng rng(47);
  Matrix u = oracles::random_matrix(2, 2, rng);
  ComplexMatrix um{Layout::single("O", 2), Layout::single("A", 2), u};
  CVector s(6);
  for (Index i = 0; i < 6; ++i) s(i) = rng.cgaussian();
  ComplexMatrix sv = ComplexMatrix::column(Layout({{"R", 3}, {"A", 2}}), s);
  ComplexMatrix out = apply_left(um, sv);
  // Oracle: (I_3 (x) u) after permuting A first.
  Matrix big = oracles::kron(u, Matrix::Identity(3, 3));
  ComplexMatrix perm = permute_rows(sv, {"A", "R"});
  CHECK(max_abs(out.m - big * perm.m) < 1e-14);
  CHECK(out.rows.factors()[0].label == "O");
}
