#include <combforge/channel.hpp>
#include <doctest.h>

#include "oracles.hpp"

using namespace combforge;

namespace {

Channel depolarizing_qubit() {
  // Kraus {|a><b| / sqrt(2)}: rho -> Tr(rho) I / 2.
  KrausSet k{Layout::single("X", 2), Layout::single("Y", 2), {}};
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      Matrix e = Matrix::Zero(2, 2);
      e(a, b) = 1.0 / std::sqrt(2.0);
      k.operators.push_back(e);
    }
  }
  return choi_from_kraus(k);
}

HermitianOperator random_state(const Layout& l, CounterRng& rng) {
  return random_density(l, l.total_dim(), rng);
}

}  // namespace

TEST_CASE("choi of the identity channel") {
  Channel id = identity_channel(Layout::single("X", 3), {"Y"});
  CHECK(id.kind() == ChannelKind::channel);
  ComplexMatrix ident{Layout::single("Y", 3), Layout::single("X", 3),
                      Matrix::Identity(3, 3)};
  ComplexMatrix v = vectorize(ident, {"X"});
  CHECK(max_abs(id.choi().matrix() - (v.m * v.m.adjoint())) < 1e-14);
}

TEST_CASE("choi of the depolarizing qubit channel") {
  Channel dep = depolarizing_qubit();
  // Direct sum J = sum_{a,b} Delta(|a><b|) (x) |a><b| computed by hand:
  // Delta(|a><b|) = delta_ab I/2.
  Matrix j = Matrix::Zero(4, 4);
  for (Index a = 0; a < 2; ++a) {
    Matrix e = Matrix::Zero(2, 2);
    e(a, a) = 1.0;
    j += oracles::kron(0.5 * Matrix::Identity(2, 2), e);
  }
  CHECK(max_abs(dep.choi().matrix() - j) < 1e-14);
}

TEST_CASE("unitary channel has rank-one Choi with trace d") {
  CounterRng rng(101);
  Matrix u = random_unitary(3, rng);
  Channel c = unitary_channel(
      {Layout::single("Y", 3), Layout::single("X", 3), u});
  EigResult e = eig_hermitian(c.choi());
  CHECK(e.values(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(e.values(1)) < 1e-12);
}

TEST_CASE("apply_channel basics and the Kraus-sum oracle") {
  CounterRng rng(103);
  Layout lx = Layout::single("X", 2);

  Channel id = identity_channel(lx, {"Y"});
  HermitianOperator rho = random_state(lx, rng);
  HermitianOperator out = apply_channel(id, rho);
  CHECK(max_abs(out.matrix() - rho.matrix()) < 1e-13);

  Channel dep = depolarizing_qubit();
  HermitianOperator mixed = apply_channel(dep, rho);
  CHECK(max_abs(mixed.matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-13);

  Channel c = random_channel(lx, Layout::single("Y", 3), 2, rng);
  KrausSet k = kraus_from_choi(c);
  Matrix expect = Matrix::Zero(3, 3);
  for (const auto& op : k.operators) {
    expect += op * rho.matrix() * op.adjoint();
  }
  CHECK(max_abs(apply_channel(c, rho).matrix() - expect) < 1e-12);
}

TEST_CASE("kraus <-> choi round trip (property)") {
  CounterRng rng(107);
  for (int t = 0; t < 10; ++t) {
    Layout lin = Layout::single("X", 1 + static_cast<Index>(rng.below(3)));
    Layout lout = Layout::single("Y", 1 + static_cast<Index>(rng.below(3)));
    const Index env = std::max<Index>(
        2, (lin.total_dim() + lout.total_dim() - 1) / lout.total_dim());
    Channel c = random_channel(lin, lout, env, rng);
    Channel back = choi_from_kraus(kraus_from_choi(c));
    CHECK(frobenius(back.choi().matrix() - c.choi().matrix()) <
          1e-10 * std::max(1.0, frobenius(c.choi().matrix())));
  }
}

TEST_CASE("apply_channel preserves trace and positivity (property)") {
  CounterRng rng(109);
  for (int t = 0; t < 10; ++t) {
    Layout lx = Layout::single("X", 2 + static_cast<Index>(rng.below(2)));
    Layout ly = Layout::single("Y", 2 + static_cast<Index>(rng.below(2)));
    Channel c = random_channel(lx, ly, 2, rng);
    HermitianOperator rho = random_state(lx, rng);
    HermitianOperator out = apply_channel(c, rho);
    CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    EigResult e = eig_hermitian(out);
    CHECK(e.values(e.values.size() - 1) > -1e-10);
  }
}

TEST_CASE("stinespring dilation") {
  CounterRng rng(113);
  // Unitary channel: environment dimension 1 and V = U.
  Matrix u = random_unitary(2, rng);
  Channel uc = unitary_channel(
      {Layout::single("Y", 2), Layout::single("X", 2), u});
  ComplexMatrix v = stinespring_from_choi(uc);
  CHECK(v.rows.total_dim() == 2);
  CHECK(max_abs(v.m.adjoint() * v.m - Matrix::Identity(2, 2)) < 1e-12);

  // Depolarizing qubit: Choi rank 4.
  ComplexMatrix vd = stinespring_from_choi(depolarizing_qubit());
  CHECK(vd.rows.dim_of("#env") == 4);

  // Round trip: Tr_env(V rho V*) agrees with apply_channel.
  Channel c = random_channel(Layout::single("X", 2), Layout::single("Y", 2),
                             3, rng);
  ComplexMatrix vc = stinespring_from_choi(c);
  HermitianOperator rho = random_state(Layout::single("X", 2), rng);
  Matrix big = vc.m * rho.matrix() * vc.m.adjoint();
  HermitianOperator lifted =
      HermitianOperator::from_symmetrized(vc.rows, big);
  HermitianOperator reduced = partial_trace(lifted, {"#env"});
  CHECK(max_abs(reduced.matrix() - apply_channel(c, rho).matrix()) < 1e-10);
}

TEST_CASE("transpose_channel") {
  CounterRng rng(127);
  // Transpose of a unitary channel is conjugation by U^T, which is unital.
  Matrix u = random_unitary(2, rng);
  Channel uc = unitary_channel(
      {Layout::single("Y", 2), Layout::single("X", 2), u});
  Channel t = transpose_channel(uc);
  CHECK(t.kind() == ChannelKind::channel);  // doubly stochastic stays TP
  KrausSet k = kraus_from_choi(t);
  REQUIRE(k.operators.size() == 1);
  // Kraus unique up to phase.
  Matrix ratio = k.operators[0] * u.transpose().inverse();
  CHECK(std::abs(std::abs(ratio(0, 0)) - 1.0) < 1e-10);
  CHECK(max_abs(ratio - ratio(0, 0) * Matrix::Identity(2, 2)) < 1e-10);

  // Double transpose is the identity on Choi matrices.
  Channel c = random_channel(Layout::single("X", 2), Layout::single("Y", 3),
                             2, rng);
  Channel tt = transpose_channel(transpose_channel(c));
  CHECK(max_abs(tt.choi().matrix() - c.choi().matrix()) < 1e-12);

  // Representation independence: Phi^T(rho) = (Phi^*(rho^T))^T.
  Channel ct = transpose_channel(c);
  CHECK(ct.kind() == ChannelKind::unital_cp);
  HermitianOperator rho = random_state(Layout::single("Y", 3), rng);
  HermitianOperator lhs = apply_channel(ct, rho);
  // Adjoint from Kraus: sum K^dagger rho K.
  KrausSet kc = kraus_from_choi(c);
  Matrix adj = Matrix::Zero(2, 2);
  for (const auto& op : kc.operators) {
    adj += op.adjoint() * rho.matrix().transpose() * op;
  }
  CHECK(max_abs(lhs.matrix() - adj.transpose()) < 1e-11);
}

TEST_CASE("compose agrees with sequential application (property)") {
  CounterRng rng(131);
  Layout lx = Layout::single("X", 2);
  Layout ly = Layout::single("Y", 3);
  Layout lz = Layout::single("Z", 2);
  for (int t = 0; t < 5; ++t) {
    Channel f = random_channel(lx, ly, 2, rng);
    Channel g = random_channel(ly, lz, 2, rng);
    Channel gf = compose(g, f);
    CHECK(gf.kind() == ChannelKind::channel);
    HermitianOperator rho = random_state(lx, rng);
    HermitianOperator a = apply_channel(gf, rho);
    HermitianOperator b = apply_channel(g, apply_channel(f, rho));
    CHECK(max_abs(a.matrix() - b.matrix()) < 1e-10);
  }
}

TEST_CASE("tensor_with_identity pads bystanders") {
  CounterRng rng(137);
  Channel c = random_channel(Layout::single("X", 2), Layout::single("Y", 2),
                             2, rng);
  Channel wide = tensor_with_identity(c, Layout::single("E", 3), {"F"});
  HermitianOperator rho =
      random_state(Layout({{"X", 2}, {"E", 3}}), rng);
  HermitianOperator via_wide = apply_channel(wide, rho);
  HermitianOperator via_partial = apply_to(c, rho);
  // Same factor meaning per index: (Y, F) vs (Y, E-bystander).
  CHECK(max_abs(via_wide.matrix() - via_partial.matrix()) < 1e-11);
}
