#include "combforge/reversal.hpp"

#include <future>
#include <stdexcept>

#include "combforge/conventions.hpp"
#include "combforge/spectral.hpp"
#include "combforge/strategy_sdp.hpp"

namespace combforge {

namespace {

double pair_with(const ComplexMatrix& u, const HermitianOperator& x) {
  ComplexMatrix aligned = permute_rows(u, x.layout().labels());
  return (aligned.m.adjoint() * x.matrix() * aligned.m)(0, 0).real();
}

}  // namespace

ComplexMatrix build_A(const UnitaryRealization& r, const ComplexMatrix& u) {
  check_realization(r);
  const Layout target = r.rounds.strategy_layout();
  if (!u.is_column() || u.rows.total_dim() != target.total_dim()) {
    throw std::invalid_argument("build_A: u does not live on the strategy "
                                "space");
  }
  ComplexMatrix uc = permute_rows(u, target.labels());

  // Accumulator #acc runs over the memory chain, #hold keeps the Z_0 column
  // index open; contracting round by round realizes the sum
  // A = sum conj(u(b,a)) (<b_n| (x) I) U_n (I (x) |a_n>) ... .
  const Index z0 = r.memory_dims[0];
  ComplexMatrix acc = tensor_product(
      conjugate(uc),
      ComplexMatrix{Layout::single("#acc", z0), Layout::single("#hold", z0),
                    Matrix::Identity(z0, z0)});
  ComplexMatrix col = vectorize(acc, {"#hold"});

  for (std::size_t k = 0; k < r.rounds.n(); ++k) {
    const auto& rd = r.rounds.round(k);
    const ComplexMatrix& uk = r.unitaries[k];
    const std::string mem_in = uk.cols.factors()[0].label;
    const std::string mem_out = uk.rows.factors()[1].label;
    // Reshape U_k to (memory_out) x (y, memory_in, x) and relabel so the
    // contraction consumes the open factors of `col`.
    ComplexMatrix uv = vectorize(uk);  // (y, mem_out, mem_in', x')
    ComplexMatrix ut = matricize(
        uv, {mem_out}, {rd.y_label, mem_in + "'", rd.x_label + "'"});
    Layout cols_relabel = ut.cols.relabeled({rd.y_label, "#acc", rd.x_label});
    Layout rows_relabel = ut.rows.relabeled({"#acc"});
    ComplexMatrix step{rows_relabel, cols_relabel, std::move(ut.m)};
    col = apply_left(step, col);
  }

  ComplexMatrix a = matricize(col, {"#acc"}, {"#hold"});
  return {Layout::single("#acc", r.memory_dims[r.rounds.n()]),
          Layout::single("#hold", z0), std::move(a.m)};
}

ComplexMatrix choose_w(const ComplexMatrix& a, double target,
                       ReversalMode mode) {
  const Index zn = a.m.rows();
  Matrix c = a.m.conjugate() * a.m.transpose();
  HermitianOperator cop = HermitianOperator::from_symmetrized(
      Layout::single("#w", zn), std::move(c));
  EigResult eig = eig_hermitian(cop);

  CVector w;
  if (mode == ReversalMode::maximize) {
    w = eig.vectors.col(0);
  } else {
    const double hi = eig.values(0);
    const double lo = eig.values(zn - 1);
    const double slack = 1e-9 * std::max(1.0, std::abs(hi));
    if (target > hi + slack || target < lo - slack) {
      throw std::invalid_argument(
          "choose_w: target " + std::to_string(target) +
          " outside the spectrum [" + std::to_string(lo) + ", " +
          std::to_string(hi) + "]");
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) {
      w = eig.vectors.col(0);  // flat spectrum: every w hits the target
    } else {
      const double t = std::clamp((target - lo) / (hi - lo), 0.0, 1.0);
      w = std::sqrt(t) * eig.vectors.col(0) +
          std::sqrt(1.0 - t) * eig.vectors.col(zn - 1);
    }
  }
  w /= w.norm();
  return ComplexMatrix::column(a.rows, std::move(w));
}

ReversalResult reverse_strategy(const UnitaryRealization& r,
                                const ComplexMatrix& u, ReversalMode mode) {
  const std::size_t n = r.rounds.n();
  if (mode == ReversalMode::match &&
      r.rounds.output_dim() > r.rounds.input_dim()) {
    throw std::invalid_argument(
        "reverse_strategy: match mode needs dim(Y...) <= dim(X...)");
  }

  ComplexMatrix a = build_A(r, u);
  const CVector av = a.m * r.v.m.col(0);
  const double forward_from_a = av.squaredNorm();

  StrategyOperator forward = recompose_realization(r);
  ComplexMatrix uc = permute_rows(u, r.rounds.strategy_layout().labels());
  const double forward_value = pair_with(uc, forward.op);

  ComplexMatrix w = choose_w(a, forward_from_a, mode);
  UnitaryRealization reversed_real = transpose_realization(
      r, ComplexMatrix::column(Layout::single("#m'0", r.memory_dims[n]),
                               w.m.col(0)));
  StrategyOperator reversed = recompose_realization(reversed_real);

  // Both values by direct pairing; W u has the factor order reversed.
  ComplexMatrix wu = permute_rows(uc, reversed.op.layout().labels());
  const double reversed_value = pair_with(wu, reversed.op);

  return ReversalResult{std::move(reversed), std::move(w), forward_value,
                        reversed_value, mode};
}

CorollaryResult corollary_check(const ComplexMatrix& u,
                                const RoundStructure& rounds,
                                const SolveOptions& opts) {
  const Layout layout = rounds.strategy_layout();
  ComplexMatrix uc = permute_rows(u, layout.labels());
  HermitianOperator h = HermitianOperator::from_symmetrized(
      layout, uc.m * uc.m.adjoint());

  RoundStructure rev = rounds.reversed();
  HermitianOperator hrev = permute_factors(h, rev.strategy_layout().labels());

  auto fwd = std::async(std::launch::async, [&] {
    return optimal_strategy_value(h, rounds, opts);
  });
  auto bwd = std::async(std::launch::async, [&] {
    return optimal_strategy_value(hrev, rev, opts);
  });
  StrategyOptimum f = fwd.get();
  StrategyOptimum b = bwd.get();

  return CorollaryResult{f.value, b.value, std::move(f.solution),
                         std::move(b.solution)};
}

}  // namespace combforge
