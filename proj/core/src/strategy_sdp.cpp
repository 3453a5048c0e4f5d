#include "combforge/strategy_sdp.hpp"

#include <stdexcept>

#include "combforge/conventions.hpp"
#include "combforge/tensor_ops.hpp"
#include "sdp_detail.hpp"

namespace combforge {

namespace {

Matrix aligned_objective(const HermitianOperator& h,
                         const RoundStructure& rounds) {
  const Layout target = rounds.strategy_layout();
  if (h.layout() == target) return h.matrix();
  return permute_factors(h, target.labels()).matrix();
}

}  // namespace

StrategySdp build_strategy_primal(const HermitianOperator& h,
                                  const RoundStructure& rounds) {
  const std::size_t n = rounds.n();
  StrategySdp out;
  SdpProblem& prob = out.problem;

  std::vector<std::size_t> block_of(n);
  for (std::size_t k = 1; k <= n; ++k) {
    block_of[k - 1] =
        prob.add_block("X" + std::to_string(k), rounds.space(k).total_dim());
  }
  prob.set_objective(block_of[n - 1], aligned_objective(h, rounds));

  // Family 1: Tr_{Y_1}(X_1) = I_{X_1}, expanded on the X_1 space.
  {
    const auto& r1 = rounds.round(0);
    const Layout space = Layout::single(r1.x_label, r1.x_dim);
    out.family_offset.push_back(prob.constraints().size());
    out.family_space.push_back(space);
    const auto info = detail::embed_info(space, rounds.space(1));
    for (const auto& e : hermitian_basis(space.total_dim())) {
      double rhs = 0.0;
      for (const auto& entry : e) {
        if (entry.r == entry.c) rhs += entry.v.real();
      }
      SdpConstraint c;
      c.terms.push_back({block_of[0], detail::sparse_embed(e, info)});
      c.rhs = rhs;
      prob.add_constraint(std::move(c));
    }
  }

  // Family k: Tr_{Y_k}(X_k) - X_{k-1} (x) I_{X_k} = 0 on
  // (Y_1..Y_{k-1}, X_1..X_k).
  for (std::size_t k = 2; k <= n; ++k) {
    const auto& rk = rounds.round(k - 1);
    // (Y_1..Y_{k-1}, X_1..X_{k-1}, X_k).
    const Layout space =
        rounds.space(k - 1).concat(Layout::single(rk.x_label, rk.x_dim));
    out.family_offset.push_back(prob.constraints().size());
    out.family_space.push_back(space);

    const auto up = detail::embed_info(space, rounds.space(k));
    const auto down = detail::trace_info(space, {rk.x_label});
    for (const auto& e : hermitian_basis(space.total_dim())) {
      SdpConstraint c;
      c.terms.push_back({block_of[k - 1], detail::sparse_embed(e, up)});
      SparseHermitian lower = detail::sparse_trace(e, down);
      if (!lower.empty()) {
        c.terms.push_back(
            {block_of[k - 2], detail::sparse_scale(std::move(lower), -1.0)});
      }
      c.rhs = 0.0;
      prob.add_constraint(std::move(c));
    }
  }
  return out;
}

SdpProblem build_strategy_dual(const HermitianOperator& h,
                               const RoundStructure& rounds) {
  const std::size_t n = rounds.n();
  SdpProblem prob;
  const Matrix hm = aligned_objective(h, rounds);

  // Homes of the dual variables Y_k and of the slacks.
  std::vector<Layout> g(n + 1), c_space(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    Layout gk = rounds.space(k - 1).concat(
        Layout::single(rounds.round(k - 1).x_label, rounds.round(k - 1).x_dim));
    g[k] = gk;             // (Y_1..Y_{k-1}, X_1..X_k)
    c_space[k] = rounds.space(k);  // (Y_1..Y_k, X_1..X_k)
  }

  std::vector<std::size_t> yp(n + 1), yn(n + 1), sl(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    yp[k] = prob.add_block("Yp" + std::to_string(k), g[k].total_dim());
    yn[k] = prob.add_block("Yn" + std::to_string(k), g[k].total_dim());
    sl[k] = prob.add_block("S" + std::to_string(k), c_space[k].total_dim());
  }

  // maximize -Tr(Yp_1) + Tr(Yn_1); the dual optimum is the negation.
  {
    const Index d = g[1].total_dim();
    prob.set_objective(yp[1], -Matrix::Identity(d, d));
    prob.set_objective(yn[1], Matrix::Identity(d, d));
  }

  for (std::size_t k = n; k >= 1; --k) {
    const Layout& space = c_space[k];
    const auto into_y = detail::trace_info(space, {rounds.round(k - 1).y_label});
    // <E, Tr_{X_{k+1}}(Y_{k+1})> = <E (x) I_{X_{k+1}}, Y_{k+1}> with E living
    // on g[k+1] minus X_{k+1}, which equals this family's space.
    const auto up_embed =
        (k < n) ? detail::embed_info(space, g[k + 1]) : detail::EmbedInfo{};

    for (const auto& e : hermitian_basis(space.total_dim())) {
      SdpConstraint c;
      // (Yp_k - Yn_k) (x) I_{Y_k}: coefficient Tr_{Y_k}(E) on the Y blocks.
      SparseHermitian ye = detail::sparse_trace(e, into_y);
      if (!ye.empty()) {
        c.terms.push_back({yp[k], ye});
        c.terms.push_back({yn[k], detail::sparse_scale(ye, -1.0)});
      }
      if (k < n) {
        SparseHermitian emb = detail::sparse_embed(e, up_embed);
        c.terms.push_back({yp[k + 1], detail::sparse_scale(emb, -1.0)});
        c.terms.push_back({yn[k + 1], emb});
      }
      // Slack.
      c.terms.push_back({sl[k], detail::sparse_scale(e, -1.0)});
      // Right-hand side: <E, H> for the top family, else 0.
      c.rhs = (k == n) ? detail::sparse_pair_real(e, hm) : 0.0;
      prob.add_constraint(std::move(c));
    }
    if (k == 1) break;
  }
  return prob;
}

StrategyOptimum optimal_strategy_value(const HermitianOperator& h,
                                       const RoundStructure& rounds,
                                       const SolveOptions& opts,
                                       double feasibility_tol) {
  StrategySdp sdp = build_strategy_primal(h, rounds);
  SdpSolution sol = solve(sdp.problem, opts);
  if (sol.status != SdpStatus::optimal) {
    throw std::runtime_error("optimal_strategy_value: solver status " +
                             to_string(sol.status) + " (gap " +
                             std::to_string(sol.gap) + ")");
  }

  HermitianOperator xn = HermitianOperator::from_symmetrized(
      rounds.strategy_layout(), sol.primal_blocks.back());
  StrategyOptimum out{sol.primal_value,
                      validate_strategy(xn, rounds, feasibility_tol),
                      {},
                      sol};

  // Reassemble the Figure's dual variables from the equality multipliers.
  const std::size_t n = rounds.n();
  for (std::size_t k = 0; k < n; ++k) {
    const Layout& space = sdp.family_space[k];
    const Index d = space.total_dim();
    Matrix yk = Matrix::Zero(d, d);
    const auto basis = hermitian_basis(d);
    const std::size_t off = sdp.family_offset[k];
    for (std::size_t a = 0; a < basis.size(); ++a) {
      const double lambda =
          sol.dual_multipliers(static_cast<Index>(off + a));
      if (lambda == 0.0) continue;
      yk += lambda * detail::sparse_to_dense(basis[a], d);
    }
    out.certificate.push_back(
        HermitianOperator::from_symmetrized(space, std::move(yk)));
  }
  return out;
}

}  // namespace combforge
