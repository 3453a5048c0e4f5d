#include "combforge/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "combforge/conventions.hpp"
#include "combforge/spectral.hpp"
#include "sdp_detail.hpp"

namespace combforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log2_safe(double x) { return std::log2(x); }

// Support-respecting inverse square root of a PSD operator.
Matrix pinv_sqrt(const HermitianOperator& q, double rank_tol) {
  EigResult eig = eig_hermitian(q);
  const double top = eig.values.size() ? std::abs(eig.values(0)) : 0.0;
  RVector inv = RVector::Zero(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > rank_tol * top) {
      inv(i) = 1.0 / std::sqrt(eig.values(i));
    }
  }
  return eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

double d_max(const HermitianOperator& p, const HermitianOperator& q) {
  if (p.layout() != q.layout()) {
    throw std::invalid_argument("d_max: layout mismatch");
  }
  EigResult eq = eig_hermitian(q);
  const double top = eq.values.size() ? std::abs(eq.values(0)) : 0.0;
  const double cutoff = kPinvRankTolFactor * top;
  // Support check: P restricted to ker(Q) must vanish.
  double leak = 0.0;
  for (Index i = 0; i < eq.values.size(); ++i) {
    if (eq.values(i) <= cutoff) {
      const CVector v = eq.vectors.col(i);
      leak = std::max(leak, std::abs((v.adjoint() * p.matrix() * v)(0).real()));
    }
  }
  const double pscale = std::max(max_abs(p.matrix()), 1e-300);
  if (leak > 1e-9 * pscale) return kInf;

  Matrix qins = pinv_sqrt(q, kPinvRankTolFactor);
  HermitianOperator inner = HermitianOperator::from_symmetrized(
      p.layout(), qins * p.matrix() * qins);
  Eigen::SelfAdjointEigenSolver<Matrix> es(inner.matrix(),
                                           Eigen::EigenvaluesOnly);
  const double lambda = std::max(es.eigenvalues().maxCoeff(), 0.0);
  if (lambda == 0.0) return -kInf;
  return log2_safe(lambda);
}

double d_min(const HermitianOperator& p, const HermitianOperator& q) {
  const double f = fidelity(p, q);
  if (f <= 0.0) return kInf;
  return -2.0 * log2_safe(f);
}

HminResult h_min(const HermitianOperator& rho,
                 const std::vector<std::string>& x_labels,
                 const SolveOptions& opts) {
  const double tr = rho.matrix().trace().real();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw std::invalid_argument("h_min: state trace " + std::to_string(tr));
  }
  const Layout& full = rho.layout();
  const Layout cond = full.without(x_labels);

  SdpProblem prob;
  const std::size_t xb = prob.add_block("K", full.total_dim());
  prob.set_objective(xb, rho.matrix());
  const auto info = detail::embed_info(cond, full);
  const auto basis = hermitian_basis(cond.total_dim());
  for (const auto& e : basis) {
    double rhs = 0.0;
    for (const auto& entry : e) {
      if (entry.r == entry.c) rhs += entry.v.real();
    }
    prob.add_constraint({{{xb, detail::sparse_embed(e, info)}}, rhs});
  }

  SdpSolution sol = solve(prob, opts);
  if (sol.status != SdpStatus::optimal) {
    throw std::runtime_error("h_min: solver status " + to_string(sol.status));
  }

  HminResult out;
  out.sdp_optimum = sol.primal_value;
  out.bits = -log2_safe(sol.primal_value);
  Matrix y = Matrix::Zero(cond.total_dim(), cond.total_dim());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const double lambda = sol.dual_multipliers(static_cast<Index>(a));
    if (lambda != 0.0) {
      y += lambda * detail::sparse_to_dense(basis[a], cond.total_dim());
    }
  }
  out.dual_y = HermitianOperator::from_symmetrized(cond, std::move(y));
  out.solution = std::move(sol);
  return out;
}

HmaxResult h_max(const HermitianOperator& rho,
                 const std::vector<std::string>& x_labels,
                 const SolveOptions& opts) {
  const double tr = rho.matrix().trace().real();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw std::invalid_argument("h_max: state trace " + std::to_string(tr));
  }
  const Layout& full = rho.layout();
  const Layout zpart = full.without(x_labels);

  // Purify: u = sum_i sqrt(lambda_i) psi_i (x) e_i on (full, #pur).
  EigResult eig = eig_hermitian(rho);
  const double top = eig.values.size() ? std::abs(eig.values(0)) : 0.0;
  Index rank = 0;
  while (rank < eig.values.size() && eig.values(rank) > kPsdTolFactor * top) {
    ++rank;
  }
  rank = std::max<Index>(rank, 1);
  const Layout pur = Layout::single("#pur", rank);
  const Layout big = full.concat(pur);
  CVector u = CVector::Zero(big.total_dim());
  for (Index i = 0; i < rank; ++i) {
    const double w = std::sqrt(std::max(eig.values(i), 0.0));
    for (Index s = 0; s < full.total_dim(); ++s) {
      u(s * rank + i) = w * eig.vectors(s, i);
    }
  }

  SdpProblem prob;
  const std::size_t xb = prob.add_block("K", big.total_dim());
  const std::size_t sb = prob.add_block("sigma", zpart.total_dim());
  prob.set_objective(xb, (u * u.adjoint()).eval());

  // Tr_pur(K) = I_X (x) sigma, expanded on the full layout.
  const auto up = detail::embed_info(full, big);
  const auto down = detail::trace_info(full, x_labels);
  const auto basis = hermitian_basis(full.total_dim());
  for (const auto& e : basis) {
    SdpConstraint c;
    c.terms.push_back({xb, detail::sparse_embed(e, up)});
    SparseHermitian se = detail::sparse_trace(e, down);
    if (!se.empty()) {
      c.terms.push_back({sb, detail::sparse_scale(std::move(se), -1.0)});
    }
    c.rhs = 0.0;
    prob.add_constraint(std::move(c));
  }
  {
    SparseHermitian diag;
    for (Index i = 0; i < zpart.total_dim(); ++i) {
      diag.push_back({i, i, 1.0});
    }
    prob.add_constraint({{{sb, std::move(diag)}}, 1.0});
  }

  SdpSolution sol = solve(prob, opts);
  if (sol.status != SdpStatus::optimal) {
    throw std::runtime_error("h_max: solver status " + to_string(sol.status));
  }

  HmaxResult out;
  out.sdp_optimum = sol.primal_value;
  out.bits = log2_safe(sol.primal_value);
  out.sigma =
      HermitianOperator::from_symmetrized(zpart, sol.primal_blocks[sb]);
  // Uhlmann crosscheck at the extracted sigma.
  HermitianOperator iz = embed(out.sigma, full);
  const double f = fidelity(rho, iz);
  out.fidelity_crosscheck = f * f;
  out.solution = std::move(sol);
  return out;
}

EntropyReport verify_min_max_identity(const ComplexMatrix& u,
                                      const std::vector<std::string>& x_labels,
                                      const std::vector<std::string>& y_labels,
                                      const std::vector<std::string>& z_labels,
                                      const SolveOptions& opts) {
  if (!u.is_column()) {
    throw std::invalid_argument("verify_min_max_identity: u not a column");
  }
  HermitianOperator state = HermitianOperator::from_symmetrized(
      u.rows, u.m * u.m.adjoint());
  HermitianOperator rho_xy = partial_trace(state, z_labels);
  HermitianOperator rho_xz = partial_trace(state, y_labels);

  EntropyReport report;
  report.min_side = h_min(rho_xy, x_labels, opts);
  report.max_side = h_max(rho_xz, x_labels, opts);
  report.h_min_bits = report.min_side.bits;
  report.h_max_bits = report.max_side.bits;
  report.identity_residual = std::abs(report.h_min_bits + report.h_max_bits);
  return report;
}

ChannelFidelityResult max_channel_fidelity(
    const HermitianOperator& a, const std::vector<std::string>& in_labels,
    const std::vector<std::string>& out_labels, const SolveOptions& opts) {
  const Layout& space = a.layout();
  const Index d = space.total_dim();

  std::vector<std::string> bystanders;
  for (const auto& f : space.factors()) {
    const bool used =
        std::find(in_labels.begin(), in_labels.end(), f.label) !=
            in_labels.end() ||
        std::find(out_labels.begin(), out_labels.end(), f.label) !=
            out_labels.end();
    if (!used) bystanders.push_back(f.label);
  }
  const Layout jspace = space.without(bystanders);  // out+in factors, s-order
  const Layout inspace = jspace.without(out_labels);

  SdpProblem prob;
  const std::size_t tb = prob.add_block("T", 2 * d);
  const std::size_t jb = prob.add_block("J", jspace.total_dim());
  {
    Matrix c = Matrix::Zero(2 * d, 2 * d);
    c.topRightCorner(d, d) = 0.5 * Matrix::Identity(d, d);
    c.bottomLeftCorner(d, d) = 0.5 * Matrix::Identity(d, d);
    prob.set_objective(tb, std::move(c));
  }

  const auto basis = hermitian_basis(d);
  // Upper-left block pinned to a.
  for (const auto& e : basis) {
    prob.add_constraint(
        {{{tb, e}}, detail::sparse_pair_real(e, a.matrix())});
  }
  // Lower-right block equals J embedded with identity bystanders.
  const auto onto_j = detail::trace_info(space, bystanders);
  for (const auto& e : basis) {
    SdpConstraint c;
    c.terms.push_back({tb, detail::sparse_shift(e, d, d)});
    SparseHermitian je = detail::sparse_trace(e, onto_j);
    if (!je.empty()) {
      c.terms.push_back({jb, detail::sparse_scale(std::move(je), -1.0)});
    }
    c.rhs = 0.0;
    prob.add_constraint(std::move(c));
  }
  // Channel: Tr_out(J) = I_in.
  const auto tp_embed = detail::embed_info(inspace, jspace);
  for (const auto& e : hermitian_basis(inspace.total_dim())) {
    double rhs = 0.0;
    for (const auto& entry : e) {
      if (entry.r == entry.c) rhs += entry.v.real();
    }
    prob.add_constraint({{{jb, detail::sparse_embed(e, tp_embed)}}, rhs});
  }

  SdpSolution sol = solve(prob, opts);
  if (sol.status != SdpStatus::optimal) {
    throw std::runtime_error("max_channel_fidelity: solver status " +
                             to_string(sol.status));
  }
  return {sol.primal_value, std::move(sol)};
}

FourMessageResult four_message_values(const ComplexMatrix& u,
                                      const SolveOptions& opts) {
  if (!u.is_column() || u.rows.factor_count() != 4) {
    throw std::invalid_argument(
        "four_message_values: u must have factors (X, Y, Z, W)");
  }
  const auto& fs = u.rows.factors();
  const std::string x = fs[0].label, y = fs[1].label, z = fs[2].label,
                    w = fs[3].label;
  HermitianOperator state = HermitianOperator::from_symmetrized(
      u.rows, u.m * u.m.adjoint());

  FourMessageResult out;
  ChannelFidelityResult lhs =
      max_channel_fidelity(partial_trace(state, {w}), {y}, {x}, opts);
  ChannelFidelityResult rhs =
      max_channel_fidelity(partial_trace(state, {x}), {w}, {z}, opts);
  out.lhs = lhs.fidelity;
  out.rhs = rhs.fidelity;

  RoundStructure fwd({{y, fs[1].dim, x, fs[0].dim},
                      {z, fs[2].dim, w, fs[3].dim}});
  HermitianOperator h = permute_factors(state, fwd.strategy_layout().labels());
  StrategyOptimum f = optimal_strategy_value(h, fwd, opts);
  out.strategy_opt_forward = f.value;

  RoundStructure rev = fwd.reversed();
  HermitianOperator hrev =
      permute_factors(state, rev.strategy_layout().labels());
  StrategyOptimum b = optimal_strategy_value(hrev, rev, opts);
  out.strategy_opt_reversed = b.value;

  out.solutions = {lhs.solution, rhs.solution, f.solution, b.solution};
  return out;
}

QuantumCorrelationResult quantum_correlation(const HermitianOperator& rho,
                                             const RoundStructure& rounds,
                                             const SolveOptions& opts) {
  QuantumCorrelationResult out{0.0, 0.0,
                               optimal_strategy_value(rho, rounds, opts)};
  out.value = out.optimum.value;
  const double dy = static_cast<double>(rounds.output_dim());
  double sq = out.value / dy;
  if (sq > 1.0 + 1e-9) {
    throw std::runtime_error("quantum_correlation: squared fidelity " +
                             std::to_string(sq) + " above 1");
  }
  out.squared_fidelity = std::clamp(sq, 0.0, 1.0);
  return out;
}

double statement_equivalence_residual(const std::vector<Channel>& phis,
                                      const RoundStructure& rounds) {
  StrategyOperator x2 = strategy_from_channels(phis, rounds);

  // Statement 3: reversed-order transposed maps applied to half of
  // vec(I_{Y...}) vec(I_{Y...})*.
  const Layout ys = rounds.outputs();
  ComplexMatrix v = vectorize(ComplexMatrix::identity(ys));  // (Y..., Y'...)
  HermitianOperator state = HermitianOperator::from_symmetrized(
      v.rows, v.m * v.m.adjoint());

  for (std::size_t k = rounds.n(); k-- > 0;) {
    Channel psi = transpose_channel(phis[k]);
    // Feed the primed copy of Y_k; memory labels stay as they are.
    std::vector<std::string> in_labels;
    for (const auto& f : psi.input_layout().factors()) {
      in_labels.push_back(f.label == rounds.round(k).y_label ? f.label + "'"
                                                             : f.label);
    }
    psi = relabel_channel(psi, psi.input_layout().relabeled(in_labels),
                          psi.output_layout());
    state = apply_to(psi, state);
  }

  std::vector<std::string> leftovers;
  for (const auto& f : state.layout().factors()) {
    const bool is_y = ys.has(f.label);
    const bool is_x = rounds.inputs().has(f.label);
    if (!is_y && !is_x) {
      if (f.dim != 1) {
        throw std::invalid_argument(
            "statement_equivalence: leftover register '" + f.label + "'");
      }
      leftovers.push_back(f.label);
    }
  }
  if (!leftovers.empty()) state = partial_trace(state, leftovers);
  HermitianOperator x3 =
      permute_factors(state, rounds.strategy_layout().labels());

  const double scale = std::max(frobenius(x2.op.matrix()), 1e-300);
  return frobenius(x2.op.matrix() - x3.matrix()) / scale;
}

bool verify_statement_equivalence(const std::vector<Channel>& phis,
                                  const RoundStructure& rounds) {
  return statement_equivalence_residual(phis, rounds) <= 1e-8;
}

}  // namespace combforge
