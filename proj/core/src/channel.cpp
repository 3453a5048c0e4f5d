#include "combforge/channel.hpp"

#include <stdexcept>

#include "combforge/conventions.hpp"

namespace combforge {

namespace {

double min_eigenvalue(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool near_identity(const HermitianOperator& h, double tol) {
  return max_abs(h.matrix() -
                 Matrix::Identity(h.dim(), h.dim())) <= tol;
}

}  // namespace

Channel::Channel(HermitianOperator choi, Layout input_layout,
                 Layout output_layout, ChannelKind kind)
    : choi_(std::move(choi)),
      input_(std::move(input_layout)),
      output_(std::move(output_layout)),
      kind_(kind) {
  const Layout expected = output_.concat(input_);  // checks disjointness
  if (choi_.layout() != expected) {
    throw std::invalid_argument("Channel: choi layout " +
                                choi_.layout().to_string() +
                                " is not output-first " + expected.to_string());
  }
  const double top = max_abs(choi_.matrix());
  if (top > 0.0) {
    const double lambda_min = min_eigenvalue(choi_);
    if (lambda_min < -kPsdTolFactor * top) {
      throw std::invalid_argument("Channel: Choi matrix not PSD (min eig " +
                                  std::to_string(lambda_min) + ")");
    }
  }
  const double scale = std::max(1.0, top);
  if (kind_ == ChannelKind::channel) {
    HermitianOperator marg = partial_trace(choi_, output_.labels());
    if (!near_identity(marg, kChannelTol * scale)) {
      throw std::invalid_argument(
          "Channel: trace-preservation residual exceeds tolerance");
    }
  } else if (kind_ == ChannelKind::unital_cp) {
    HermitianOperator marg = partial_trace(choi_, input_.labels());
    if (!near_identity(marg, kChannelTol * scale)) {
      throw std::invalid_argument(
          "Channel: unitality residual exceeds tolerance");
    }
  }
}

Channel choi_from_kraus(const KrausSet& k) {
  if (k.operators.empty()) {
    throw std::invalid_argument("choi_from_kraus: empty Kraus set");
  }
  const Index din = k.input_layout.total_dim();
  const Index dout = k.output_layout.total_dim();
  Matrix j = Matrix::Zero(dout * din, dout * din);
  Matrix ktk = Matrix::Zero(din, din);
  Matrix kkt = Matrix::Zero(dout, dout);
  for (const auto& op : k.operators) {
    if (op.rows() != dout || op.cols() != din) {
      throw std::invalid_argument("choi_from_kraus: Kraus dim mismatch");
    }
    const CVector v = vec(op);
    j += v * v.adjoint();
    ktk += op.adjoint() * op;
    kkt += op * op.adjoint();
  }
  ChannelKind kind = ChannelKind::general_cp;
  if (max_abs(ktk - Matrix::Identity(din, din)) <= kChannelTol) {
    kind = ChannelKind::channel;
  } else if (max_abs(kkt - Matrix::Identity(dout, dout)) <= kChannelTol) {
    kind = ChannelKind::unital_cp;
  }
  const Layout layout = k.output_layout.concat(k.input_layout);
  return Channel(HermitianOperator::from_symmetrized(layout, std::move(j)),
                 k.input_layout, k.output_layout, kind);
}

KrausSet kraus_from_choi(const Channel& c, double rank_tol) {
  EigResult eig = eig_hermitian(c.choi());
  const double top = eig.values.size() ? std::abs(eig.values(0)) : 0.0;
  const Index din = c.input_layout().total_dim();
  const Index dout = c.output_layout().total_dim();
  KrausSet out{c.input_layout(), c.output_layout(), {}};
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) <= rank_tol * top) continue;
    CVector col = std::sqrt(eig.values(i)) * eig.vectors.col(i);
    out.operators.push_back(unvec(dout, din, col));
  }
  if (out.operators.empty()) {
    out.operators.push_back(Matrix::Zero(dout, din));
  }
  return out;
}

HermitianOperator apply_channel(const Channel& c,
                                const HermitianOperator& rho) {
  if (rho.layout() != c.input_layout()) {
    throw std::invalid_argument("apply_channel: state layout " +
                                rho.layout().to_string() +
                                " != input layout " +
                                c.input_layout().to_string());
  }
  return apply_to(c, rho);
}

HermitianOperator apply_to(const Channel& c, const HermitianOperator& state) {
  const Layout& in = c.input_layout();
  const Layout& out = c.output_layout();
  for (const auto& f : in.factors()) {
    if (!state.layout().has(f.label) ||
        state.layout().dim_of(f.label) != f.dim) {
      throw std::invalid_argument("apply_to: state lacks input factor '" +
                                  f.label + "'");
    }
  }

  // Natural (superoperator) form K[(b,b'),(a,a')] = J[(b,a),(b',a')], applied
  // to the state grouped as (inputs, inputs') x (rest, rest').
  ComplexMatrix jv = vectorize(c.choi().as_matrix());
  std::vector<std::string> k_rows = out.labels();
  std::vector<std::string> k_cols = in.labels();
  for (const auto& l : out.labels()) k_rows.push_back(l + "'");
  for (const auto& l : in.labels()) k_cols.push_back(l + "'");
  ComplexMatrix k = matricize(jv, k_rows, k_cols);

  ComplexMatrix sv = vectorize(state.as_matrix());
  std::vector<std::string> active = in.labels();
  std::vector<std::string> rest;
  for (const auto& f : state.layout().factors()) {
    if (!in.has(f.label)) rest.push_back(f.label);
  }
  std::vector<std::string> srows = active, scols = rest;
  for (const auto& l : active) srows.push_back(l + "'");
  for (const auto& l : rest) scols.push_back(l + "'");
  ComplexMatrix grouped = matricize(sv, srows, scols);

  Matrix res = k.m * grouped.m;

  // Rebuild the operator on (outputs, bystanders).
  std::vector<Factor> new_factors;
  for (const auto& f : out.factors()) new_factors.push_back(f);
  for (const auto& l : rest) {
    new_factors.push_back({l, state.layout().dim_of(l)});
  }
  Layout new_layout{new_factors};
  // res rows are (out, out'), cols (rest, rest'); regroup to
  // ((out, rest), (out', rest')).
  ComplexMatrix rv = ComplexMatrix::column(k.rows.concat(grouped.cols),
                                           vec(res));
  std::vector<std::string> op_rows, op_cols;
  for (const auto& f : out.factors()) op_rows.push_back(f.label);
  for (const auto& l : rest) op_rows.push_back(l);
  for (const auto& f : out.factors()) op_cols.push_back(f.label + "'");
  for (const auto& l : rest) op_cols.push_back(l + "'");
  ComplexMatrix op = matricize(rv, op_rows, op_cols);
  return HermitianOperator::from_symmetrized(new_layout, std::move(op.m));
}

Channel compose(const Channel& outer, const Channel& inner) {
  const Layout& mid_out = inner.output_layout();
  const Layout& mid_in = outer.input_layout();
  if (mid_out.factor_count() != mid_in.factor_count()) {
    throw std::invalid_argument("compose: interface mismatch");
  }
  for (const auto& f : mid_in.factors()) {
    if (!mid_out.has(f.label) || mid_out.dim_of(f.label) != f.dim) {
      throw std::invalid_argument("compose: interface label '" + f.label +
                                  "' missing from inner output");
    }
  }
  // J(outer . inner) = (outer (x) id)(J(inner)).
  HermitianOperator j = apply_to(outer, inner.choi());
  Layout target = outer.output_layout().concat(inner.input_layout());
  j = permute_factors(j, target.labels());
  ChannelKind kind = ChannelKind::general_cp;
  if (outer.kind() == ChannelKind::channel &&
      inner.kind() == ChannelKind::channel) {
    kind = ChannelKind::channel;
  } else if (outer.kind() == ChannelKind::unital_cp &&
             inner.kind() == ChannelKind::unital_cp) {
    kind = ChannelKind::unital_cp;
  }
  return Channel(std::move(j), inner.input_layout(), outer.output_layout(),
                 kind);
}

Channel tensor_with_identity(const Channel& c, const Layout& extra_in,
                             const std::vector<std::string>& extra_out_labels) {
  const Layout extra_out = extra_in.relabeled(extra_out_labels);
  // J(id_extra) = vec(I) vec(I)* on (extra_out, extra_in).
  ComplexMatrix ident{extra_out, extra_in,
                      Matrix::Identity(extra_in.total_dim(),
                                       extra_in.total_dim())};
  ComplexMatrix iv = vectorize(ident, extra_in.labels());
  Matrix jid = iv.m * iv.m.adjoint();
  HermitianOperator id_choi = HermitianOperator::from_symmetrized(
      extra_out.concat(extra_in), std::move(jid));
  HermitianOperator j = tensor_product(c.choi(), id_choi);
  Layout in = c.input_layout().concat(extra_in);
  Layout out = c.output_layout().concat(extra_out);
  j = permute_factors(j, out.concat(in).labels());
  return Channel(std::move(j), in, out, c.kind());
}

ComplexMatrix stinespring_from_choi(const Channel& c,
                                    const std::string& env_label) {
  if (c.kind() != ChannelKind::channel) {
    throw std::invalid_argument("stinespring_from_choi: not trace-preserving");
  }
  KrausSet k = kraus_from_choi(c);
  const Index env = static_cast<Index>(k.operators.size());
  const Index din = c.input_layout().total_dim();
  const Index dout = c.output_layout().total_dim();
  Matrix v = Matrix::Zero(dout * env, din);
  for (Index e = 0; e < env; ++e) {
    for (Index b = 0; b < dout; ++b) {
      v.row(b * env + e) = k.operators[static_cast<std::size_t>(e)].row(b);
    }
  }
  Layout rows = c.output_layout().concat(Layout::single(env_label, env));
  return {rows, c.input_layout(), std::move(v)};
}

Channel transpose_channel(const Channel& c) {
  // J(Phi^T) is J(Phi) with the output and input factor groups swapped.
  Layout target = c.input_layout().concat(c.output_layout());
  HermitianOperator j = permute_factors(c.choi(), target.labels());
  ChannelKind kind = c.kind();
  if (kind == ChannelKind::channel) {
    kind = ChannelKind::unital_cp;
  } else if (kind == ChannelKind::unital_cp) {
    kind = ChannelKind::channel;
  }
  return Channel(std::move(j), c.output_layout(), c.input_layout(), kind);
}

Channel identity_channel(const Layout& input_layout,
                         const std::vector<std::string>& output_labels) {
  const Layout out = input_layout.relabeled(output_labels);
  KrausSet k{input_layout, out,
             {Matrix::Identity(input_layout.total_dim(),
                               input_layout.total_dim())}};
  return choi_from_kraus(k);
}

Channel unitary_channel(const ComplexMatrix& u) {
  if (u.m.rows() != u.m.cols()) {
    throw std::invalid_argument("unitary_channel: not square");
  }
  if (max_abs(u.m.adjoint() * u.m -
              Matrix::Identity(u.m.cols(), u.m.cols())) > kUnitaryTol) {
    throw std::invalid_argument("unitary_channel: not unitary");
  }
  return choi_from_kraus({u.cols, u.rows, {u.m}});
}

Channel relabel_channel(const Channel& c, const Layout& new_input,
                        const Layout& new_output) {
  if (new_input.total_dim() != c.input_layout().total_dim() ||
      new_output.total_dim() != c.output_layout().total_dim()) {
    throw std::invalid_argument("relabel_channel: dim mismatch");
  }
  HermitianOperator j = HermitianOperator::from_symmetrized(
      new_output.concat(new_input), c.choi().matrix());
  return Channel(std::move(j), new_input, new_output, c.kind());
}

Matrix random_unitary(Index dim, CounterRng& rng) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i, j) = rng.cgaussian();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar and the result is
  // deterministic.
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : 1.0;
  }
  return q;
}

Channel random_channel(const Layout& input_layout, const Layout& output_layout,
                       Index env_dim, CounterRng& rng) {
  const Index din = input_layout.total_dim();
  const Index dout = output_layout.total_dim();
  if (dout * env_dim < din) {
    throw std::invalid_argument(
        "random_channel: output x env smaller than input");
  }
  // Haar isometry: leading columns of a Haar unitary on output x env.
  Matrix u = random_unitary(dout * env_dim, rng);
  Matrix v = u.leftCols(din);
  KrausSet k{input_layout, output_layout, {}};
  for (Index e = 0; e < env_dim; ++e) {
    Matrix op(dout, din);
    for (Index b = 0; b < dout; ++b) op.row(b) = v.row(b * env_dim + e);
    k.operators.push_back(std::move(op));
  }
  return choi_from_kraus(k);
}

ComplexMatrix random_pure_state(const Layout& layout, CounterRng& rng) {
  CVector v(layout.total_dim());
  for (Index i = 0; i < v.size(); ++i) v(i) = rng.cgaussian();
  v /= v.norm();
  return ComplexMatrix::column(layout, std::move(v));
}

HermitianOperator random_density(const Layout& layout, Index rank,
                                 CounterRng& rng) {
  const Index d = layout.total_dim();
  Matrix g(d, rank);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < rank; ++j) g(i, j) = rng.cgaussian();
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermitianOperator::from_symmetrized(layout, std::move(rho));
}

}  // namespace combforge
