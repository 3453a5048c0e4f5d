#include "combforge/tensor_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace combforge {

namespace {

// Flat-index map realizing a factor permutation: out flat index -> in flat
// index, where `target` is a permutation of `source`'s factors.
std::vector<Index> permutation_map(const Layout& source, const Layout& target) {
  const auto n = source.factor_count();
  if (target.factor_count() != n) {
    throw std::invalid_argument("permutation_map: factor count mismatch");
  }
  std::vector<std::size_t> source_pos(n);
  for (std::size_t k = 0; k < n; ++k) {
    source_pos[k] = source.position(target.factors()[k].label);
    if (source.factors()[source_pos[k]].dim != target.factors()[k].dim) {
      throw std::invalid_argument("permutation_map: dim mismatch on '" +
                                  target.factors()[k].label + "'");
    }
  }
  const auto strides = source.strides();
  std::vector<Index> map(static_cast<std::size_t>(target.total_dim()));
  std::vector<Index> digits(n);
  for (Index i = 0; i < target.total_dim(); ++i) {
    target.decode(i, digits);
    Index j = 0;
    for (std::size_t k = 0; k < n; ++k) j += digits[k] * strides[source_pos[k]];
    map[static_cast<std::size_t>(i)] = j;
  }
  return map;
}

std::vector<std::string> primed(const Layout& l) {
  std::vector<std::string> out;
  out.reserve(l.factor_count());
  for (const auto& f : l.factors()) out.push_back(f.label + "'");
  return out;
}

}  // namespace

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Layout rows = a.rows.concat(b.rows);
  const Layout cols = a.cols.concat(b.cols);
  const Index br = b.m.rows(), bc = b.m.cols();
  Matrix out(rows.total_dim(), cols.total_dim());
  for (Index i = 0; i < a.m.rows(); ++i) {
    for (Index j = 0; j < a.m.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a.m(i, j) * b.m;
    }
  }
  return {rows, cols, std::move(out)};
}

HermitianOperator tensor_product(const HermitianOperator& a,
                                 const HermitianOperator& b) {
  ComplexMatrix p = tensor_product(a.as_matrix(), b.as_matrix());
  return HermitianOperator::from_symmetrized(p.rows, std::move(p.m));
}

namespace {

// Flat indices offset by digits of `shape` placed at their strides in the
// enclosing layout.  Mixed-radix indices are additive across disjoint factor
// groups, so a full index is always (survivor base) + (traced offset).
std::vector<Index> offset_table(const Layout& full, const Layout& shape) {
  const auto strides = full.strides();
  std::vector<Index> shape_stride;
  for (const auto& f : shape.factors()) {
    shape_stride.push_back(strides[full.position(f.label)]);
  }
  std::vector<Index> out(static_cast<std::size_t>(shape.total_dim()));
  std::vector<Index> digits(shape.factor_count());
  for (Index i = 0; i < shape.total_dim(); ++i) {
    shape.decode(i, digits);
    Index v = 0;
    for (std::size_t k = 0; k < shape_stride.size(); ++k) {
      v += digits[k] * shape_stride[k];
    }
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<std::string>& labels) {
  std::vector<Factor> traced_fs;
  for (const auto& l : labels) {
    if (m.rows.dim_of(l) != m.cols.dim_of(l)) {
      throw std::invalid_argument("partial_trace: unequal dims for '" + l +
                                  "'");
    }
    traced_fs.push_back({l, m.rows.dim_of(l)});
  }
  const Layout traced(traced_fs);  // canonical enumeration order
  const Layout out_rows = m.rows.without(labels);
  const Layout out_cols = m.cols.without(labels);

  const auto row_base = offset_table(m.rows, out_rows);
  const auto row_off = offset_table(m.rows, traced);
  const auto col_base = offset_table(m.cols, out_cols);
  const auto col_off = offset_table(m.cols, traced);

  Matrix out = Matrix::Zero(out_rows.total_dim(), out_cols.total_dim());
  for (std::size_t t = 0; t < row_off.size(); ++t) {
    for (Index r = 0; r < out.rows(); ++r) {
      for (Index c = 0; c < out.cols(); ++c) {
        out(r, c) += m.m(row_base[static_cast<std::size_t>(r)] + row_off[t],
                         col_base[static_cast<std::size_t>(c)] + col_off[t]);
      }
    }
  }
  return {out_rows, out_cols, std::move(out)};
}

HermitianOperator partial_trace(const HermitianOperator& m,
                                const std::vector<std::string>& labels) {
  ComplexMatrix r = partial_trace(m.as_matrix(), labels);
  return HermitianOperator::from_symmetrized(r.rows, std::move(r.m));
}

ComplexMatrix permute_rows(const ComplexMatrix& m,
                           const std::vector<std::string>& target_order) {
  const Layout target = m.rows.permuted(target_order);
  const auto map = permutation_map(m.rows, target);
  Matrix out(target.total_dim(), m.m.cols());
  for (Index i = 0; i < out.rows(); ++i) {
    out.row(i) = m.m.row(map[static_cast<std::size_t>(i)]);
  }
  return {target, m.cols, std::move(out)};
}

ComplexMatrix permute_cols(const ComplexMatrix& m,
                           const std::vector<std::string>& target_order) {
  const Layout target = m.cols.permuted(target_order);
  const auto map = permutation_map(m.cols, target);
  Matrix out(m.m.rows(), target.total_dim());
  for (Index j = 0; j < out.cols(); ++j) {
    out.col(j) = m.m.col(map[static_cast<std::size_t>(j)]);
  }
  return {m.rows, target, std::move(out)};
}

HermitianOperator permute_factors(
    const HermitianOperator& m, const std::vector<std::string>& target_order) {
  ComplexMatrix p = permute_cols(permute_rows(m.as_matrix(), target_order),
                                 target_order);
  return HermitianOperator::from_symmetrized(p.rows, std::move(p.m));
}

ComplexMatrix reversal_isometry(const Layout& layout) {
  const Layout target = layout.reversed();
  const auto map = permutation_map(layout, target);
  Matrix w = Matrix::Zero(layout.total_dim(), layout.total_dim());
  for (Index i = 0; i < target.total_dim(); ++i) {
    w(i, map[static_cast<std::size_t>(i)]) = 1.0;
  }
  return {target, layout, std::move(w)};
}

CVector vec(const Matrix& m) {
  CVector v(m.rows() * m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

Matrix unvec(Index rows, Index cols, const CVector& v) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  }
  return m;
}

ComplexMatrix vectorize(const ComplexMatrix& m) {
  return vectorize(m, primed(m.cols));
}

ComplexMatrix vectorize(const ComplexMatrix& m,
                        const std::vector<std::string>& col_labels) {
  const Layout layout = m.rows.concat(m.cols.relabeled(col_labels));
  return ComplexMatrix::column(layout, vec(m.m));
}

ComplexMatrix matricize(const ComplexMatrix& v,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels) {
  if (!v.is_column()) {
    throw std::invalid_argument("matricize: input is not a column vector");
  }
  std::vector<std::string> order = row_labels;
  order.insert(order.end(), col_labels.begin(), col_labels.end());
  ComplexMatrix p = permute_rows(v, order);
  Layout rows = Layout{}, cols = Layout{};
  {
    std::vector<Factor> rf, cf;
    for (std::size_t k = 0; k < row_labels.size(); ++k) {
      rf.push_back(p.rows.factors()[k]);
    }
    for (std::size_t k = row_labels.size(); k < p.rows.factor_count(); ++k) {
      cf.push_back(p.rows.factors()[k]);
    }
    rows = Layout(rf);
    cols = Layout(cf);
  }
  // Row-major flattening makes the reshape an index reinterpretation.
  Matrix out = unvec(rows.total_dim(), cols.total_dim(), p.m.col(0));
  return {rows, cols, std::move(out)};
}

HermitianOperator embed(const HermitianOperator& op, const Layout& target) {
  std::vector<Factor> extra;
  for (const auto& f : target.factors()) {
    if (!op.layout().has(f.label)) {
      extra.push_back(f);
    } else if (op.layout().dim_of(f.label) != f.dim) {
      throw std::invalid_argument("embed: dim mismatch for '" + f.label + "'");
    }
  }
  if (op.layout().factor_count() + extra.size() != target.factor_count()) {
    throw std::invalid_argument("embed: target misses operator labels");
  }
  HermitianOperator wide =
      extra.empty() ? op
                    : tensor_product(op, HermitianOperator::identity(
                                             Layout(std::move(extra))));
  return permute_factors(wide, target.labels());
}

ComplexMatrix apply_left(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (!v.is_column()) {
    throw std::invalid_argument("apply_left: input is not a column vector");
  }
  std::vector<std::string> active = u.cols.labels();
  std::vector<std::string> rest;
  for (const auto& f : v.rows.factors()) {
    if (!u.cols.has(f.label)) rest.push_back(f.label);
  }
  ComplexMatrix grouped = matricize(v, active, rest);
  if (grouped.rows.total_dim() != u.cols.total_dim()) {
    throw std::invalid_argument("apply_left: factor group dim mismatch");
  }
  Matrix out = u.m * grouped.m;
  Layout layout = u.rows.concat(grouped.cols);
  return ComplexMatrix::column(layout, vec(out));
}

Complex trace(const ComplexMatrix& m) { return m.m.trace(); }

}  // namespace combforge
