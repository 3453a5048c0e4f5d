#include "sdp_detail.hpp"

#include <stdexcept>

namespace combforge::detail {

std::vector<Index> layout_offsets(const Layout& full, const Layout& shape) {
  const auto strides = full.strides();
  std::vector<Index> shape_stride;
  for (const auto& f : shape.factors()) {
    if (full.dim_of(f.label) != f.dim) {
      throw std::invalid_argument("layout_offsets: dim mismatch on '" +
                                  f.label + "'");
    }
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

EmbedInfo embed_info(const Layout& small, const Layout& big) {
  EmbedInfo info;
  info.base = layout_offsets(big, small);
  std::vector<Factor> extra_fs;
  for (const auto& f : big.factors()) {
    if (!small.has(f.label)) extra_fs.push_back(f);
  }
  if (small.factor_count() + extra_fs.size() != big.factor_count()) {
    throw std::invalid_argument("embed_info: small not contained in big");
  }
  info.extras = layout_offsets(big, Layout(extra_fs));
  return info;
}

SparseHermitian sparse_embed(const SparseHermitian& e, const EmbedInfo& info) {
  SparseHermitian out;
  out.reserve(e.size() * info.extras.size());
  for (const auto& entry : e) {
    const Index br = info.base[static_cast<std::size_t>(entry.r)];
    const Index bc = info.base[static_cast<std::size_t>(entry.c)];
    for (const Index off : info.extras) {
      out.push_back({br + off, bc + off, entry.v});
    }
  }
  return out;
}

TraceInfo trace_info(const Layout& space,
                     const std::vector<std::string>& labels) {
  const Layout survivors = space.without(labels);
  std::vector<Factor> traced_fs;
  for (const auto& l : labels) traced_fs.push_back({l, space.dim_of(l)});
  const Layout traced(traced_fs);

  const auto strides = space.strides();
  std::vector<std::pair<std::size_t, Index>> surv_map, traced_map;
  for (std::size_t k = 0; k < space.factor_count(); ++k) {
    const auto& f = space.factors()[k];
    if (survivors.has(f.label)) {
      surv_map.push_back({k, f.dim});
    } else {
      traced_map.push_back({k, f.dim});
    }
  }

  TraceInfo info;
  info.proj.resize(static_cast<std::size_t>(space.total_dim()));
  info.digit.resize(static_cast<std::size_t>(space.total_dim()));
  std::vector<Index> digits(space.factor_count());
  const auto surv_strides = survivors.strides();
  for (Index i = 0; i < space.total_dim(); ++i) {
    space.decode(i, digits);
    Index p = 0;
    for (std::size_t k = 0; k < surv_map.size(); ++k) {
      p += digits[surv_map[k].first] * surv_strides[k];
    }
    Index t = 0;
    // Traced digits keyed in `labels` order.
    for (const auto& l : labels) {
      const std::size_t pos = space.position(l);
      t = t * space.factors()[pos].dim + digits[pos];
    }
    info.proj[static_cast<std::size_t>(i)] = p;
    info.digit[static_cast<std::size_t>(i)] = t;
  }
  return info;
}

SparseHermitian sparse_trace(const SparseHermitian& e, const TraceInfo& info) {
  SparseHermitian out;
  for (const auto& entry : e) {
    const auto r = static_cast<std::size_t>(entry.r);
    const auto c = static_cast<std::size_t>(entry.c);
    if (info.digit[r] == info.digit[c]) {
      out.push_back({info.proj[r], info.proj[c], entry.v});
    }
  }
  return out;
}

SparseHermitian sparse_shift(const SparseHermitian& e, Index dr, Index dc) {
  SparseHermitian out = e;
  for (auto& entry : out) {
    entry.r += dr;
    entry.c += dc;
  }
  return out;
}

SparseHermitian sparse_scale(SparseHermitian e, Complex s) {
  for (auto& entry : e) entry.v *= s;
  return e;
}

double sparse_pair_real(const SparseHermitian& e, const Matrix& m) {
  Complex s = 0.0;
  for (const auto& entry : e) s += std::conj(entry.v) * m(entry.r, entry.c);
  return s.real();
}

Matrix sparse_to_dense(const SparseHermitian& e, Index dim) {
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& entry : e) m(entry.r, entry.c) += entry.v;
  return m;
}

}  // namespace combforge::detail
