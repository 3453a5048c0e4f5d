#ifndef COMBFORGE_SDP_DETAIL_HPP
#define COMBFORGE_SDP_DETAIL_HPP

// Sparse index machinery shared by the SDP builders: embedding a basis
// element E of a subspace as E (x) I on a larger layout, and partial-tracing
// it onto a smaller one.  Tables are per-(small, big) pairs and reused across
// the whole basis.

#include <string>
#include <vector>

#include "combforge/layout.hpp"
#include "combforge/sdp.hpp"

namespace combforge::detail {

// Flat offsets of `shape`'s digits inside `full` (additive mixed radix).
std::vector<Index> layout_offsets(const Layout& full, const Layout& shape);

struct EmbedInfo {
  std::vector<Index> base;    // small flat index -> base offset in big
  std::vector<Index> extras;  // extra multi-index -> offset in big
};

// big must contain every factor of small (same dims) plus the extras.
EmbedInfo embed_info(const Layout& small, const Layout& big);

// E on small  ->  E (x) I_extras arranged on big.
SparseHermitian sparse_embed(const SparseHermitian& e, const EmbedInfo& info);

struct TraceInfo {
  std::vector<Index> proj;   // space flat index -> survivor flat index
  std::vector<Index> digit;  // space flat index -> traced flat index
};

// Survivor layout is `space` without `labels` (order preserved).
TraceInfo trace_info(const Layout& space, const std::vector<std::string>& labels);

// E on space -> Tr_labels(E) on the survivor layout.
SparseHermitian sparse_trace(const SparseHermitian& e, const TraceInfo& info);

// Offset every entry by (dr, dc): places a coefficient into a sub-block of a
// larger PSD variable.
SparseHermitian sparse_shift(const SparseHermitian& e, Index dr, Index dc);

SparseHermitian sparse_scale(SparseHermitian e, Complex s);

// <E, M> = conj(sum of E entries against M); real for Hermitian M.
double sparse_pair_real(const SparseHermitian& e, const Matrix& m);

// Dense Hermitian from a sparse element (for certificate assembly).
Matrix sparse_to_dense(const SparseHermitian& e, Index dim);

}  // namespace combforge::detail

#endif
