#ifndef COMBFORGE_LAYOUT_HPP
#define COMBFORGE_LAYOUT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace combforge {

using Index = std::int64_t;

struct Factor {
  std::string label;
  Index dim = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

// An ordered list of labeled tensor factors.  The single source of truth for
// factor ordering: every operator carries its Layout and all reorderings are
// explicit permutations.  Dimension-1 factors are first-class and are never
// dropped implicitly.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<Factor> factors);

  static Layout single(std::string label, Index dim);

  const std::vector<Factor>& factors() const { return factors_; }
  Index total_dim() const { return total_; }
  std::size_t factor_count() const { return factors_.size(); }

  bool has(const std::string& label) const;
  std::size_t position(const std::string& label) const;  // throws if absent
  Index dim_of(const std::string& label) const;
  std::vector<std::string> labels() const;

  // Concatenation; label sets must be disjoint.
  Layout concat(const Layout& other) const;
  // Drops the given labels (all must exist); survivor order preserved.
  Layout without(const std::vector<std::string>& labels) const;
  // Reordered copy; `order` must be a permutation of the labels.
  Layout permuted(const std::vector<std::string>& order) const;
  // Same dims and order, new labels.
  Layout relabeled(const std::vector<std::string>& new_labels) const;
  Layout reversed() const;

  // Row-major strides, one per factor.
  std::vector<Index> strides() const;
  void decode(Index index, std::span<Index> digits) const;
  Index encode(std::span<const Index> digits) const;

  friend bool operator==(const Layout&, const Layout&) = default;
  std::string to_string() const;

 private:
  std::vector<Factor> factors_;
  Index total_ = 1;
};

}  // namespace combforge

#endif
