#include "combforge/layout.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace combforge {

Layout::Layout(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::unordered_set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.dim < 1) {
      throw std::invalid_argument("Layout: factor '" + f.label +
                                  "' has dim < 1");
    }
    if (!seen.insert(f.label).second) {
      throw std::invalid_argument("Layout: duplicate label '" + f.label + "'");
    }
    total_ *= f.dim;
  }
}

Layout Layout::single(std::string label, Index dim) {
  return Layout({{std::move(label), dim}});
}

bool Layout::has(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t Layout::position(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  throw std::invalid_argument("Layout: unknown label '" + label + "'");
}

Index Layout::dim_of(const std::string& label) const {
  return factors_[position(label)].dim;
}

std::vector<std::string> Layout::labels() const {
  std::vector<std::string> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

Layout Layout::concat(const Layout& other) const {
  std::vector<Factor> merged = factors_;
  for (const auto& f : other.factors_) {
    if (has(f.label)) {
      throw std::invalid_argument("Layout::concat: label collision on '" +
                                  f.label + "'");
    }
    merged.push_back(f);
  }
  return Layout(std::move(merged));
}

Layout Layout::without(const std::vector<std::string>& labels) const {
  for (const auto& l : labels) position(l);  // validate
  std::vector<Factor> kept;
  for (const auto& f : factors_) {
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end()) {
      kept.push_back(f);
    }
  }
  return Layout(std::move(kept));
}

Layout Layout::permuted(const std::vector<std::string>& order) const {
  if (order.size() != factors_.size()) {
    throw std::invalid_argument("Layout::permuted: order size mismatch");
  }
  std::vector<Factor> out;
  out.reserve(order.size());
  for (const auto& l : order) out.push_back(factors_[position(l)]);
  return Layout(std::move(out));  // ctor re-checks distinctness
}

Layout Layout::relabeled(const std::vector<std::string>& new_labels) const {
  if (new_labels.size() != factors_.size()) {
    throw std::invalid_argument("Layout::relabeled: label count mismatch");
  }
  std::vector<Factor> out = factors_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].label = new_labels[i];
  return Layout(std::move(out));
}

Layout Layout::reversed() const {
  std::vector<Factor> out(factors_.rbegin(), factors_.rend());
  return Layout(std::move(out));
}

std::vector<Index> Layout::strides() const {
  std::vector<Index> s(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 1;) {
    s[i - 1] = s[i] * factors_[i].dim;
  }
  return s;
}

void Layout::decode(Index index, std::span<Index> digits) const {
  for (std::size_t i = factors_.size(); i-- > 0;) {
    digits[i] = index % factors_[i].dim;
    index /= factors_[i].dim;
  }
}

Index Layout::encode(std::span<const Index> digits) const {
  Index idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    idx = idx * factors_[i].dim + digits[i];
  }
  return idx;
}

std::string Layout::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << ", ";
    os << factors_[i].label << ":" << factors_[i].dim;
  }
  os << ")";
  return os.str();
}

}  // namespace combforge
