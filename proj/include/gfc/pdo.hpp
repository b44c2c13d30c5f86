#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/multi_index.hpp"

namespace gfc {

/// P(∂) = Σ c_α ∂^α with constant coefficients; zero coefficients are never stored.
class PDOperator {
 public:
  PDOperator(std::size_t dim, std::vector<std::pair<MultiIndex, double>> terms) : dim_(dim) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::invalid_argument, "operator dimension must be 1..3");
    for (auto& [alpha, c] : terms) {
      require(alpha.dim() == dim, ErrorKind::dimension_mismatch, "multi-index dimension differs from operator's");
      require(std::isfinite(c), ErrorKind::invalid_argument, "operator coefficients must be finite");
      terms_[alpha] += c;
    }
    std::erase_if(terms_, [](const auto& t) { return t.second == 0.0; });
    require(!terms_.empty(), ErrorKind::invalid_argument, "operator needs at least one nonzero term");
    for (const auto& [alpha, c] : terms_) order_ = std::max(order_, alpha.order());
  }

  static PDOperator identity(std::size_t dim) { return PDOperator(dim, {{MultiIndex(dim), 1.0}}); }

  std::size_t dimension() const { return dim_; }
  int order() const { return order_; }
  const std::map<MultiIndex, double>& terms() const { return terms_; }

  double coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// c_0 + c_2 Δ: commutes with rotations, so it maps radial functions to radial ones.
  bool rotation_invariant() const {
    double c2 = 0.0;
    bool seen = false;
    for (const auto& [alpha, c] : terms_) {
      if (alpha.order() == 0) continue;
      if (alpha.order() != 2) return false;
      int axis_pow = 0;
      for (std::size_t i = 0; i < dim_; ++i) axis_pow = std::max(axis_pow, alpha[i]);
      if (axis_pow != 2) return false;
      if (seen && c != c2) return false;
      c2 = c;
      seen = true;
    }
    if (!seen) return true;
    for (std::size_t i = 0; i < dim_; ++i)
      if (coefficient(MultiIndex::unit(dim_, i, 2)) != c2) return false;
    return true;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [alpha, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += std::to_string(c) + "*d" + alpha.to_string();
    }
    return s;
  }

  friend bool operator==(const PDOperator&, const PDOperator&) = default;

 private:
  std::size_t dim_;
  std::map<MultiIndex, double> terms_;
  int order_ = 0;
};

/// P(−∂) = Σ (−1)^{|α|} c_α ∂^α.
inline PDOperator formal_adjoint(const PDOperator& p) {
  std::vector<std::pair<MultiIndex, double>> t;
  for (const auto& [alpha, c] : p.terms()) t.emplace_back(alpha, (alpha.order() % 2 == 0) ? c : -c);
  return PDOperator(p.dimension(), std::move(t));
}

}  // namespace gfc
