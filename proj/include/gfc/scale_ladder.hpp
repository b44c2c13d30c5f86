#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gfc/error.hpp"

namespace gfc {

/// A strictly decreasing finite sequence of scales ρ_0 > … > ρ_L standing in
/// for one infinitesimal. λ_k = 1/ρ_k is the matching infinite-scale ladder.
class ScaleLadder {
 public:
  ScaleLadder(std::vector<double> levels, double base) : levels_(std::move(levels)), base_(base) {
    require(levels_.size() >= 3, ErrorKind::invalid_argument, "a ladder needs at least 3 levels");
    require(base_ > 1.0, ErrorKind::invalid_argument, "ladder base must exceed 1");
    for (std::size_t k = 0; k < levels_.size(); ++k) {
      require(levels_[k] > 0.0 && std::isfinite(levels_[k]), ErrorKind::invalid_argument,
              "ladder levels must be positive and finite");
      if (k > 0) {
        const double ratio = levels_[k - 1] / levels_[k];
        require(ratio > 1.0, ErrorKind::invalid_argument, "ladder levels must strictly decrease");
        require(ratio >= 1.5 && ratio <= 16.0, ErrorKind::invalid_argument,
                "consecutive ladder ratio must lie in [1.5, 16]");
      }
    }
  }

  std::size_t size() const { return levels_.size(); }
  double rho(std::size_t k) const { return levels_.at(k); }
  double lambda(std::size_t k) const { return 1.0 / levels_.at(k); }
  double finest() const { return levels_.back(); }
  double base() const { return base_; }
  const std::vector<double>& levels() const { return levels_; }

  friend bool operator==(const ScaleLadder&, const ScaleLadder&) = default;

 private:
  std::vector<double> levels_;
  double base_;
};

/// Geometric ladder ρ_k = base^{-k}, k = k_min..k_max.
inline ScaleLadder make_ladder(int k_min, int k_max, double base) {
  require(k_min < k_max, ErrorKind::invalid_argument,
          "k_min must be smaller than k_max (got " + std::to_string(k_min) + " >= " + std::to_string(k_max) + ")");
  require(base > 1.0, ErrorKind::invalid_argument, "base must exceed 1");
  require(k_min >= 0, ErrorKind::invalid_argument, "k_min must be a natural number");
  require(k_max <= 40, ErrorKind::invalid_argument, "k_max must not exceed 40");
  std::vector<double> levels;
  for (int k = k_min; k <= k_max; ++k) levels.push_back(std::pow(base, -k));
  return ScaleLadder(std::move(levels), base);
}

inline ScaleLadder default_ladder() { return make_ladder(4, 10, 2.0); }

}  // namespace gfc
