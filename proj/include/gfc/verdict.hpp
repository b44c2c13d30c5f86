#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/scale_ladder.hpp"

namespace gfc {

/// Thresholds shared by every verdict.
struct Tolerance {
  double finest = 1e-3;     // residual allowed at the finest level
  double min_order = 0.5;   // required fitted convergence order
};

/// Per-member detail kept alongside a battery verdict.
struct MemberResiduals {
  std::string label;
  std::vector<double> residuals;
  double fitted_order = 0.0;
};

/// A residual table over a ladder with its fitted order and pass flag.
struct ApproxVerdict {
  std::vector<double> rho;
  std::vector<double> residuals;
  std::vector<double> quadrature_error;  // same length as residuals (0 when not applicable)
  double fitted_order = 0.0;
  double tolerance_at_finest = 1e-3;
  double min_order = 0.5;
  bool pass = false;
  std::string witness;
  std::vector<MemberResiduals> members;

  double finest() const { return residuals.empty() ? 0.0 : residuals.back(); }
};

inline constexpr double kResidualFloor = 1e-300;

/// Least-squares slope of log(residual) against log(ρ). All-zero residuals
/// give +∞; isolated zeros are clamped to a tiny floor.
inline double fit_order(const std::vector<double>& rho, const std::vector<double>& residuals) {
  require(rho.size() == residuals.size() && rho.size() >= 2, ErrorKind::invalid_argument,
          "order fit needs matching sequences of length >= 2");
  if (std::all_of(residuals.begin(), residuals.end(), [](double r) { return r == 0.0; }))
    return std::numeric_limits<double>::infinity();
  const std::size_t n = rho.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(rho[i]);
    const double y = std::log(std::max(std::abs(residuals[i]), kResidualFloor));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, ErrorKind::invalid_argument, "order fit needs distinct scales");
  return (n * sxy - sx * sy) / den;
}

inline ApproxVerdict make_verdict(std::vector<double> rho, std::vector<double> residuals,
                                  std::vector<double> quad_error, const Tolerance& tol, std::string witness = {}) {
  ApproxVerdict v;
  if (quad_error.empty()) quad_error.assign(residuals.size(), 0.0);
  v.fitted_order = fit_order(rho, residuals);
  v.rho = std::move(rho);
  v.residuals = std::move(residuals);
  v.quadrature_error = std::move(quad_error);
  v.tolerance_at_finest = tol.finest;
  v.min_order = tol.min_order;
  v.pass = std::isfinite(v.finest()) && v.finest() <= tol.finest && v.fitted_order >= tol.min_order;
  v.witness = std::move(witness);
  return v;
}

inline std::vector<double> ladder_rhos(const ScaleLadder& ladder) { return ladder.levels(); }

}  // namespace gfc
