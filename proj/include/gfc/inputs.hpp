#pragma once

// Named input profiles for experiments: smooth compact inputs for solves and
// the Fourier demo, and level-dependent families for standard-part runs.

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gfc/dual.hpp"
#include "gfc/error.hpp"
#include "gfc/scale_ladder.hpp"
#include "gfc/smooth_family.hpp"

namespace gfc {

namespace input_detail {

template <class T>
T dist2(std::span<const T> x, const Point& c, double R) {
  T s = lift<T>(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s = s + (x[i] - c[i]) * (x[i] - c[i]);
  return s * (1.0 / (R * R));
}

struct BumpIn {
  Point c{};
  double R = 1.0, a = 1.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    const T s = dist2(x, c, R);
    if (primal(s) >= 1.0) return lift<T>(0.0);
    return a * exp(lift<T>(-1.0) / (lift<T>(1.0) - s));
  }
};

struct QuarticIn {
  Point c{};
  double R = 1.0, a = 1.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    const T s = dist2(x, c, R);
    if (primal(s) >= 1.0) return lift<T>(0.0);
    const T u = lift<T>(1.0) - s;
    return a * u * u;
  }
};

// sin(x₁ + ρ)·exp(ρ x₂ …) style analytic family; the ρ-dependence is smooth
struct AnalyticIn {
  double rho = 0.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    T v = sin(x[0] + rho) * (1.0 + rho);
    for (std::size_t i = 1; i < x.size(); ++i) v = v * exp(rho * x[i]) * cos(0.5 * x[i]);
    return v + rho * cos(2.0 * x[0]);
  }
};

}  // namespace input_detail

/// Parameters are looked up by name; unknown names are rejected by the caller.
using InputParams = std::map<std::string, double>;

inline const std::vector<std::string>& input_profiles() {
  static const std::vector<std::string> names{"bump", "quartic", "zero", "analytic", "scaled_bump"};
  return names;
}

inline const std::vector<std::string>& input_parameters(const std::string& profile) {
  static const std::map<std::string, std::vector<std::string>> p{
      {"bump", {"radius", "center", "amplitude"}},
      {"quartic", {"radius", "center", "amplitude"}},
      {"zero", {}},
      {"analytic", {}},
      {"scaled_bump", {"radius", "power"}}};
  auto it = p.find(profile);
  require(it != p.end(), ErrorKind::unknown_name, "unknown input profile '" + profile + "'");
  return it->second;
}

/// Builds a named input. `ladder` is used only by level-dependent profiles
/// (analytic: f_ρ = (1+ρ) sin(x₁+ρ)·… ; scaled_bump: ρ^power · bump).
inline SmoothFamily make_input(const std::string& profile, std::size_t d, const InputParams& params,
                               const ScaleLadder& ladder) {
  require(d >= 1 && d <= kMaxDim, ErrorKind::invalid_argument, "input dimension must be 1..3");
  const auto& allowed = input_parameters(profile);
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == k;
    require(ok, ErrorKind::invalid_argument, "input profile '" + profile + "' has no parameter '" + k + "'");
  }
  auto get = [&](const std::string& k, double def) {
    auto it = params.find(k);
    return it == params.end() ? def : it->second;
  };
  const double R = get("radius", 1.0), c1 = get("center", 0.0), a = get("amplitude", 1.0);
  require(R > 0.0 && std::isfinite(R), ErrorKind::invalid_argument, "input radius must be positive");
  const Point c{c1, 0.0, 0.0};

  StandardOptions o;
  o.support_center = c;
  o.support_radius = R;
  o.feature_scale = R / 4.0;
  o.radial = c1 == 0.0;
  if (d == 1) o.breakpoints = {{c1 - R, c1 + R}};

  if (profile == "zero") return zero_family(d);
  if (profile == "bump") {
    o.label = "bump(R=" + std::to_string(R) + ")";
    return standard_family(d, input_detail::BumpIn{c, R, a}, o);
  }
  if (profile == "quartic") {
    o.label = "quartic(R=" + std::to_string(R) + ")";
    o.smoothness = 1;
    return standard_family(d, input_detail::QuarticIn{c, R, a}, o);
  }
  if (profile == "scaled_bump") {
    const double p = get("power", 1.0);
    o.label = "bump(R=" + std::to_string(R) + ")";
    auto b = standard_family(d, input_detail::BumpIn{Point{}, R, 1.0}, o);
    return level_scaled(b, ladder, [p](double rho) { return std::pow(rho, p); },
                        "rho^" + std::to_string(p) + "*" + b.label());
  }
  // analytic
  FamilyParts parts;
  parts.dim = d;
  parts.ladder = ladder;
  parts.eval = analytic_evaluator([ladder](std::size_t k) { return input_detail::AnalyticIn{ladder.rho(k)}; });
  parts.label = "analytic";
  parts.features.push_back({Point{}, constant_level(0.5), true});
  return SmoothFamily(std::move(parts));
}

}  // namespace gfc
