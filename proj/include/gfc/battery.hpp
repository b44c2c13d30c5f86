#pragma once

// The versioned test battery: 8 C∞_c members, 4 C¹_c members and 3 members
// that are continuous with a kink. Every member is supported in [-2, 2]^d.

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfc/dual.hpp"
#include "gfc/error.hpp"
#include "gfc/multi_index.hpp"
#include "gfc/smooth_family.hpp"

namespace gfc {

inline constexpr std::string_view kBatteryVersion = "gfc-battery-1.0";

enum class Regularity { c0, c1, cinf };

inline std::string_view to_string(Regularity r) {
  switch (r) {
    case Regularity::c0: return "C0";
    case Regularity::c1: return "C1c";
    case Regularity::cinf: return "Cinf_c";
  }
  return "?";
}

inline Regularity parse_regularity(std::string_view s) {
  if (s == "C0" || s == "c0") return Regularity::c0;
  if (s == "C1c" || s == "c1") return Regularity::c1;
  if (s == "Cinf_c" || s == "cinf") return Regularity::cinf;
  fail(ErrorKind::unknown_name, "unknown regularity class '" + std::string(s) + "'");
}

struct BatteryMember {
  SmoothFamily phi;
  Regularity regularity;
  int weak_order;   // highest derivative order usable on φ in a pairing
  double value_at_origin;
};

struct TestBattery {
  std::size_t dim = 1;
  Regularity regularity = Regularity::cinf;  // weakest class admitted
  std::vector<BatteryMember> members;

  std::vector<SmoothFamily> families() const {
    std::vector<SmoothFamily> f;
    for (const auto& m : members) f.push_back(m.phi);
    return f;
  }
};

namespace battery_detail {

template <class T>
T norm2(std::span<const T> x, const Point& c) {
  T s = square(x[0] - c[0]);
  for (std::size_t i = 1; i < x.size(); ++i) s = s + square(x[i] - c[i]);
  return s;
}

/// |x − c| with zero derivatives at the centre (a.e. convention for cones).
template <class T>
T radius(std::span<const T> x, const Point& c) {
  if (x.size() == 1) return abs_ae(T(x[0] - c[0]));
  T s = norm2(x, c);
  if (primal(s) == 0.0) return lift<T>(0.0);
  return sqrt(s);
}

// exp(1 − 1/(1 − |x−c|²/R²)), peak 1 at c
struct Bump {
  Point c{};
  double R = 1.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    T s = norm2(x, c) * (1.0 / (R * R));
    if (primal(s) >= 1.0) return lift<T>(0.0);
    return exp(1.0 - 1.0 / (1.0 - s));
  }
};

struct BumpPoly {
  template <class T>
  T operator()(std::span<const T> x) const {
    return Bump{}(x) * (1.0 + x[0] + x[0] * x[0]);
  }
};

struct BumpCos {
  template <class T>
  T operator()(std::span<const T> x) const {
    return Bump{}(x) * cos(4.0 * x[0]);
  }
};

struct BumpSin {
  template <class T>
  T operator()(std::span<const T> x) const {
    return Bump{Point{}, 1.5}(x) * sin(3.0 * x[0] + 0.5);
  }
};

// (1 − |x−c|²/R²)², C¹ across the support boundary
struct Quartic {
  Point c{};
  double R = 1.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    T s = norm2(x, c) * (1.0 / (R * R));
    if (primal(s) >= 1.0) return lift<T>(0.0);
    return square(1.0 - s);
  }
};

struct QuarticTilt {
  template <class T>
  T operator()(std::span<const T> x) const {
    return Quartic{Point{}, 2.0}(x) * (1.0 + 0.5 * x[0]);
  }
};

struct QuarticCos {
  template <class T>
  T operator()(std::span<const T> x) const {
    return Quartic{}(x) * cos(2.0 * x[0]);
  }
};

// a·max(0, 1 − |x|/R)·(1 + t·x₁)
struct Kink {
  double a = 1.0;
  double R = 1.0;
  double t = 0.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    T r = radius(x, Point{});
    if (primal(r) >= R) return lift<T>(0.0);
    return a * (1.0 - r * (1.0 / R)) * (1.0 + t * x[0]);
  }
};

inline Point shifted(double x1) { return Point{x1, 0.0, 0.0}; }

template <class Profile>
BatteryMember member(std::size_t d, std::string label, Profile p, Regularity reg, const Point& center, double support,
                     double feature, bool radial, std::vector<double> kinks_1d = {}) {
  StandardOptions o;
  o.label = std::move(label);
  o.support_center = center;
  o.support_radius = support;
  o.feature_scale = feature;
  o.radial = radial;
  o.smoothness = reg == Regularity::cinf ? kSmoothInf : (reg == Regularity::c1 ? 1 : 0);
  if (d == 1) {
    o.breakpoints = {{center[0] - support, center[0] + support}};
    o.breakpoints[0].insert(o.breakpoints[0].end(), kinks_1d.begin(), kinks_1d.end());
  } else if (!kinks_1d.empty()) {
    // the cone point at the origin: grade the cells down to it
    o.extra_features.push_back({Point{}, constant_level(1e-4), false});
  }
  auto fam = standard_family(d, p, std::move(o));
  std::array<double, kMaxDim> origin{};
  const double v0 = fam(0, std::span<const double>(origin.data(), d));
  const int weak = reg == Regularity::c0 ? 1 : 2;
  return BatteryMember{fam, reg, weak, v0};
}

inline std::vector<BatteryMember> all_members(std::size_t d) {
  using R = Regularity;
  std::vector<BatteryMember> m;
  m.push_back(member(d, "bump_r1", Bump{}, R::cinf, Point{}, 1.0, 0.25, true));
  m.push_back(member(d, "bump_r2", Bump{Point{}, 2.0}, R::cinf, Point{}, 2.0, 0.5, true));
  m.push_back(member(d, "bump_r0.5", Bump{Point{}, 0.5}, R::cinf, Point{}, 0.5, 0.125, true));
  m.push_back(member(d, "bump_shift+0.5", Bump{shifted(0.5), 1.0}, R::cinf, shifted(0.5), 1.0, 0.25, false));
  m.push_back(member(d, "bump_shift-0.75_r0.5", Bump{shifted(-0.75), 0.5}, R::cinf, shifted(-0.75), 0.5, 0.125,
                     false));
  m.push_back(member(d, "bump_x_poly", BumpPoly{}, R::cinf, Point{}, 1.0, 0.25, false));
  m.push_back(member(d, "bump_x_cos4", BumpCos{}, R::cinf, Point{}, 1.0, 0.2, false));
  m.push_back(member(d, "bump_r1.5_x_sin3", BumpSin{}, R::cinf, Point{}, 1.5, 0.25, false));

  m.push_back(member(d, "quartic_r1", Quartic{}, R::c1, Point{}, 1.0, 0.25, true));
  m.push_back(member(d, "quartic_r2_tilt", QuarticTilt{}, R::c1, Point{}, 2.0, 0.5, false));
  m.push_back(member(d, "quartic_shift+0.25", Quartic{shifted(0.25), 1.0}, R::c1, shifted(0.25), 1.0, 0.25, false));
  m.push_back(member(d, "quartic_x_cos2", QuarticCos{}, R::c1, Point{}, 1.0, 0.25, false));

  m.push_back(member(d, "kink_half_r1", Kink{0.5, 1.0, 0.0}, R::c0, Point{}, 1.0, 0.25, true, {0.0}));
  m.push_back(member(d, "kink_r2", Kink{1.0, 2.0, 0.0}, R::c0, Point{}, 2.0, 0.5, true, {0.0}));
  m.push_back(member(d, "kink_r2_tilt", Kink{1.0, 2.0, 0.25}, R::c0, Point{}, 2.0, 0.5, false, {0.0}));
  return m;
}

}  // namespace battery_detail

/// Members at least as regular as `cls`: C0 → 15, C1c → 12, Cinf_c → 8.
inline TestBattery make_battery(std::size_t d, Regularity cls) {
  require(d >= 1 && d <= kMaxDim, ErrorKind::invalid_argument, "battery dimension must be 1..3");
  TestBattery b;
  b.dim = d;
  b.regularity = cls;
  for (auto& m : battery_detail::all_members(d))
    if (static_cast<int>(m.regularity) >= static_cast<int>(cls)) b.members.push_back(std::move(m));
  return b;
}

/// The member with derivatives allowed up to its weak order. Beyond the
/// classical smoothness they are piecewise, with breakpoints at the kinks.
inline SmoothFamily weak_view(const BatteryMember& m) {
  if (m.phi.smoothness() == kSmoothInf || m.phi.smoothness() >= m.weak_order) return m.phi;
  FamilyParts p = m.phi.parts();
  p.smoothness = m.weak_order;
  return SmoothFamily(std::move(p));
}

/// sup |∂^α φ| over |α| = j, for j = 0..weak_order, by dense sampling of the
/// support box (1-D: 4001 points, 2-D: 201², 3-D: 61³).
inline std::vector<double> sampled_sup_norms(const BatteryMember& m) {
  const std::size_t d = m.phi.dim();
  const int n = d == 1 ? 4001 : (d == 2 ? 201 : 61);
  const double R = m.phi.support_radius(0);
  const Point& c = m.phi.support_center();
  std::vector<double> sup(m.weak_order + 1, 0.0);
  const auto alphas = multi_indices_up_to(d, m.weak_order);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  std::array<double, kMaxDim> x{};
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t;
    for (std::size_t i = 0; i < d; ++i) {
      // offset by a fraction of a step so no sample lands on a kink
      x[i] = c[i] - R + (2.0 * R) * ((rem % n) + 0.5) / n;
      rem /= n;
    }
    std::span<const double> xs(x.data(), d);
    for (const auto& a : alphas) {
      const double v = std::abs(m.phi.partial(0, xs, a));
      sup[a.order()] = std::max(sup[a.order()], v);
    }
  }
  return sup;
}

}  // namespace gfc
