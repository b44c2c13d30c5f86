#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gfc/dual.hpp"
#include "gfc/error.hpp"
#include "gfc/multi_index.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/scale_ladder.hpp"

namespace gfc {

inline constexpr int kSmoothInf = INT_MAX;

/// ∂^α f_k(x). Every family answers derivative queries natively.
using EvalFn = std::function<double(std::size_t level, std::span<const double> x, const MultiIndex& alpha)>;
using LevelFn = std::function<double(std::size_t level)>;
/// Bound on |f_k(x)| over |x| ≥ r (decay for kernels, growth for tempered families).
using EnvelopeFn = std::function<double(std::size_t level, double r)>;

class SmoothFamily;

using Terms = std::vector<std::pair<MultiIndex, double>>;
/// Σ c_α ∂^α f_k(x) in one pass (optional; families whose derivatives are
/// integrals use it to share quadrature nodes across terms).
using ComboFn = std::function<double(std::size_t level, std::span<const double> x, const Terms& terms)>;
/// (f_k ⋆ Σ c_α ∂^α g_k)(x) for a compactly supported g (optional; kernels
/// whose singular set is not a point supply their own convolution).
using ConvolverFn =
    std::function<double(std::size_t level, std::span<const double> x, const Terms& terms, const SmoothFamily& g)>;

/// A resolution demand of the family at a given level.
struct FamilyFeature {
  Point center{};
  LevelFn scale;
  bool uniform = false;
};

inline LevelFn constant_level(double v) {
  return [v](std::size_t) { return v; };
}

/// Parts of a SmoothFamily; assembled once, then frozen inside the family.
struct FamilyParts {
  std::size_t dim = 1;
  EvalFn eval;
  std::optional<ScaleLadder> ladder;  // absent: the family is level independent
  Point support_center{};
  LevelFn support_radius = constant_level(kInf);
  int smoothness = kSmoothInf;
  std::string label;
  std::vector<FamilyFeature> features;
  std::vector<std::vector<double>> breakpoints;
  bool radial = false;
  EnvelopeFn envelope;
  std::set<std::string> tags;
  ComboFn combo;
  ConvolverFn convolver;
};

/// A ladder-indexed family of smooth maps R^d → R. Level-independent families
/// (standard functions) accept any level index.
class SmoothFamily {
 public:
  explicit SmoothFamily(FamilyParts parts) : p_(std::move(parts)) {
    require(p_.dim >= 1 && p_.dim <= kMaxDim, ErrorKind::invalid_argument, "family dimension must be 1..3");
    require(static_cast<bool>(p_.eval), ErrorKind::invalid_argument, "family needs an evaluator");
    if (p_.features.empty()) p_.features.push_back({Point{}, constant_level(1.0), true});
  }

  std::size_t dim() const { return p_.dim; }
  const std::string& label() const { return p_.label; }
  int smoothness() const { return p_.smoothness; }
  const std::optional<ScaleLadder>& ladder() const { return p_.ladder; }
  bool level_independent() const { return !p_.ladder.has_value(); }
  std::size_t levels() const { return p_.ladder ? p_.ladder->size() : 0; }
  const Point& support_center() const { return p_.support_center; }
  double support_radius(std::size_t k) const { return p_.support_radius(k); }
  bool compact_at(std::size_t k) const { return std::isfinite(p_.support_radius(k)); }
  const std::vector<FamilyFeature>& features() const { return p_.features; }
  const std::vector<std::vector<double>>& breakpoints() const { return p_.breakpoints; }
  bool radial() const { return p_.radial; }
  const EnvelopeFn& envelope() const { return p_.envelope; }
  const std::set<std::string>& tags() const { return p_.tags; }
  bool has_tag(const std::string& t) const { return p_.tags.count(t) > 0; }
  const FamilyParts& parts() const { return p_; }

  /// Finite support at every level with a uniform bound (S-compact support).
  bool s_compact() const {
    if (!p_.ladder) return std::isfinite(p_.support_radius(0));
    double sup = 0.0;
    for (std::size_t k = 0; k < p_.ladder->size(); ++k) sup = std::max(sup, p_.support_radius(k));
    return std::isfinite(sup);
  }

  double operator()(std::size_t k, std::span<const double> x) const { return partial(k, x, MultiIndex(p_.dim)); }

  double operator()(std::size_t k, std::initializer_list<double> x) const {
    std::vector<double> v(x);
    return (*this)(k, std::span<const double>(v));
  }

  double partial(std::size_t k, std::span<const double> x, const MultiIndex& alpha) const {
    check_level(k);
    require(x.size() == p_.dim, ErrorKind::dimension_mismatch, "evaluation point has the wrong dimension");
    require(alpha.dim() == p_.dim, ErrorKind::dimension_mismatch, "multi-index has the wrong dimension");
    return p_.eval(k, x, alpha);
  }

  void check_level(std::size_t k) const {
    if (p_.ladder)
      require(k < p_.ladder->size(), ErrorKind::invalid_argument,
              "level " + std::to_string(k) + " outside the family's ladder");
  }

  /// Feature scale ρ-reference at level k (ladder scale, or 1 for standard families).
  double reference_scale(std::size_t k) const { return p_.ladder ? p_.ladder->rho(k) : 1.0; }

  SmoothFamily relabeled(std::string label) const {
    FamilyParts q = p_;
    q.label = std::move(label);
    return SmoothFamily(std::move(q));
  }

 private:
  FamilyParts p_;
};

/// The ladder shared by two families; level-independent families adopt the other's.
inline std::optional<ScaleLadder> common_ladder(const SmoothFamily& f, const SmoothFamily& g) {
  if (f.ladder() && g.ladder()) {
    require(*f.ladder() == *g.ladder(), ErrorKind::invalid_argument,
            "families '" + f.label() + "' and '" + g.label() + "' live on different ladders");
    return f.ladder();
  }
  return f.ladder() ? f.ladder() : g.ladder();
}

/// Evaluator for a level-indexed analytic profile: `make(k)` returns an object
/// with `template <class T> T operator()(std::span<const T>) const`.
template <class Factory>
EvalFn analytic_evaluator(Factory make) {
  return [make = std::move(make)](std::size_t k, std::span<const double> x, const MultiIndex& alpha) {
    return partial(make(k), x, alpha);
  };
}

/// Fourth-order central differences, applied axis by axis, on top of a
/// value-only function; step h supplied per level.
inline EvalFn finite_difference_evaluator(std::function<double(std::size_t, std::span<const double>)> f,
                                          LevelFn step) {
  return [f = std::move(f), step = std::move(step)](std::size_t k, std::span<const double> x,
                                                    const MultiIndex& alpha) -> double {
    std::function<double(std::span<const double>, MultiIndex)> rec = [&](std::span<const double> y,
                                                                          MultiIndex a) -> double {
      if (a.order() == 0) return f(k, y);
      std::size_t axis = 0;
      while (a[axis] == 0) ++axis;
      const MultiIndex rest = a.with_entry(axis, a[axis] - 1);
      const double h = step(k);
      require(h >= 1e3 * std::numeric_limits<double>::epsilon() * std::abs(y[axis]), ErrorKind::step_underflow,
              "finite-difference step underflows at this point");
      std::array<double, kMaxDim> z{};
      std::copy(y.begin(), y.end(), z.begin());
      std::span<const double> zs(z.data(), y.size());
      auto at = [&](double off) {
        z[axis] = y[axis] + off;
        return rec(zs, rest);
      };
      return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
    };
    return rec(x, alpha);
  };
}

// ---------------------------------------------------------------------------
// Standard (level-independent) families

struct StandardOptions {
  std::string label;
  Point support_center{};
  double support_radius = kInf;
  int smoothness = kSmoothInf;
  double feature_scale = 1.0;
  std::vector<std::vector<double>> breakpoints;
  std::vector<FamilyFeature> extra_features;
  bool radial = false;
  EnvelopeFn envelope;
};

template <class Profile>
SmoothFamily standard_family(std::size_t dim, Profile profile, StandardOptions o) {
  FamilyParts p;
  p.dim = dim;
  p.eval = [profile = std::move(profile)](std::size_t, std::span<const double> x, const MultiIndex& a) {
    return partial(profile, x, a);
  };
  p.support_center = o.support_center;
  p.support_radius = constant_level(o.support_radius);
  p.smoothness = o.smoothness;
  p.label = std::move(o.label);
  p.features.push_back({o.support_center, constant_level(o.feature_scale), true});
  for (auto& f : o.extra_features) p.features.push_back(std::move(f));
  p.breakpoints = std::move(o.breakpoints);
  p.radial = o.radial;
  p.envelope = std::move(o.envelope);
  return SmoothFamily(std::move(p));
}

/// A value-only standard function; derivatives by 4th-order finite differences.
inline SmoothFamily numeric_family(std::size_t dim, std::function<double(std::span<const double>)> fn,
                                   StandardOptions o) {
  FamilyParts p;
  p.dim = dim;
  const double h = o.feature_scale / 32.0;
  p.eval = finite_difference_evaluator([fn = std::move(fn)](std::size_t, std::span<const double> x) { return fn(x); },
                                       constant_level(h));
  p.support_center = o.support_center;
  p.support_radius = constant_level(o.support_radius);
  p.smoothness = o.smoothness;
  p.label = std::move(o.label);
  p.features.push_back({o.support_center, constant_level(o.feature_scale), true});
  p.breakpoints = std::move(o.breakpoints);
  p.radial = o.radial;
  p.envelope = std::move(o.envelope);
  return SmoothFamily(std::move(p));
}

inline SmoothFamily constant_family(std::size_t dim, double c, std::string label = {}) {
  FamilyParts p;
  p.dim = dim;
  p.eval = [c](std::size_t, std::span<const double>, const MultiIndex& a) { return a.order() == 0 ? c : 0.0; };
  p.label = label.empty() ? "constant(" + std::to_string(c) + ")" : std::move(label);
  p.radial = true;
  p.envelope = [c](std::size_t, double) { return std::abs(c); };
  if (c == 0.0) p.support_radius = constant_level(0.0);
  return SmoothFamily(std::move(p));
}

inline SmoothFamily zero_family(std::size_t dim) { return constant_family(dim, 0.0, "zero"); }

// ---------------------------------------------------------------------------
// Linear structure

/// a·f + b·g, levelwise.
inline SmoothFamily linear_combination(double a, const SmoothFamily& f, double b, const SmoothFamily& g) {
  require(f.dim() == g.dim(), ErrorKind::dimension_mismatch, "linear combination of families of different dimension");
  FamilyParts p;
  p.dim = f.dim();
  p.ladder = common_ladder(f, g);
  p.eval = [a, b, f, g](std::size_t k, std::span<const double> x, const MultiIndex& al) {
    double s = 0.0;
    if (a != 0.0) s += a * f.partial(k, x, al);
    if (b != 0.0) s += b * g.partial(k, x, al);
    return s;
  };
  const bool same_center = f.support_center() == g.support_center();
  p.support_center = same_center ? f.support_center() : Point{};
  p.support_radius = [f, g, same_center](std::size_t k) {
    if (same_center) return std::max(f.support_radius(k), g.support_radius(k));
    double r = 0.0;
    for (const SmoothFamily* h : {&f, &g}) {
      double c = 0.0;
      for (std::size_t i = 0; i < h->dim(); ++i) c += h->support_center()[i] * h->support_center()[i];
      r = std::max(r, std::sqrt(c) + h->support_radius(k));
    }
    return r;
  };
  p.smoothness = std::min(f.smoothness(), g.smoothness());
  p.label = std::to_string(a) + "*" + f.label() + " + " + std::to_string(b) + "*" + g.label();
  p.features = f.features();
  p.features.insert(p.features.end(), g.features().begin(), g.features().end());
  p.breakpoints.resize(f.dim());
  for (const SmoothFamily* h : {&f, &g})
    for (std::size_t i = 0; i < h->breakpoints().size(); ++i)
      p.breakpoints[i].insert(p.breakpoints[i].end(), h->breakpoints()[i].begin(), h->breakpoints()[i].end());
  p.radial = f.radial() && g.radial();
  if (f.envelope() && g.envelope())
    p.envelope = [a, b, ef = f.envelope(), eg = g.envelope()](std::size_t k, double r) {
      return std::abs(a) * ef(k, r) + std::abs(b) * eg(k, r);
    };
  return SmoothFamily(std::move(p));
}

inline SmoothFamily operator+(const SmoothFamily& f, const SmoothFamily& g) { return linear_combination(1, f, 1, g); }
inline SmoothFamily operator-(const SmoothFamily& f, const SmoothFamily& g) { return linear_combination(1, f, -1, g); }
inline SmoothFamily operator*(double a, const SmoothFamily& f) {
  return linear_combination(a, f, 0.0, zero_family(f.dim())).relabeled(std::to_string(a) + "*" + f.label());
}

/// c(ρ_k)·f_k: a family whose amplitude depends on the level scale.
inline SmoothFamily level_scaled(const SmoothFamily& f, const ScaleLadder& ladder, std::function<double(double)> c,
                                 std::string label) {
  if (f.ladder()) require(*f.ladder() == ladder, ErrorKind::invalid_argument, "level_scaled: ladder mismatch");
  FamilyParts p = f.parts();
  p.ladder = ladder;
  p.eval = [f, ladder, c](std::size_t k, std::span<const double> x, const MultiIndex& a) {
    return c(ladder.rho(k)) * f.partial(k, x, a);
  };
  p.label = std::move(label);
  p.combo = nullptr;
  p.convolver = nullptr;
  if (f.envelope())
    p.envelope = [ladder, c, e = f.envelope()](std::size_t k, double r) { return std::abs(c(ladder.rho(k))) * e(k, r); };
  return SmoothFamily(std::move(p));
}

}  // namespace gfc
