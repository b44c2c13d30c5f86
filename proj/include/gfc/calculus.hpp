#pragma once

// Pairings, convolution, derivatives and constant-coefficient operators acting
// on smooth families.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfc/error.hpp"
#include "gfc/mollifier.hpp"
#include "gfc/pdo.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/scale_ladder.hpp"
#include "gfc/smooth_family.hpp"

namespace gfc {

/// Quadrature settings tied to a scale ladder. Near a feature of length s the
/// cell size is s / (cells_per_unit(k)·ρ_k); the invariant cells_per_unit(k) ≥
/// ceil(8/ρ_k) therefore puts at least 8 cells across every feature.
struct QuadratureSpec {
  QuadRule rule = QuadRule::gauss_legendre;
  int order = 8;
  std::size_t levels = 1;
  LevelFn reference_scale = constant_level(1.0);
  LevelFn cells_per_unit = constant_level(8.0);
  LevelFn truncation_radius;  // optional; only for pairs with no compact factor
  double grading = 0.5;
  std::size_t max_cells = 4'000'000;
  AngularOptions angular{};
  bool polar_centred = false;  // polar nodes for non-radial f compact about the origin (d >= 2)

  static QuadratureSpec for_ladder(const ScaleLadder& ladder, QuadRule rule = QuadRule::gauss_legendre,
                                   int order = 8) {
    QuadratureSpec q;
    q.rule = rule;
    q.order = order;
    q.levels = ladder.size();
    q.reference_scale = [ladder](std::size_t k) { return ladder.rho(k); };
    q.cells_per_unit = [ladder](std::size_t k) { return std::ceil(8.0 / ladder.rho(k)); };
    q.truncation_radius = [ladder](std::size_t k) { return 1.0 / std::sqrt(ladder.rho(k)); };
    return q;
  }

  /// Same ladder, uniformly finer by `factor` (used for refinement studies).
  QuadratureSpec refined(double factor) const {
    QuadratureSpec q = *this;
    q.cells_per_unit = [c = cells_per_unit, factor](std::size_t k) { return factor * c(k); };
    return q;
  }

  double cells_per_feature(std::size_t k) const { return cells_per_unit(k) * reference_scale(k); }

  void validate_level(std::size_t k) const {
    const double need = std::ceil(8.0 / reference_scale(k));
    require(cells_per_unit(k) >= need * (1.0 - 1e-12), ErrorKind::resolution_too_coarse,
            "cells_per_unit(" + std::to_string(k) + ") = " + std::to_string(cells_per_unit(k)) +
                " is below ceil(8/rho) = " + std::to_string(need));
  }

  GradingOptions grading_at(std::size_t k) const {
    return GradingOptions{cells_per_feature(k), grading, max_cells};
  }
};

struct PairLevel {
  double value = 0.0;
  double error = 0.0;  // |primary − companion rule|
  double tail = 0.0;   // bound on the truncated tail (0 when a factor is compact)
};

using PairSequence = std::vector<PairLevel>;

inline std::vector<double> values_of(const PairSequence& s) {
  std::vector<double> v;
  for (const auto& p : s) v.push_back(p.value);
  return v;
}

namespace detail {

inline std::size_t level_count(const QuadratureSpec& q, const SmoothFamily& f) {
  if (f.ladder()) {
    require(f.ladder()->size() == q.levels, ErrorKind::invalid_argument,
            "quadrature spec and family '" + f.label() + "' disagree on the number of levels");
    return f.ladder()->size();
  }
  return q.levels;
}

inline double center_norm(const Point& c, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += c[i] * c[i];
  return std::sqrt(s);
}

inline Box ball_box(const Point& c, double r, std::size_t d) {
  Box b{d, {}, {}};
  for (std::size_t i = 0; i < d; ++i) {
    b.lo[i] = c[i] - r;
    b.hi[i] = c[i] + r;
  }
  return b;
}

inline std::optional<Box> intersect(const Box& a, const Box& b) {
  Box r{a.dim, {}, {}};
  for (std::size_t i = 0; i < a.dim; ++i) {
    r.lo[i] = std::max(a.lo[i], b.lo[i]);
    r.hi[i] = std::min(a.hi[i], b.hi[i]);
    if (!(r.hi[i] > r.lo[i])) return std::nullopt;
  }
  return r;
}

inline Box hull(const Box& a, const Box& b) {
  Box r{a.dim, {}, {}};
  for (std::size_t i = 0; i < a.dim; ++i) {
    r.lo[i] = std::min(a.lo[i], b.lo[i]);
    r.hi[i] = std::max(a.hi[i], b.hi[i]);
  }
  return r;
}

inline void add_features(const SmoothFamily& f, std::size_t k, std::vector<Feature>& out) {
  for (const auto& ft : f.features()) out.push_back({ft.center, ft.scale(k), ft.uniform});
}

inline void add_breakpoints(const SmoothFamily& f, std::vector<std::vector<double>>& out) {
  if (out.size() < f.dim()) out.resize(f.dim());
  for (std::size_t i = 0; i < f.breakpoints().size() && i < f.dim(); ++i)
    out[i].insert(out[i].end(), f.breakpoints()[i].begin(), f.breakpoints()[i].end());
}

/// Bound on ∫_{|x|>R} |f g| from the two envelopes.
inline double tail_bound(const SmoothFamily& f, const SmoothFamily& g, std::size_t k, double R) {
  if (!f.envelope() || !g.envelope()) return kInf;
  const double area = unit_sphere_area(f.dim());
  const double d = static_cast<double>(f.dim());
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double r = R / t;
    return area * std::pow(r, d - 1.0) * f.envelope()(k, r) * g.envelope()(k, r) * R / (t * t);
  };
  // a non-decaying product is reported as an infinite tail
  const double at_far = integrand(1e-8);
  if (!std::isfinite(at_far) || at_far > 1e-6) return kInf;
  auto res = integrate_adaptive(integrand, 0.0, 1.0, 1e-10, 20);
  return std::isfinite(res.value) ? res.value + res.error : kInf;
}

}  // namespace detail

/// ∫ f_k φ_m for every battery member φ_m at every level, reusing one set of
/// nodes (and one evaluation of f) per level.
inline std::vector<PairSequence> pair_many(const SmoothFamily& f, const std::vector<SmoothFamily>& members,
                                           const QuadratureSpec& quad) {
  const std::size_t d = f.dim();
  for (const auto& m : members) {
    require(m.dim() == d, ErrorKind::dimension_mismatch, "pairing families of different dimension");
    detail::level_count(quad, m);
  }
  const std::size_t L = detail::level_count(quad, f);
  std::vector<PairSequence> out(members.size(), PairSequence(L));
  if (members.empty()) return out;

  for (std::size_t k = 0; k < L; ++k) {
    quad.validate_level(k);
    // integration domain
    std::optional<Box> member_box;
    bool all_members_compact = true;
    for (const auto& m : members) {
      if (!m.compact_at(k)) {
        all_members_compact = false;
        continue;
      }
      Box b = detail::ball_box(m.support_center(), m.support_radius(k), d);
      member_box = member_box ? detail::hull(*member_box, b) : b;
    }
    std::optional<Box> domain;
    double tail_R = 0.0;
    bool truncated = false;
    if (f.compact_at(k)) {
      if (f.support_radius(k) == 0.0) continue;  // the zero family
      Box fb = detail::ball_box(f.support_center(), f.support_radius(k), d);
      domain = (all_members_compact && member_box) ? detail::intersect(fb, *member_box) : std::optional<Box>(fb);
      if (all_members_compact && member_box && domain) {
        // a tighter domain must still contain every member's intersection with f
      }
    } else if (all_members_compact && member_box) {
      domain = member_box;
    } else {
      require(static_cast<bool>(quad.truncation_radius), ErrorKind::unbounded_integrand,
              "neither '" + f.label() + "' nor the test functions have finite support and no truncation radius is set");
      tail_R = quad.truncation_radius(k);
      domain = detail::ball_box(Point{}, tail_R, d);
      truncated = true;
    }
    if (!domain) continue;

    std::vector<Feature> feats;
    detail::add_features(f, k, feats);
    for (const auto& m : members) detail::add_features(m, k, feats);
    std::vector<std::vector<double>> breaks(d);
    detail::add_breakpoints(f, breaks);
    for (const auto& m : members) detail::add_breakpoints(m, breaks);
    for (std::size_t i = 0; i < d; ++i) breaks[i].push_back(0.0);

    const GradingOptions g = quad.grading_at(k);
    const bool centred = d >= 2 && detail::center_norm(f.support_center(), d) == 0.0;
    const bool radial_path = centred && f.radial();
    // non-radial but compact about the origin: polar nodes, f sampled at every node
    const bool polar_path = !radial_path && centred && quad.polar_centred && f.compact_at(k);
    NodeSetPair nodes;
    if (polar_path) {
      const double r_max = f.support_radius(k);
      std::vector<Feature> rf;
      double s_min = kInf;
      std::vector<Feature> own;
      detail::add_features(f, k, own);
      for (const auto& ft : own) s_min = std::min(s_min, ft.scale);
      for (const auto& ft : feats) {
        // a point feature at the pole is angle independent
        const bool at_pole = !ft.uniform && detail::center_norm(ft.center, d) == 0.0;
        if (!at_pole) s_min = std::min(s_min, ft.scale);
        // and a cone point there is smooth in polar coordinates
        if (at_pole && ft.scale < r_max / 8.0) continue;
        if (ft.uniform)
          rf.push_back({Point{}, ft.scale, true});
        else
          rf.push_back({Point{detail::center_norm(ft.center, d)}, ft.scale, false});
      }
      const double waves = r_max / s_min;
      AngularOptions ang = quad.angular;
      ang.circle_points = 4 * static_cast<int>(std::ceil((16.0 + 8.0 * std::numbers::pi * waves) / 4.0));
      ang.polar_points = static_cast<int>(std::ceil(8.0 + 4.0 * std::numbers::pi * waves));
      ang.azimuth_points = 2 * ang.polar_points;
      AngularOptions coarse = ang;
      coarse.circle_points = 4 * ((3 * ang.circle_points / 4 + 3) / 4);
      coarse.polar_points = (3 * ang.polar_points) / 4;
      coarse.azimuth_points = 2 * coarse.polar_points;
      nodes.primary = radial_nodes(d, Point{}, r_max, {}, rf, g, quad.rule, quad.order, ang).primary;
      nodes.companion = radial_nodes(d, Point{}, r_max, {}, rf, g, quad.rule, quad.order, coarse).companion;
    } else if (radial_path) {
      double r_max = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        r_max = std::max({r_max, std::abs(domain->lo[i]), std::abs(domain->hi[i])});
      r_max *= std::sqrt(static_cast<double>(d));
      if (f.compact_at(k)) r_max = std::min(r_max, f.support_radius(k));
      if (truncated) r_max = tail_R;
      std::vector<Feature> rf;
      for (const auto& ft : feats) {
        if (ft.uniform)
          rf.push_back({Point{}, ft.scale, true});
        else
          rf.push_back({Point{detail::center_norm(ft.center, d)}, ft.scale, false});
      }
      std::vector<double> rbreaks;
      for (const auto& m : members)
        if (m.compact_at(k) && detail::center_norm(m.support_center(), d) == 0.0)
          rbreaks.push_back(m.support_radius(k));
      // angular detail needed on a sphere of radius r_max ~ r_max / (smallest feature)
      double s_min = kInf;
      for (const auto& ft : rf) s_min = std::min(s_min, ft.uniform ? ft.scale : kInf);
      const double waves = std::isfinite(s_min) ? r_max / s_min : 0.0;
      AngularOptions ang = quad.angular;
      ang.circle_points = std::min(ang.circle_points, 4 * static_cast<int>(std::ceil((16.0 + 8.0 * std::numbers::pi * waves) / 4.0)));
      ang.polar_points = std::min(ang.polar_points, static_cast<int>(std::ceil(8.0 + 4.0 * std::numbers::pi * waves)));
      ang.azimuth_points = std::min(ang.azimuth_points, 2 * ang.polar_points);
      nodes = radial_nodes(d, Point{}, r_max, rbreaks, rf, g, quad.rule, quad.order, ang);
    } else {
      nodes = box_nodes(*domain, breaks, feats, g, quad.rule, quad.order);
    }

    auto integrate_set = [&](const NodeSet& set, std::vector<double>& sums) {
      sums.assign(members.size(), 0.0);
      std::vector<double> fv(set.size());
      if (radial_path) {
        std::vector<double> gv(set.group_radius.size());
        std::array<double, kMaxDim> p{};
        for (std::size_t gi = 0; gi < gv.size(); ++gi) {
          p = {};
          p[0] = set.group_radius[gi];
          gv[gi] = f(k, std::span<const double>(p.data(), d));
        }
        for (std::size_t i = 0; i < set.size(); ++i) fv[i] = gv[set.group[i]];
      } else {
        for (std::size_t i = 0; i < set.size(); ++i) fv[i] = f(k, set.point(i));
      }
      for (std::size_t m = 0; m < members.size(); ++m) {
        const auto& mem = members[m];
        const bool mc = mem.compact_at(k);
        const double mr = mc ? mem.support_radius(k) : kInf;
        double s = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
          if (fv[i] == 0.0) continue;
          auto x = set.point(i);
          if (mc) {
            double dist2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) dist2 += (x[j] - mem.support_center()[j]) * (x[j] - mem.support_center()[j]);
            if (dist2 > mr * mr) continue;
          }
          s += set.weights[i] * fv[i] * mem(k, x);
        }
        sums[m] = s;
      }
    };
    std::vector<double> hi, lo;
    integrate_set(nodes.primary, hi);
    integrate_set(nodes.companion, lo);
    for (std::size_t m = 0; m < members.size(); ++m) {
      out[m][k].value = hi[m];
      out[m][k].error = std::abs(hi[m] - lo[m]);
      out[m][k].tail = truncated ? detail::tail_bound(f, members[m], k, tail_R) : 0.0;
    }
  }
  return out;
}

/// s_k ≈ ∫ f_k φ_k with a per-level quadrature error estimate.
inline PairSequence pair(const SmoothFamily& f, const SmoothFamily& phi, const QuadratureSpec& quad) {
  return pair_many(f, {phi}, quad).front();
}

// ---------------------------------------------------------------------------

/// ∂^α f, answered by the family's own derivative closure.
inline SmoothFamily derivative(const SmoothFamily& f, const MultiIndex& alpha) {
  require(alpha.dim() == f.dim(), ErrorKind::dimension_mismatch, "multi-index dimension differs from the family's");
  require(f.smoothness() == kSmoothInf || alpha.order() <= f.smoothness(), ErrorKind::smoothness_exceeded,
          "derivative of order " + std::to_string(alpha.order()) + " exceeds the declared smoothness of '" +
              f.label() + "'");
  if (alpha.order() == 0) return f;
  FamilyParts p = f.parts();
  p.eval = [f, alpha](std::size_t k, std::span<const double> x, const MultiIndex& beta) {
    return f.partial(k, x, alpha + beta);
  };
  if (p.smoothness != kSmoothInf) p.smoothness -= alpha.order();
  p.label = "d" + alpha.to_string() + "[" + f.label() + "]";
  p.radial = false;
  p.envelope = nullptr;
  p.tags.clear();
  p.combo = nullptr;
  p.convolver = nullptr;
  return SmoothFamily(std::move(p));
}

/// Σ c_α ∂^α f, evaluated pointwise.
inline SmoothFamily apply_pdo(const PDOperator& P, const SmoothFamily& f) {
  require(P.dimension() == f.dim(), ErrorKind::dimension_mismatch, "operator and family dimensions differ");
  require(f.smoothness() == kSmoothInf || P.order() <= f.smoothness(), ErrorKind::smoothness_exceeded,
          "operator order exceeds the declared smoothness of '" + f.label() + "'");
  FamilyParts p = f.parts();
  std::vector<std::pair<MultiIndex, double>> terms(P.terms().begin(), P.terms().end());
  p.eval = [f, terms](std::size_t k, std::span<const double> x, const MultiIndex& beta) {
    if (f.parts().combo) {
      Terms shifted;
      for (const auto& [alpha, c] : terms) shifted.emplace_back(alpha + beta, c);
      f.check_level(k);
      return f.parts().combo(k, x, shifted);
    }
    double s = 0.0;
    for (const auto& [alpha, c] : terms) s += c * f.partial(k, x, alpha + beta);
    return s;
  };
  p.combo = nullptr;
  p.convolver = nullptr;
  if (p.smoothness != kSmoothInf) p.smoothness -= P.order();
  p.label = "P[" + f.label() + "]";
  p.radial = f.radial() && P.rotation_invariant();
  p.envelope = nullptr;
  p.tags.clear();
  return SmoothFamily(std::move(p));
}

/// f restricted to the ball of radius R_k about `center`, after checking at
/// probe points outside the ball that f is negligible there (relative to
/// |f_k(center)|). Lets pairings of families known to be compactly supported,
/// such as P(∂)E_ρ, use the small domain.
inline SmoothFamily with_certified_support(const SmoothFamily& f, const Point& center, LevelFn radius,
                                           double rel_tol = 1e-6) {
  const std::size_t d = f.dim();
  const std::size_t L = f.ladder() ? f.ladder()->size() : 1;
  std::vector<Point> dirs;
  for (std::size_t i = 0; i < d; ++i) {
    Point u{}, v{};
    u[i] = 1.0;
    v[i] = -1.0;
    dirs.push_back(u);
    dirs.push_back(v);
  }
  {
    Point u{};
    for (std::size_t i = 0; i < d; ++i) u[i] = (i % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(d));
    dirs.push_back(u);
  }
  for (std::size_t k = 0; k < L; ++k) {
    const double R = radius(k);
    require(R > 0.0 && std::isfinite(R), ErrorKind::invalid_argument, "certified support radius must be positive");
    const double peak = std::abs(f(k, std::span<const double>(center.data(), d)));
    const double scale = std::max(peak, 1e-300);
    for (const Point& u : dirs)
      for (double m : {1.02, 1.3, 2.0}) {
        Point x{};
        for (std::size_t i = 0; i < d; ++i) x[i] = center[i] + m * R * u[i];
        const double v = std::abs(f(k, std::span<const double>(x.data(), d)));
        require(v <= rel_tol * scale, ErrorKind::support_violation,
                "'" + f.label() + "' is " + std::to_string(v) + " at distance " + std::to_string(m) +
                    "·R outside its claimed support at level " + std::to_string(k));
      }
  }
  FamilyParts p = f.parts();
  p.support_center = center;
  p.support_radius = radius;
  p.eval = [f, center, radius, d](std::size_t k, std::span<const double> x, const MultiIndex& a) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
    const double R = radius(k);
    if (r2 >= R * R) return 0.0;
    return f.partial(k, x, a);
  };
  p.combo = nullptr;
  p.convolver = nullptr;
  p.envelope = nullptr;
  return SmoothFamily(std::move(p));
}

// ---------------------------------------------------------------------------

namespace detail {

inline double min_scale(const SmoothFamily& f, std::size_t k) {
  double s = kInf;
  for (const auto& ft : f.features()) s = std::min(s, ft.scale(k));
  return s;
}

}  // namespace detail

/// (f ⋆ g)_k(x) = ∫ f_k(x − y) g_k(y) dy, integrated over the support of the
/// compact factor. Derivatives are moved onto a compactly supported factor.
inline SmoothFamily convolve(const SmoothFamily& f, const SmoothFamily& g, const QuadratureSpec& quad) {
  require(f.dim() == g.dim(), ErrorKind::dimension_mismatch, "convolving families of different dimension");
  const std::size_t d = f.dim();
  FamilyParts p;
  p.dim = d;
  p.ladder = common_ladder(f, g);
  const std::size_t L = p.ladder ? p.ladder->size() : quad.levels;
  if (p.ladder)
    require(L == quad.levels, ErrorKind::invalid_argument, "quadrature spec and families disagree on level count");
  bool both_compact = true;
  for (std::size_t k = 0; k < L; ++k) {
    require(f.compact_at(k) || g.compact_at(k), ErrorKind::neither_compact,
            "convolution of '" + f.label() + "' and '" + g.label() + "' needs a compact factor at every level");
    both_compact = both_compact && f.compact_at(k) && g.compact_at(k);
  }

  p.eval = [f, g, quad, d](std::size_t k, std::span<const double> x, const MultiIndex& alpha) -> double {
    // the factor we integrate over (its support is the domain)
    const bool f_ok = f.compact_at(k);
    const bool g_ok = g.compact_at(k);
    if (!f_ok && f.parts().convolver) return f.parts().convolver(k, x, Terms{{alpha, 1.0}}, g);
    if (!g_ok && g.parts().convolver) return g.parts().convolver(k, x, Terms{{alpha, 1.0}}, f);
    const SmoothFamily* inner = nullptr;  // y ↦ inner(y)
    const SmoothFamily* outer = nullptr;  // y ↦ outer(x − y)
    if (f_ok && g_ok)
      inner = detail::min_scale(g, k) >= detail::min_scale(f, k) ? &g : &f;
    else
      inner = g_ok ? &g : &f;
    outer = inner == &g ? &f : &g;
    // derivatives on the inner factor when it can take them, otherwise on the outer one
    MultiIndex on_inner = alpha, on_outer(d);
    const bool inner_smooth = inner->smoothness() == kSmoothInf || inner->smoothness() >= alpha.order();
    if (!inner_smooth) std::swap(on_inner, on_outer);

    const double r = inner->support_radius(k);
    if (r == 0.0) return 0.0;
    Box box = detail::ball_box(inner->support_center(), r, d);
    std::vector<Feature> feats;
    detail::add_features(*inner, k, feats);
    for (const auto& ft : outer->features()) {
      Feature fe{ft.center, ft.scale(k), ft.uniform};
      for (std::size_t i = 0; i < d; ++i) fe.center[i] = x[i] - ft.center[i];
      feats.push_back(fe);
    }
    std::vector<std::vector<double>> breaks(d);
    detail::add_breakpoints(*inner, breaks);
    for (std::size_t i = 0; i < outer->breakpoints().size() && i < d; ++i)
      for (double b : outer->breakpoints()[i]) breaks[i].push_back(x[i] - b);

    const auto cells = graded_cells(box, breaks, feats, quad.grading_at(k));
    const auto [rule, unused] = detail::rules_for(quad.rule, quad.order);
    (void)unused;
    NodeSet set;
    set.dim = d;
    for (const Box& c : cells) detail::append_cell_nodes(c, rule, set);
    const double r2 = r * r;
    double sum = 0.0;
    std::array<double, kMaxDim> xm{};
    for (std::size_t i = 0; i < set.size(); ++i) {
      auto y = set.point(i);
      double dist2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) dist2 += (y[j] - inner->support_center()[j]) * (y[j] - inner->support_center()[j]);
      if (dist2 > r2) continue;
      const double a = inner->partial(k, y, on_inner);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) xm[j] = x[j] - y[j];
      sum += set.weights[i] * a * outer->partial(k, std::span<const double>(xm.data(), d), on_outer);
    }
    return sum;
  };

  // a kernel with its own convolver takes a whole operator in one pass
  const SmoothFamily* kernel = f.parts().convolver ? &f : (g.parts().convolver ? &g : nullptr);
  if (kernel) {
    const SmoothFamily& other = kernel == &f ? g : f;
    bool other_compact = true;
    for (std::size_t k = 0; k < L; ++k) other_compact = other_compact && other.compact_at(k) && !kernel->compact_at(k);
    if (other_compact)
      p.combo = [conv = kernel->parts().convolver, other](std::size_t k, std::span<const double> x, const Terms& t) {
        return conv(k, x, t, other);
      };
  }

  if (both_compact) {
    Point c{};
    for (std::size_t i = 0; i < d; ++i) c[i] = f.support_center()[i] + g.support_center()[i];
    p.support_center = c;
    p.support_radius = [f, g](std::size_t k) { return f.support_radius(k) + g.support_radius(k); };
  } else {
    p.support_radius = constant_level(kInf);
  }
  p.smoothness = std::max(f.smoothness(), g.smoothness());
  p.label = f.label() + " * " + g.label();
  for (const auto& a : f.features())
    for (const auto& b : g.features()) {
      FamilyFeature fe;
      fe.uniform = a.uniform || b.uniform;
      for (std::size_t i = 0; i < d; ++i) fe.center[i] = a.center[i] + b.center[i];
      fe.scale = [sa = a.scale, sb = b.scale](std::size_t k) { return std::max(sa(k), sb(k)); };
      p.features.push_back(fe);
    }
  p.radial = f.radial() && g.radial() && detail::center_norm(f.support_center(), d) == 0.0 &&
             detail::center_norm(g.support_center(), d) == 0.0;
  return SmoothFamily(std::move(p));
}

}  // namespace gfc
