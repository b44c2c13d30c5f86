#pragma once

// Quadrature machinery: Gauss rules, an adaptive Gauss-Kronrod wrapper, and
// node-set builders for composite integration over boxes (graded towards
// point features) and balls (radial x angular product rules).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gfc/error.hpp"
#include "gfc/multi_index.hpp"

namespace gfc {

using Point = std::array<double, kMaxDim>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rule1D {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

namespace detail {

inline Rule1D compute_gauss_legendre(int n) {
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

// Physicists' Hermite rule (weight e^{-x^2}).
inline Rule1D compute_gauss_hermite(int n) {
  Rule1D r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * r.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * r.nodes[1];
    else
      z = 2.0 * z - r.nodes[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    r.nodes[i] = z;
    r.nodes[n - 1 - i] = -z;
    r.weights[i] = 2.0 / (pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  std::reverse(r.nodes.begin(), r.nodes.end());
  std::reverse(r.weights.begin(), r.weights.end());
  return r;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1]; cached, thread-safe.
inline const Rule1D& gauss_legendre(int n) {
  require(n >= 1 && n <= 128, ErrorKind::invalid_argument, "Gauss-Legendre order must be 1..128");
  static std::array<Rule1D, 129> cache;
  static std::array<std::once_flag, 129> flags;
  std::call_once(flags[n], [n] { cache[n] = detail::compute_gauss_legendre(n); });
  return cache[n];
}

/// n-point Gauss-Hermite rule for ∫ e^{-x²} g(x) dx; cached, thread-safe.
inline const Rule1D& gauss_hermite(int n) {
  require(n >= 1 && n <= 128, ErrorKind::invalid_argument, "Gauss-Hermite order must be 1..128");
  static std::array<Rule1D, 129> cache;
  static std::array<std::once_flag, 129> flags;
  std::call_once(flags[n], [n] { cache[n] = detail::compute_gauss_hermite(n); });
  return cache[n];
}

/// Truncated tanh-sinh rule on (-1, 1) with step h: nodes cluster double
/// exponentially at the endpoints. Cached per step; thread-safe.
inline const Rule1D& tanh_sinh_rule(double h) {
  require(h > 0.0 && h <= 1.0, ErrorKind::invalid_argument, "tanh-sinh step must be in (0, 1]");
  static std::mutex mu;
  static std::map<double, Rule1D> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(h);
  if (it != cache.end()) return it->second;
  Rule1D r;
  const int n = static_cast<int>(std::ceil(3.2 / h));
  for (int j = -n; j <= n; ++j) {
    const double t = j * h;
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double x = std::tanh(u);
    const double w = h * 0.5 * std::numbers::pi * std::cosh(t) / (std::cosh(u) * std::cosh(u));
    if (std::abs(x) >= 1.0 || w < 1e-20) continue;
    r.nodes.push_back(x);
    r.weights.push_back(w);
  }
  return cache.emplace(h, std::move(r)).first->second;
}

/// ∫_a^b f with an n-point Gauss-Legendre rule on each of `cells` equal cells.
template <class F>
double composite_gauss(F&& f, double a, double b, int cells, int n) {
  const Rule1D& rule = gauss_legendre(n);
  const double h = (b - a) / cells;
  double sum = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double mid = a + (c + 0.5) * h;
    double cell = 0.0;
    for (int i = 0; i < n; ++i) cell += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    sum += 0.5 * h * cell;
  }
  return sum;
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b].
template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double tol = 1e-13, unsigned max_depth = 30) {
  AdaptiveResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::function<double(double)>(f), a, b, max_depth, tol, &r.error);
  return r;
}

// ---------------------------------------------------------------------------
// Composite node sets

enum class QuadRule { midpoint, trapezoid, gauss_legendre };

/// A point of the integrand where resolution is needed. Uniform features
/// (e.g. oscillation everywhere) demand their resolution on the whole domain.
struct Feature {
  Point center{};
  double scale = 1.0;
  bool uniform = false;
};

struct Box {
  std::size_t dim = 1;
  Point lo{};
  Point hi{};
};

/// Flattened quadrature nodes. `group` ties nodes sharing a radius on radial sets.
struct NodeSet {
  std::size_t dim = 1;
  std::vector<double> points;   // size() * dim coordinates
  std::vector<double> weights;
  std::vector<std::size_t> group;
  std::vector<double> group_radius;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }
};

struct NodeSetPair {
  NodeSet primary;
  NodeSet companion;  // lower-order rule on the same cells, for error estimates
};

struct GradingOptions {
  double cells_per_feature = 8.0;  // cells across one feature length
  double grading = 0.5;            // far-field cell size / distance to the feature
  std::size_t max_cells = 4'000'000;
};

namespace detail {

inline std::pair<Rule1D, Rule1D> rules_for(QuadRule rule, int order) {
  switch (rule) {
    case QuadRule::midpoint:
      return {Rule1D{{0.0}, {2.0}}, Rule1D{{-1.0, 1.0}, {1.0, 1.0}}};
    case QuadRule::trapezoid:
      return {Rule1D{{-1.0, 1.0}, {1.0, 1.0}}, Rule1D{{0.0}, {2.0}}};
    case QuadRule::gauss_legendre:
      break;
  }
  int lo = order > 1 ? order - 1 : 2;
  return {gauss_legendre(order), gauss_legendre(lo)};
}

inline double box_distance(const Box& b, const Point& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.dim; ++i) {
    double d = 0.0;
    if (c[i] < b.lo[i])
      d = b.lo[i] - c[i];
    else if (c[i] > b.hi[i])
      d = c[i] - b.hi[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double box_size(const Box& b) {
  double h = 0.0;
  for (std::size_t i = 0; i < b.dim; ++i) h = std::max(h, b.hi[i] - b.lo[i]);
  return h;
}

inline double required_size(const Box& b, std::span<const Feature> features, const GradingOptions& g) {
  double req = kInf;
  for (const Feature& f : features) {
    const double fine = f.scale / g.cells_per_feature;
    if (f.uniform) {
      req = std::min(req, fine);
    } else {
      const double dist = box_distance(b, f.center) - f.scale;
      req = std::min(req, std::max(fine, g.grading * dist));
    }
  }
  return req;
}

inline void append_cell_nodes(const Box& cell, const Rule1D& rule, NodeSet& out) {
  const std::size_t d = cell.dim;
  const std::size_t n = rule.nodes.size();
  std::array<double, kMaxDim> mid{}, half{};
  for (std::size_t i = 0; i < d; ++i) {
    mid[i] = 0.5 * (cell.lo[i] + cell.hi[i]);
    half[i] = 0.5 * (cell.hi[i] - cell.lo[i]);
  }
  std::array<std::size_t, kMaxDim> idx{};
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= n;
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t;
    double w = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      idx[i] = rem % n;
      rem /= n;
      out.points.push_back(mid[i] + half[i] * rule.nodes[idx[i]]);
      w *= half[i] * rule.weights[idx[i]];
    }
    out.weights.push_back(w);
  }
}

}  // namespace detail

/// Leaves of a graded dyadic subdivision of `box`. Breakpoints (per axis) are
/// always cell boundaries, so kinks placed on them are integrated exactly.
inline std::vector<Box> graded_cells(const Box& box, std::span<const std::vector<double>> breakpoints,
                                     std::span<const Feature> features, const GradingOptions& g) {
  const std::size_t d = box.dim;
  std::array<std::vector<double>, kMaxDim> cuts;
  for (std::size_t i = 0; i < d; ++i) {
    cuts[i] = {box.lo[i], box.hi[i]};
    if (i < breakpoints.size())
      for (double b : breakpoints[i])
        if (b > box.lo[i] && b < box.hi[i]) cuts[i].push_back(b);
    std::sort(cuts[i].begin(), cuts[i].end());
    cuts[i].erase(std::unique(cuts[i].begin(), cuts[i].end()), cuts[i].end());
  }

  std::vector<Box> stack;
  std::array<std::size_t, kMaxDim> counts{};
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    counts[i] = cuts[i].size() - 1;
    total *= counts[i];
  }
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t;
    Box b{d, {}, {}};
    bool empty = false;
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t k = rem % counts[i];
      rem /= counts[i];
      b.lo[i] = cuts[i][k];
      b.hi[i] = cuts[i][k + 1];
      if (!(b.hi[i] > b.lo[i])) empty = true;
    }
    if (!empty) stack.push_back(b);
  }

  std::vector<Box> leaves;
  while (!stack.empty()) {
    Box b = stack.back();
    stack.pop_back();
    const double req = detail::required_size(b, features, g);
    if (detail::box_size(b) <= req) {
      leaves.push_back(b);
      require(leaves.size() <= g.max_cells, ErrorKind::resolution_too_coarse,
              "graded quadrature exceeds its cell budget");
      continue;
    }
    // bisect every axis that is longer than the requirement
    std::array<int, kMaxDim> split{};
    std::size_t nsplit = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (b.hi[i] - b.lo[i] > req) split[nsplit++] = static_cast<int>(i);
    const std::size_t children = std::size_t{1} << nsplit;
    for (std::size_t c = 0; c < children; ++c) {
      Box ch = b;
      for (std::size_t s = 0; s < nsplit; ++s) {
        const int ax = split[s];
        const double m = 0.5 * (b.lo[ax] + b.hi[ax]);
        if (c & (std::size_t{1} << s))
          ch.lo[ax] = m;
        else
          ch.hi[ax] = m;
      }
      stack.push_back(ch);
    }
    require(stack.size() + leaves.size() <= g.max_cells, ErrorKind::resolution_too_coarse,
            "graded quadrature exceeds its cell budget");
  }
  return leaves;
}

inline NodeSetPair box_nodes(const Box& box, std::span<const std::vector<double>> breakpoints,
                             std::span<const Feature> features, const GradingOptions& g, QuadRule rule,
                             int order) {
  const auto cells = graded_cells(box, breakpoints, features, g);
  const auto [hi, lo] = detail::rules_for(rule, order);
  NodeSetPair out;
  out.primary.dim = out.companion.dim = box.dim;
  for (const Box& c : cells) {
    detail::append_cell_nodes(c, hi, out.primary);
    detail::append_cell_nodes(c, lo, out.companion);
  }
  return out;
}

/// Angular resolution used by radial node sets.
struct AngularOptions {
  int circle_points = 128;  // d = 2: trapezoid in θ
  int polar_points = 32;    // d = 3: Gauss-Legendre in cos θ
  int azimuth_points = 64;  // d = 3: trapezoid in φ
};

/// Nodes for ∫_{|x|<r_max} g over a ball centred at `origin` in spherical
/// coordinates; radial cells are graded towards the centre with cell size
/// proportional to the distance from it.
inline NodeSetPair radial_nodes(std::size_t dim, const Point& origin, double r_max, std::span<const double> r_breaks,
                                std::span<const Feature> radial_features, const GradingOptions& g, QuadRule rule,
                                int order, const AngularOptions& ang = {}) {
  require(dim >= 2 && dim <= 3, ErrorKind::invalid_argument, "radial node sets need d = 2 or 3");
  Box interval{1, {0.0}, {r_max}};
  std::vector<std::vector<double>> br{std::vector<double>(r_breaks.begin(), r_breaks.end())};
  const auto cells = graded_cells(interval, br, radial_features, g);
  const auto [hi, lo] = detail::rules_for(rule, order);

  struct Dir {
    Point u;
    double w;
  };
  std::vector<Dir> dirs;
  if (dim == 2) {
    const int n = ang.circle_points;
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * std::numbers::pi * (k + 0.5) / n;
      dirs.push_back({{std::cos(th), std::sin(th), 0.0}, 2.0 * std::numbers::pi / n});
    }
  } else {
    const Rule1D& gl = gauss_legendre(ang.polar_points);
    const int na = ang.azimuth_points;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double ct = gl.nodes[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int k = 0; k < na; ++k) {
        const double ph = 2.0 * std::numbers::pi * (k + 0.5) / na;
        dirs.push_back({{st * std::cos(ph), st * std::sin(ph), ct}, gl.weights[i] * 2.0 * std::numbers::pi / na});
      }
    }
  }

  auto fill = [&](const Rule1D& r1, NodeSet& out) {
    out.dim = dim;
    for (const Box& c : cells) {
      const double mid = 0.5 * (c.lo[0] + c.hi[0]);
      const double half = 0.5 * (c.hi[0] - c.lo[0]);
      for (std::size_t j = 0; j < r1.nodes.size(); ++j) {
        const double r = mid + half * r1.nodes[j];
        const double wr = half * r1.weights[j] * std::pow(r, static_cast<double>(dim - 1));
        const std::size_t gid = out.group_radius.size();
        out.group_radius.push_back(r);
        for (const Dir& dir : dirs) {
          for (std::size_t i = 0; i < dim; ++i) out.points.push_back(origin[i] + r * dir.u[i]);
          out.weights.push_back(wr * dir.w);
          out.group.push_back(gid);
        }
      }
    }
  };
  NodeSetPair out;
  fill(hi, out.primary);
  fill(lo, out.companion);
  return out;
}

}  // namespace gfc
