#pragma once

// The ≈ relations as residual tables over a ladder: pointwise C^k closeness,
// pairing closeness against the battery, delta verification, D′ membership,
// standard parts and S-continuity moduli.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gfc/battery.hpp"
#include "gfc/calculus.hpp"
#include "gfc/error.hpp"
#include "gfc/smooth_family.hpp"
#include "gfc/verdict.hpp"

namespace gfc {

/// Sample points in R^d stored flat.
struct Grid {
  std::size_t dim = 1;
  std::vector<double> coords;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  void add(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }
};

/// n points per axis on [-r, r]^d restricted to the closed ball of radius r.
/// A nonzero jitter moves each point by up to jitter·spacing, seeded.
inline Grid ball_grid(std::size_t d, double radius, int n, std::uint64_t seed = 0, double jitter = 0.0) {
  require(n >= 1 && radius > 0.0, ErrorKind::invalid_argument, "grid needs n >= 1 and a positive radius");
  Grid g;
  g.dim = d;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = n == 1 ? 0.0 : 2.0 * radius / (n - 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  std::array<double, kMaxDim> p{};
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t;
    double r2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = n == 1 ? 0.0 : -radius + h * static_cast<double>(rem % n);
      rem /= n;
      if (jitter > 0.0) p[i] += jitter * h * u(rng);
      r2 += p[i] * p[i];
    }
    if (r2 <= radius * radius * (1.0 + 1e-12)) g.add(std::span<const double>(p.data(), d));
  }
  return g;
}

inline Grid points_grid(std::size_t d, const std::vector<std::vector<double>>& pts) {
  Grid g;
  g.dim = d;
  for (const auto& p : pts) {
    require(p.size() == d, ErrorKind::dimension_mismatch, "grid point has the wrong dimension");
    g.add(p);
  }
  return g;
}

struct CompareOptions {
  Tolerance tol{};
  int points_per_axis = 41;
  std::uint64_t seed = 0;
  double jitter = 0.0;
  std::optional<ScaleLadder> ladder;  // for pairs of level-independent families
};

namespace detail {

inline ScaleLadder ladder_for(const SmoothFamily& f, const SmoothFamily& g, const std::optional<ScaleLadder>& fallback) {
  if (auto l = common_ladder(f, g)) return *l;
  return fallback ? *fallback : default_ladder();
}

inline std::string point_string(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

}  // namespace detail

/// Residual at level ℓ: max over |α| ≤ k and the grid of |∂^α f_ℓ − ∂^α g_ℓ|.
inline ApproxVerdict approx_ck(const SmoothFamily& f, const SmoothFamily& g, int k, const Grid& grid,
                               const CompareOptions& opt = {}) {
  require(f.dim() == g.dim() && grid.dim == f.dim(), ErrorKind::dimension_mismatch,
          "approx_ck: families and grid must share a dimension");
  require(grid.size() > 0, ErrorKind::invalid_argument, "approx_ck: empty grid");
  for (const auto* h : {&f, &g})
    require(h->smoothness() == kSmoothInf || k <= h->smoothness(), ErrorKind::smoothness_exceeded,
            "approx_ck: order " + std::to_string(k) + " exceeds the smoothness of '" + h->label() + "'");
  const ScaleLadder ladder = detail::ladder_for(f, g, opt.ladder);
  const auto alphas = multi_indices_up_to(f.dim(), k);
  std::vector<double> res(ladder.size(), 0.0);
  std::string witness;
  for (std::size_t l = 0; l < ladder.size(); ++l) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      auto x = grid.point(i);
      for (const auto& a : alphas) {
        const double r = std::abs(f.partial(l, x, a) - g.partial(l, x, a));
        if (r > res[l] || std::isnan(r)) {
          res[l] = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
          if (l + 1 == ladder.size()) witness = "alpha=" + a.to_string() + " at x=" + detail::point_string(x);
        }
      }
    }
  }
  return make_verdict(ladder.levels(), std::move(res), {}, opt.tol, witness);
}

/// Convenience overload: sampling grid on the ball of the given radius.
inline ApproxVerdict approx_ck(const SmoothFamily& f, const SmoothFamily& g, int k, double radius,
                               const CompareOptions& opt = {}) {
  return approx_ck(f, g, k, ball_grid(f.dim(), radius, opt.points_per_axis, opt.seed, opt.jitter), opt);
}

/// Residual at level ℓ: max over the battery of |∫f_ℓφ − ∫g_ℓφ|.
inline ApproxVerdict approx_dprime(const SmoothFamily& f, const SmoothFamily& g, const TestBattery& battery,
                                   const QuadratureSpec& quad, const Tolerance& tol = {}) {
  require(f.dim() == battery.dim && g.dim() == battery.dim, ErrorKind::dimension_mismatch,
          "approx_dprime: battery dimension differs");
  const auto phis = battery.families();
  const auto pf = pair_many(f, phis, quad);
  const auto pg = pair_many(g, phis, quad);
  const std::size_t L = quad.levels;
  std::vector<double> res(L, 0.0), err(L, 0.0);
  ApproxVerdict v;
  std::size_t worst = 0;
  double worst_val = -1.0;
  std::vector<MemberResiduals> members;
  for (std::size_t m = 0; m < phis.size(); ++m) {
    MemberResiduals mr{phis[m].label(), std::vector<double>(L), 0.0};
    for (std::size_t l = 0; l < L; ++l) {
      const double r = std::abs(pf[m][l].value - pg[m][l].value);
      mr.residuals[l] = r;
      res[l] = std::max(res[l], r);
      err[l] = std::max(err[l], pf[m][l].error + pg[m][l].error + pf[m][l].tail + pg[m][l].tail);
    }
    if (mr.residuals.back() > worst_val) {
      worst_val = mr.residuals.back();
      worst = m;
    }
    members.push_back(std::move(mr));
  }
  const ScaleLadder ladder = detail::ladder_for(f, g, std::nullopt);
  require(ladder.size() == L, ErrorKind::invalid_argument, "approx_dprime: ladder and quadrature levels differ");
  for (auto& mr : members) mr.fitted_order = fit_order(ladder.levels(), mr.residuals);
  v = make_verdict(ladder.levels(), std::move(res), std::move(err), tol, phis.empty() ? "" : phis[worst].label());
  v.members = std::move(members);
  return v;
}

/// Residual at level ℓ: max over the battery of |∫δ_ℓφ − φ(0)|.
inline ApproxVerdict verify_delta(const SmoothFamily& delta, const TestBattery& battery, const QuadratureSpec& quad,
                                  const Tolerance& tol = {}) {
  require(delta.dim() == battery.dim, ErrorKind::dimension_mismatch, "verify_delta: battery dimension differs");
  require(!(delta.has_tag("c1-delta-candidate") && battery.regularity == Regularity::c0),
          ErrorKind::battery_class_mismatch,
          "verify_delta: '" + delta.label() + "' is a C1 delta candidate and cannot be tested against kink members");
  require(delta.ladder().has_value(), ErrorKind::invalid_argument, "verify_delta: the family needs a ladder");
  const auto phis = battery.families();
  const auto p = pair_many(delta, phis, quad);
  const ScaleLadder& ladder = *delta.ladder();
  const std::size_t L = ladder.size();
  std::vector<double> res(L, 0.0), err(L, 0.0);
  std::vector<MemberResiduals> members;
  std::size_t worst = 0;
  for (std::size_t m = 0; m < phis.size(); ++m) {
    MemberResiduals mr{phis[m].label(), std::vector<double>(L), 0.0};
    for (std::size_t l = 0; l < L; ++l) {
      mr.residuals[l] = std::abs(p[m][l].value - battery.members[m].value_at_origin);
      res[l] = std::max(res[l], mr.residuals[l]);
      err[l] = std::max(err[l], p[m][l].error + p[m][l].tail);
    }
    mr.fitted_order = fit_order(ladder.levels(), mr.residuals);
    members.push_back(std::move(mr));
  }
  for (std::size_t m = 0; m < members.size(); ++m)
    if (members[m].residuals.back() > members[worst].residuals.back()) worst = m;
  auto v = make_verdict(ladder.levels(), std::move(res), std::move(err), tol,
                        members.empty() ? "" : members[worst].label);
  v.members = std::move(members);
  return v;
}

// ---------------------------------------------------------------------------

struct MembershipVerdict {
  bool pass = false;
  double worst_slope = 0.0;   // slope of log|pairing| against log(1/ρ)
  std::string witness;
  double slope_limit = 0.1;
  std::vector<double> rho;
  std::vector<MemberResiduals> pairings;  // |pairing| per member (fitted_order holds its growth slope)
};

inline constexpr double kPairingFloor = 1e-12;

/// Growth slope of log max(|p|, floor) against log(1/ρ).
inline double growth_slope(const std::vector<double>& rho, const std::vector<double>& values) {
  std::vector<double> v(values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(std::abs(values[i]), kPairingFloor);
  // residuals ~ ρ^{-s} ⇔ fitted order −s
  return -fit_order(rho, v);
}

namespace detail {

inline MembershipVerdict membership_from(const std::vector<double>& rho, const std::vector<std::string>& labels,
                                         const std::vector<std::vector<double>>& values, double limit) {
  MembershipVerdict v;
  v.rho = rho;
  v.slope_limit = limit;
  v.worst_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < values.size(); ++m) {
    MemberResiduals mr{labels[m], values[m], growth_slope(rho, values[m])};
    for (double& x : mr.residuals) x = std::abs(x);
    if (mr.fitted_order > v.worst_slope) {
      v.worst_slope = mr.fitted_order;
      v.witness = labels[m];
    }
    v.pairings.push_back(std::move(mr));
  }
  v.pass = v.worst_slope <= limit;
  return v;
}

}  // namespace detail

/// Passes when no pairing sequence grows across the ladder.
inline MembershipVerdict dprime_membership(const SmoothFamily& f, const TestBattery& battery,
                                           const QuadratureSpec& quad, const ScaleLadder& ladder,
                                           double slope_limit = 0.1) {
  require(f.dim() == battery.dim, ErrorKind::dimension_mismatch, "dprime_membership: battery dimension differs");
  const auto phis = battery.families();
  const auto p = pair_many(f, phis, quad);
  std::vector<std::string> labels;
  std::vector<std::vector<double>> vals;
  for (std::size_t m = 0; m < phis.size(); ++m) {
    labels.push_back(phis[m].label());
    vals.push_back(values_of(p[m]));
  }
  return detail::membership_from(ladder.levels(), labels, vals, slope_limit);
}

inline MembershipVerdict dprime_membership(const SmoothFamily& f, const TestBattery& battery,
                                           const QuadratureSpec& quad, double slope_limit = 0.1) {
  return dprime_membership(f, battery, quad, f.ladder() ? *f.ladder() : default_ladder(), slope_limit);
}

/// Membership of ∂^α f, computed without differentiating f:
/// ∫ (∂^α f) φ = (−1)^{|α|} ∫ f ∂^α φ.
inline MembershipVerdict dprime_membership_derivative(const SmoothFamily& f, const MultiIndex& alpha,
                                                      const TestBattery& battery, const QuadratureSpec& quad,
                                                      double slope_limit = 0.1) {
  require(f.dim() == battery.dim, ErrorKind::dimension_mismatch, "dprime_membership: battery dimension differs");
  std::vector<SmoothFamily> dphi;
  std::vector<std::string> labels;
  for (const auto& m : battery.members) {
    require(m.weak_order >= alpha.order(), ErrorKind::battery_class_mismatch,
            "member '" + m.phi.label() + "' cannot carry a derivative of order " + std::to_string(alpha.order()));
    dphi.push_back(derivative(m.phi, alpha));
    labels.push_back(m.phi.label());
  }
  const auto p = pair_many(f, dphi, quad);
  const double sign = alpha.order() % 2 == 0 ? 1.0 : -1.0;
  std::vector<std::vector<double>> vals;
  for (const auto& seq : p) {
    auto v = values_of(seq);
    for (double& x : v) x *= sign;
    vals.push_back(std::move(v));
  }
  const ScaleLadder ladder = f.ladder() ? *f.ladder() : default_ladder();
  return detail::membership_from(ladder.levels(), labels, vals, slope_limit);
}

// ---------------------------------------------------------------------------

struct DerivativeSample {
  MultiIndex alpha;
  std::vector<double> values;  // st(∂^α f) on the grid
  double cauchy_gap = 0.0;
};

struct InterchangeCheck {
  std::size_t axis = 0;
  double max_gap = 0.0;  // max |FD ∂_j(st f) − st(∂_j f)|
  double bound = 0.0;    // max(cauchy gap, FD error estimate)
  bool pass = false;
};

struct StandardFunctionSample {
  Grid grid;
  std::vector<double> values;
  double cauchy_gap = 0.0;
  std::vector<DerivativeSample> derivative_samples;
  std::vector<InterchangeCheck> interchange;
};

struct StandardPartOptions {
  double growth_limit = 0.1;  // finiteness probe: slope of log max|∂^α f_ℓ| against log(1/ρ)
  double fd_step = 1e-3;
  bool interchange = true;
};

/// Values of st f (finest level) with Cauchy diagnostics and the
/// derivative-interchange check for first derivatives.
inline StandardFunctionSample standard_part(const SmoothFamily& f, const Grid& grid, int k,
                                            const StandardPartOptions& opt = {}) {
  require(grid.dim == f.dim(), ErrorKind::dimension_mismatch, "standard_part: grid dimension differs");
  require(grid.size() > 0, ErrorKind::invalid_argument, "standard_part: empty grid");
  require(f.smoothness() == kSmoothInf || k <= f.smoothness(), ErrorKind::smoothness_exceeded,
          "standard_part: order exceeds the family's smoothness");
  const ScaleLadder ladder = f.ladder() ? *f.ladder() : default_ladder();
  const std::size_t L = ladder.size();
  const std::size_t d = f.dim();
  StandardFunctionSample out;
  out.grid = grid;

  for (const auto& a : multi_indices_up_to(d, k)) {
    std::vector<double> peak(L, 0.0);
    std::vector<double> finest(grid.size()), previous(grid.size());
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = f.partial(l, grid.point(i), a);
        require(std::isfinite(v), ErrorKind::divergent_family,
                "standard_part: non-finite value of '" + f.label() + "'");
        peak[l] = std::max(peak[l], std::abs(v));
        if (l + 1 == L) finest[i] = v;
        if (l + 2 == L) previous[i] = v;
      }
    const double slope = growth_slope(ladder.levels(), peak);
    require(slope <= opt.growth_limit, ErrorKind::divergent_family,
            "standard_part: '" + f.label() + "' is not finite on the grid (d" + a.to_string() + " grows like rho^-" +
                std::to_string(slope) + ")");
    double gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) gap = std::max(gap, std::abs(finest[i] - previous[i]));
    if (a.order() == 0) {
      out.values = finest;
      out.cauchy_gap = gap;
    } else {
      out.derivative_samples.push_back({a, finest, gap});
    }
  }

  if (opt.interchange && k >= 1) {
    const double h = opt.fd_step;
    const std::size_t fin = L - 1;
    for (std::size_t j = 0; j < d; ++j) {
      const MultiIndex ej = MultiIndex::unit(d, j, 1);
      const DerivativeSample* ds = nullptr;
      for (const auto& s : out.derivative_samples)
        if (s.alpha == ej) ds = &s;
      InterchangeCheck ic{j, 0.0, 0.0, false};
      double fd_err = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::array<double, kMaxDim> y{};
        auto x = grid.point(i);
        std::copy(x.begin(), x.end(), y.begin());
        auto at = [&](double off) {
          y[j] = x[j] + off;
          return f(fin, std::span<const double>(y.data(), d));
        };
        const double fm2 = at(-2 * h), fm1 = at(-h), fp1 = at(h), fp2 = at(2 * h);
        const double d4 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        const double d2 = (fp1 - fm1) / (2.0 * h);
        ic.max_gap = std::max(ic.max_gap, std::abs(d4 - ds->values[i]));
        // the second-order difference bounds the error of the fourth-order one
        fd_err = std::max(fd_err, std::abs(d4 - d2));
      }
      ic.bound = std::max(ds->cauchy_gap, fd_err);
      ic.pass = ic.max_gap <= ic.bound + 1e-12;
      out.interchange.push_back(ic);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ModulusTable {
  std::vector<double> radii;
  std::vector<std::vector<double>> modulus;  // [level][radius]
  ApproxVerdict verdict;                     // finest level, residuals over radii
};

/// modulus(ℓ, r) = max over points x and probes |y − x| ≤ r of |f_ℓ(y) − f_ℓ(x)|.
inline ModulusTable s_modulus(const SmoothFamily& f, const Grid& points, std::vector<double> radii,
                              const Tolerance& tol = {}) {
  require(points.dim == f.dim() && points.size() > 0, ErrorKind::invalid_argument,
          "s_modulus: needs points of the family's dimension");
  require(radii.size() >= 2, ErrorKind::invalid_argument, "s_modulus: needs at least two radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    require(radii[i] < radii[i - 1] && radii[i] > 0.0, ErrorKind::invalid_argument,
            "s_modulus: radii must be positive and decreasing");
  const ScaleLadder ladder = f.ladder() ? *f.ladder() : default_ladder();
  const std::size_t d = f.dim();
  ModulusTable t;
  t.radii = radii;
  t.modulus.assign(ladder.size(), std::vector<double>(radii.size(), 0.0));
  static constexpr std::array<double, 4> fractions{0.25, 0.5, 0.75, 1.0};
  for (std::size_t l = 0; l < ladder.size(); ++l)
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto x = points.point(i);
      const double fx = f(l, x);
      for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        double m = 0.0;
        std::array<double, kMaxDim> y{};
        for (std::size_t axis = 0; axis < d; ++axis)
          for (double sgn : {-1.0, 1.0})
            for (double fr : fractions) {
              std::copy(x.begin(), x.end(), y.begin());
              y[axis] += sgn * fr * radii[ri];
              m = std::max(m, std::abs(f(l, std::span<const double>(y.data(), d)) - fx));
            }
        t.modulus[l][ri] = std::max(t.modulus[l][ri], m);
      }
    }
  t.verdict = make_verdict(radii, t.modulus.back(), {}, tol, f.label());
  return t;
}

}  // namespace gfc
