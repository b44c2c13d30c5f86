#pragma once

// Small profiles and oracles shared by the unit tests and the acceptance run.

#include <cmath>
#include <numbers>
#include <span>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gfc/gfc.hpp"

namespace gfc_test {

using namespace gfc;

struct Cos {
  template <class T>
  T operator()(std::span<const T> x) const {
    return cos(x[0]);
  }
};

// exp(-|x|²) in any dimension
struct Gauss {
  template <class T>
  T operator()(std::span<const T> x) const {
    T s = x[0] * x[0];
    for (std::size_t i = 1; i < x.size(); ++i) s = s + x[i] * x[i];
    return exp(-s);
  }
};

// exp(-1/(1-s)) with s = |x - c|²/R², any dimension
struct Bump {
  double c = 0.0, R = 1.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    T s = (x[0] - c) * (x[0] - c);
    for (std::size_t i = 1; i < x.size(); ++i) s = s + x[i] * x[i];
    s = s * (1.0 / (R * R));
    if (primal(s) >= 1.0) return lift<T>(0.0);
    return exp(lift<T>(-1.0) / (lift<T>(1.0) - s));
  }
};

// (1 - x²)² on [-1, 1]
struct Quartic {
  template <class T>
  T operator()(std::span<const T> x) const {
    T s = x[0] * x[0];
    if (primal(s) >= 1.0) return lift<T>(0.0);
    T u = lift<T>(1.0) - s;
    return u * u;
  }
};

inline SmoothFamily cos_family() {
  StandardOptions o;
  o.label = "cos";
  return standard_family(1, Cos{}, o);
}

inline SmoothFamily gauss_family(std::size_t d) {
  StandardOptions o;
  o.label = "gauss";
  o.radial = true;
  o.envelope = [](std::size_t, double r) { return std::exp(-r * r); };
  return standard_family(d, Gauss{}, o);
}

inline SmoothFamily bump_family(std::size_t d, double c = 0.0, double R = 1.0) {
  StandardOptions o;
  o.label = "bump";
  o.support_center = Point{c, 0.0, 0.0};
  o.support_radius = R;
  o.feature_scale = R / 4.0;
  o.radial = c == 0.0;
  if (d == 1) o.breakpoints = {{c - R, c + R}};
  return standard_family(d, Bump{c, R}, o);
}

inline SmoothFamily quartic_family() {
  StandardOptions o;
  o.label = "quartic";
  o.support_radius = 1.0;
  o.feature_scale = 0.25;
  o.smoothness = 1;
  o.breakpoints = {{-1.0, 1.0}};
  return standard_family(1, Quartic{}, o);
}

inline double eval1(const SmoothFamily& f, std::size_t k, double x) { return f(k, std::span<const double>(&x, 1)); }

inline double bump1(double x) { return std::abs(x) >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - x * x)); }

// Oracles for the 1-D solves with f = bump on [-1, 1].
// ∂u = f:  u(x) = ∫_{-1}^{x} f
inline double antiderivative_oracle(double x) {
  if (x <= -1.0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(bump1, -1.0, std::min(x, 1.0));
}

// u'' = f:  u(x) = ∫ |x - y|/2 f(y) dy, split at y = x
inline double laplace_oracle(double x) {
  auto g = [x](double y) { return 0.5 * std::abs(x - y) * bump1(y); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  if (x <= -1.0 || x >= 1.0) return GK::integrate(g, -1.0, 1.0, 15, 1e-14);
  return GK::integrate(g, -1.0, x, 15, 1e-14) + GK::integrate(g, x, 1.0, 15, 1e-14);
}

// 2/π ∫_0^1 (1 - t²)² sin(λt)/t dt at λ = 2^k, k = 4..10 (mpmath, 30 digits)
inline constexpr double kDirichletQuartic[7] = {
    0.99882297818452739774, 1.0001292519378217246, 1.0000076064908320194, 0.99999831758944403315,
    0.99999998792178292056, 0.99999996217509565394, 1.0000000046831893831};

// Fitted order over the levels whose residual is above `floor`; residuals that
// reach the quadrature floor early carry no rate. Needs three such levels,
// otherwise +inf (the member is already at the floor).
inline double order_above_floor(const std::vector<double>& rho, const std::vector<double>& res, double floor = 1e-8) {
  std::vector<double> r, e;
  for (std::size_t i = 0; i < res.size(); ++i)
    if (res[i] > floor) {
      r.push_back(rho[i]);
      e.push_back(res[i]);
    }
  return r.size() >= 3 ? gfc::fit_order(r, e) : std::numeric_limits<double>::infinity();
}

}  // namespace gfc_test
