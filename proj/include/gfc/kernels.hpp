#pragma once

// The operator catalog and the mollified fundamental solutions E_ρ = E_cl ⋆ δ_ρ.
// Derivatives of E_ρ always fall on the mollifier: ∂^α E_ρ = E_cl ⋆ ∂^α δ_ρ.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfc/calculus.hpp"
#include "gfc/delta.hpp"
#include "gfc/dual.hpp"
#include "gfc/error.hpp"
#include "gfc/mollifier.hpp"
#include "gfc/pdo.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/scale_ladder.hpp"
#include "gfc/smooth_family.hpp"

namespace gfc {

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"ddx_1d",     "laplace_1d", "laplace_2d",
                                              "laplace_3d", "heat_1p1",   "transport_1p1"};
  return names;
}

inline std::size_t catalog_dimension(std::string_view name) {
  if (name == "ddx_1d" || name == "laplace_1d") return 1;
  if (name == "laplace_2d" || name == "heat_1p1" || name == "transport_1p1") return 2;
  if (name == "laplace_3d") return 3;
  fail(ErrorKind::unknown_name, "unknown catalog operator '" + std::string(name) + "'");
}

/// ∂_x, ∂_x², Δ (2-D, 3-D), ∂_t − ∂_x², ∂_t + c∂_x. Heat and transport use
/// coordinates (t, x).
inline PDOperator pdo_catalog(std::string_view name, double c = 1.0) {
  const std::size_t d = catalog_dimension(name);
  if (name == "ddx_1d") return PDOperator(1, {{MultiIndex{1}, 1.0}});
  if (name == "laplace_1d") return PDOperator(1, {{MultiIndex{2}, 1.0}});
  if (name == "heat_1p1") return PDOperator(2, {{MultiIndex{1, 0}, 1.0}, {MultiIndex{0, 2}, -1.0}});
  if (name == "transport_1p1") {
    require(std::isfinite(c), ErrorKind::invalid_argument, "transport speed must be finite");
    return PDOperator(2, {{MultiIndex{1, 0}, 1.0}, {MultiIndex{0, 1}, c}});
  }
  std::vector<std::pair<MultiIndex, double>> t;
  for (std::size_t i = 0; i < d; ++i) t.emplace_back(MultiIndex::unit(d, i, 2), 1.0);
  return PDOperator(d, std::move(t));
}

/// The classical kernel E_cl (transport has none as a function; it is the
/// measure H(t)·δ(x − ct) and reports 0 here).
inline std::function<double(std::span<const double>)> classical_kernel(std::string_view name) {
  if (name == "ddx_1d") return [](std::span<const double> x) { return x[0] > 0.0 ? 1.0 : (x[0] == 0.0 ? 0.5 : 0.0); };
  if (name == "laplace_1d") return [](std::span<const double> x) { return 0.5 * std::abs(x[0]); };
  if (name == "laplace_2d")
    return [](std::span<const double> x) { return std::log(std::hypot(x[0], x[1])) / (2.0 * std::numbers::pi); };
  if (name == "laplace_3d")
    return [](std::span<const double> x) {
      return -1.0 / (4.0 * std::numbers::pi * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
  if (name == "heat_1p1")
    return [](std::span<const double> x) {
      if (x[0] <= 0.0) return 0.0;
      return std::exp(-x[1] * x[1] / (4.0 * x[0])) / std::sqrt(4.0 * std::numbers::pi * x[0]);
    };
  if (name == "transport_1p1") return [](std::span<const double>) { return 0.0; };
  fail(ErrorKind::unknown_name, "unknown catalog operator '" + std::string(name) + "'");
}

namespace kernel_detail {

/// Σ c_α ∂^α δ_ρ at q.
struct DeltaCombo {
  const DilatedProfile* D;
  const Terms* terms;
  double operator()(std::span<const double> q) const {
    double s = 0.0;
    for (const auto& [a, c] : *terms) s += c * partial(*D, q, a);
    return s;
  }
};

// ---- d/dx: the smoothed Heaviside ------------------------------------------

inline double smoothed_heaviside(const DilatedProfile& D, double x) {
  if (x <= -D.rho) return 0.0;
  if (x >= D.rho) return 1.0;
  return composite_gauss([&](double y) { return D(std::span<const double>(&y, 1)); }, -D.rho, x, 16, 16);
}

// ---- 1-D Laplacian: (|x|/2) ⋆ δ_ρ ------------------------------------------

inline double smoothed_abs_half(const DilatedProfile& D, double x) {
  if (std::abs(x) >= D.rho) return 0.5 * std::abs(x);
  auto left = [&](double y) { return 0.5 * (x - y) * D(std::span<const double>(&y, 1)); };
  auto right = [&](double y) { return 0.5 * (y - x) * D(std::span<const double>(&y, 1)); };
  return composite_gauss(left, -D.rho, x, 16, 16) + composite_gauss(right, x, D.rho, 16, 16);
}

// ---- radial Laplacians in 2-D and 3-D ---------------------------------------
//
// For the unit bump ψ₁ (radial profile, ∫ψ₁ = 1) the mass inside t and two
// tail moments are tabulated once on t ∈ [0, 1]; E_ρ follows from Newton's
// shell formula. Derivatives in r are exact: U' = M/(|S|r^{d−1}), M' = |S|ψ_ρ r^{d−1}.

class ShellTables {
 public:
  static constexpr int kCells = 64;

  explicit ShellTables(std::size_t d) : d_(d), S_(unit_sphere_area(d)), C_(1.0 / bump_mass(d)) {
    cum_m_[0] = cum_a_[0] = cum_b_[0] = 0.0;
    for (int j = 0; j < kCells; ++j) {
      const double lo = static_cast<double>(j) / kCells, hi = static_cast<double>(j + 1) / kCells;
      cum_m_[j + 1] = cum_m_[j] + integrate_adaptive([&](double t) { return gm(t); }, lo, hi, 1e-15, 12).value;
      cum_a_[j + 1] = cum_a_[j] + integrate_adaptive([&](double t) { return ga(t); }, lo, hi, 1e-15, 12).value;
      cum_b_[j + 1] = cum_b_[j] + integrate_adaptive([&](double t) { return gb(t); }, lo, hi, 1e-15, 12).value;
    }
  }

  static const ShellTables& get(std::size_t d) {
    static std::array<std::unique_ptr<ShellTables>, kMaxDim + 1> tabs;
    static std::array<std::once_flag, kMaxDim + 1> flags;
    require(d == 2 || d == 3, ErrorKind::invalid_argument, "shell tables exist for d = 2, 3");
    std::call_once(flags[d], [d] { tabs[d] = std::make_unique<ShellTables>(d); });
    return *tabs[d];
  }

  std::size_t dim() const { return d_; }
  double sphere() const { return S_; }
  double normalization() const { return C_; }

  double psi1(double t) const { return t >= 1.0 ? 0.0 : C_ * std::exp(-1.0 / (1.0 - t * t)); }

  /// Mass of ψ₁ inside radius t.
  double m(double t) const { return t >= 1.0 ? 1.0 : S_ * cumulative(cum_m_, t, [&](double u) { return gm(u); }); }
  /// ∫_t^1 ψ₁(τ) τ dτ
  double a(double t) const {
    return t >= 1.0 ? 0.0 : cum_a_[kCells] - cumulative(cum_a_, t, [&](double u) { return ga(u); });
  }
  /// ∫_t^1 ψ₁(τ) τ log τ dτ
  double b(double t) const {
    return t >= 1.0 ? 0.0 : cum_b_[kCells] - cumulative(cum_b_, t, [&](double u) { return gb(u); });
  }

 private:
  double gm(double t) const { return psi1(t) * std::pow(t, static_cast<double>(d_ - 1)); }
  double ga(double t) const { return psi1(t) * t; }
  double gb(double t) const { return t <= 0.0 ? 0.0 : psi1(t) * t * std::log(t); }

  template <class G>
  double cumulative(const std::array<double, kCells + 1>& cum, double t, G g) const {
    if (t <= 0.0) return 0.0;
    const int j = std::min(kCells - 1, static_cast<int>(t * kCells));
    const double lo = static_cast<double>(j) / kCells;
    const Rule1D& rule = gauss_legendre(16);
    double s = 0.0;
    if (j == 0) {
      // τ = t u²: smooths the τ log τ endpoint behaviour
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = 0.5 * (rule.nodes[i] + 1.0);
        s += 0.5 * rule.weights[i] * g(t * u * u) * 2.0 * t * u;
      }
      return s;
    }
    const double mid = 0.5 * (lo + t), half = 0.5 * (t - lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(mid + half * rule.nodes[i]);
    return cum[j] + half * s;
  }

  std::size_t d_;
  double S_;
  double C_;
  std::array<double, kCells + 1> cum_m_{}, cum_a_{}, cum_b_{};
};

struct LaplaceShell {
  const ShellTables* tab;
  double rho;

  std::size_t d() const { return tab->dim(); }

  template <class T>
  T psi_rho(const T& r) const {
    T s = square(r * (1.0 / rho));
    if (primal(s) >= 1.0) return lift<T>(0.0);
    return (tab->normalization() * std::pow(rho, -static_cast<double>(d()))) * exp(-1.0 / (1.0 - s));
  }

  double M(double r) const { return r >= rho ? 1.0 : tab->m(r / rho); }
  template <class T>
  Dual<T> M(const Dual<T>& r) const {
    return {M(r.v), (tab->sphere() * psi_rho(r.v) * ipow(r.v, static_cast<int>(d()) - 1)) * r.d};
  }

  template <class T>
  T Uprime(const T& r) const {
    return M(r) / (tab->sphere() * ipow(r, static_cast<int>(d()) - 1));
  }

  double U(double r) const {
    const double pi = std::numbers::pi;
    if (d() == 3) {
      if (r >= rho) return -1.0 / (4.0 * pi * r);
      const double t = r / rho;
      return (r == 0.0 ? 0.0 : -M(r) / (4.0 * pi * r)) - tab->a(t) / rho;
    }
    if (r >= rho) return std::log(r) / (2.0 * pi);
    const double t = r / rho;
    return (r == 0.0 ? 0.0 : std::log(r) * M(r) / (2.0 * pi)) + std::log(rho) * tab->a(t) + tab->b(t);
  }
  template <class T>
  Dual<T> U(const Dual<T>& r) const {
    return {U(r.v), Uprime(r.v) * r.d};
  }
};

struct LaplaceProfile {
  LaplaceShell shell;
  template <class T>
  T operator()(std::span<const T> x) const {
    T s = square(x[0]);
    for (std::size_t i = 1; i < x.size(); ++i) s = s + square(x[i]);
    return shell.U(sqrt(s));
  }
};

/// ∫_{|q|<ρ} E_cl(p − q) δ_ρ(q) dq by polar quadrature centred on the
/// singularity q = p, cells graded towards it. Returns {value, companion}.
inline std::pair<double, double> polar_singular_mollify(const std::function<double(std::span<const double>)>& ecl,
                                                        const DilatedProfile& D, std::span<const double> p) {
  const std::size_t d = p.size();
  double pn = 0.0;
  for (double v : p) pn += v * v;
  pn = std::sqrt(pn);
  const double r_max = pn + D.rho;
  std::vector<Feature> feats{{Point{}, D.rho, true}, {Point{}, 1e-4 * D.rho, false}};
  if (pn > 0.0) feats.push_back({Point{pn}, D.rho, false});
  AngularOptions ang;
  ang.circle_points = 256;
  ang.polar_points = 48;
  ang.azimuth_points = 96;
  const GradingOptions g{16.0, 0.5, 1'000'000};
  auto nodes = radial_nodes(d, Point{}, r_max, std::vector<double>{pn > D.rho ? pn - D.rho : 0.0}, feats, g,
                            QuadRule::gauss_legendre, 10, ang);
  auto integrate = [&](const NodeSet& set) {
    double s = 0.0;
    std::array<double, kMaxDim> q{};
    for (std::size_t i = 0; i < set.size(); ++i) {
      auto w = set.point(i);  // w = p − q
      double q2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        q[j] = p[j] - w[j];
        q2 += q[j] * q[j];
      }
      if (q2 >= D.rho * D.rho) continue;
      s += set.weights[i] * ecl(w) * D(std::span<const double>(q.data(), d));
    }
    return s;
  };
  return {integrate(nodes.primary), integrate(nodes.companion)};
}

// ---- heat: ∫∫ K(s, y) g(p_t − s, p_x − y) over the δ-ball -------------------

inline constexpr double kInvSqrtPi = 0.56418958354775628695;
inline constexpr int kMaxHeatX = 6;

/// ∂_y^n of the 1-D heat kernel K(s, y) = (4πs)^{-1/2} e^{-y²/4s}, through
/// physicists' Hermite polynomials in u = y/(2√s).
inline double heat_kernel_dy(int n, double s, double y) {
  const double rs = std::sqrt(s);
  const double u = y / (2.0 * rs);
  double h0 = 1.0, h1 = 2.0 * u;
  double hn = n == 0 ? h0 : h1;
  for (int m = 1; m < n; ++m) {
    hn = 2.0 * u * h1 - 2.0 * m * h0;
    h0 = h1;
    h1 = hn;
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * hn * std::pow(2.0 * rs, -n) * std::exp(-u * u) / std::sqrt(4.0 * std::numbers::pi * s);
}

/// Σ c_α ∫∫ K(s, y) ∂^α δ_ρ(p_t − s, p_x − y) dy ds over the δ-ball.
/// x-derivatives are moved onto K by parts unless K is far narrower than the
/// ball; otherwise ∫ ∂_x^n δ dy is a small difference of large terms. The s
/// integral uses tanh-sinh on cells [0, ρ², 8ρ², 64ρ², …], which resolves
/// both the ρ² structure at s = 0 and the flat edges of the bump.
inline double heat_integral(const DilatedProfile& D, double pt, double px, const Terms& terms) {
  const double rho = D.rho;
  const double s1 = pt + rho;
  if (s1 <= 0.0) return 0.0;
  const double s0 = std::max(0.0, pt - rho);
  std::vector<double> cuts{s0, s1};
  for (double h = rho * rho; h < s1; h *= 8.0)
    if (h > s0) cuts.push_back(h);
  std::sort(cuts.begin(), cuts.end());

  Terms t_only;
  std::vector<int> x_orders;
  int max_x = 0;
  for (const auto& [a, c] : terms) {
    require(a[1] <= kMaxHeatX, ErrorKind::invalid_argument,
            "heat kernel: derivative order beyond the tabulated range");
    t_only.emplace_back(MultiIndex{a[0], 0}, c);
    x_orders.push_back(a[1]);
    max_x = std::max(max_x, a[1]);
  }
  const DeltaCombo g{&D, &terms};

  const Rule1D& ts = tanh_sinh_rule(0.15);
  const Rule1D& gy = gauss_legendre(12);
  const Rule1D& gh = gauss_hermite(16);
  double total = 0.0;
  std::array<double, 2> q{};
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < ts.nodes.size(); ++i) {
      const double s = mid + half * ts.nodes[i];
      if (s <= 0.0) continue;
      const double tau = pt - s;
      const double chord2 = rho * rho - tau * tau;
      if (chord2 <= 0.0) continue;
      const double chord = std::sqrt(chord2);
      const double rs = std::sqrt(s);
      const double W = 12.0 * rs;
      double inner = 0.0;
      q[0] = tau;
      if (W <= rho / 4.0) {
        for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
          q[1] = px - 2.0 * rs * gh.nodes[j];
          inner += gh.weights[j] * g(std::span<const double>(q.data(), 2));
        }
        inner *= kInvSqrtPi;
      } else {
        const double lo = std::max(px - chord, -W), hi = std::min(px + chord, W);
        if (hi > lo) {
          const double cell = std::min(rho / 4.0, 2.0 * rs);
          const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / cell)));
          const double h = (hi - lo) / n;
          const double inv2rs = 0.5 / rs, base = 0.5 * kInvSqrtPi / rs;
          for (int m = 0; m < n; ++m) {
            const double ym = lo + (m + 0.5) * h;
            for (std::size_t j = 0; j < gy.nodes.size(); ++j) {
              const double y = ym + 0.5 * h * gy.nodes[j];
              // ∂_y^n K = (−1)^n H_n(u) (2√s)^{-n} K
              const double u = y * inv2rs;
              const double e = base * std::exp(-u * u);
              std::array<double, kMaxHeatX + 1> K{};
              double h0 = 1.0, h1 = 2.0 * u, sc = 1.0;
              for (int r = 0; r <= max_x; ++r) {
                const double hr = r == 0 ? h0 : (r == 1 ? h1 : 2.0 * u * h1 - 2.0 * (r - 1) * h0);
                if (r >= 2) {
                  h0 = h1;
                  h1 = hr;
                }
                K[r] = ((r % 2) ? -hr : hr) * sc * e;
                sc *= inv2rs;
              }
              // δ and ∂_t δ from one first-order dual in t
              std::array<Dual<double>, 2> qd{Dual<double>{tau, 1.0}, Dual<double>{px - y, 0.0}};
              const Dual<double> dv = D(std::span<const Dual<double>>(qd.data(), 2));
              double v = 0.0;
              for (std::size_t t = 0; t < t_only.size(); ++t) {
                const int at = t_only[t].first[0];
                double dt = at == 0 ? dv.v : dv.d;
                if (at > 1) {
                  q[1] = px - y;
                  dt = partial(D, std::span<const double>(q.data(), 2), t_only[t].first);
                }
                v += t_only[t].second * K[x_orders[t]] * dt;
              }
              inner += 0.5 * h * gy.weights[j] * v;
            }
          }
        }
      }
      total += half * ts.weights[i] * inner;
    }
  }
  return total;
}

// ---- transport: ∫_0^∞ g(p − s(1, c)) ds over the δ-ball chord -----------------

template <class G>
double transport_integral(double rho, double c, double pt, double px, const G& g, int cells_per_chord = 16) {
  const double A = 1.0 + c * c;
  const double B = -2.0 * (pt + c * px);
  const double C = pt * pt + px * px - rho * rho;
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double lo = std::max(0.0, (-B - sq) / (2.0 * A)), hi = (-B + sq) / (2.0 * A);
  if (hi <= lo) return 0.0;
  std::array<double, 2> q{};
  return composite_gauss(
      [&](double s) {
        q[0] = pt - s;
        q[1] = px - c * s;
        return g(std::span<const double>(q.data(), 2));
      },
      lo, hi, cells_per_chord, 8);
}

// ---- convolution hooks: (E_ρ ⋆ ∂^α g)(x) = ∫ δ_ρ(w) (E_cl ⋆ ∂^α g)(x − w) dw ----

/// Radial nodes on the δ-ball, shared by the heat and transport convolvers.
inline const NodeSet& delta_ball_nodes(int order) {
  static std::mutex mu;
  static std::map<int, NodeSet> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  AngularOptions ang;
  ang.circle_points = 12;
  std::vector<Feature> feats{{Point{}, 1.0, true}};
  auto nodes = radial_nodes(2, Point{}, 1.0, std::vector<double>{}, feats, GradingOptions{8.0, 0.5, 1000},
                            QuadRule::gauss_legendre, order, ang);
  return cache.emplace(order, std::move(nodes.primary)).first->second;
}

template <class W>
double delta_average(const DilatedProfile& D, std::span<const double> x, int order, const W& w) {
  const NodeSet& ball = delta_ball_nodes(order);
  double s = 0.0;
  std::array<double, 2> y{};
  for (std::size_t i = 0; i < ball.size(); ++i) {
    auto u = ball.point(i);
    const double q[2] = {D.rho * u[0], D.rho * u[1]};
    const double dv = D(std::span<const double>(q, 2));
    if (dv == 0.0) continue;
    y[0] = x[0] - q[0];
    y[1] = x[1] - q[1];
    s += ball.weights[i] * D.rho * D.rho * dv * w(std::span<const double>(y.data(), 2));
  }
  return s;
}

/// Two rings of eight nodes whose radii form the Gauss rule for δ's radial
/// measure in v = r²; exact for polynomials of degree 7 in the offset.
struct DeltaRings {
  double r[2], w[2];
};

inline DeltaRings delta_rings(const DilatedProfile& D) {
  const NodeSet& ball = delta_ball_nodes(4);
  double nu[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < ball.size(); ++i) {
    auto u = ball.point(i);
    const double q[2] = {D.rho * u[0], D.rho * u[1]};
    const double m = ball.weights[i] * D.rho * D.rho * D(std::span<const double>(q, 2));
    const double v = u[0] * u[0] + u[1] * u[1];
    for (int j = 0; j < 4; ++j) nu[j] += m * std::pow(v, j);
  }
  for (int j = 3; j >= 0; --j) nu[j] /= nu[0];  // δ has unit mass
  // v² + a v + b orthogonal to 1 and v
  const double det = nu[1] * nu[1] - nu[0] * nu[2];
  const double a = (nu[3] * nu[0] - nu[2] * nu[1]) / det, b = (nu[2] * nu[2] - nu[3] * nu[1]) / det;
  const double disc = std::sqrt(a * a - 4.0 * b);
  const double v0 = 0.5 * (-a - disc), v1 = 0.5 * (-a + disc);
  const double w1 = (nu[1] - v0) / (v1 - v0);
  return {{std::sqrt(v0) * D.rho, std::sqrt(v1) * D.rho}, {1.0 - w1, w1}};
}

/// ∫ δ_ρ(q) w(x − q) dq: the rings when δ is narrow against w's feature
/// scale, the full ball rule otherwise.
template <class W>
double delta_smooth_average(const DilatedProfile& D, const DeltaRings& rings, double feature,
                            std::span<const double> x, const W& w) {
  if (D.rho > feature / 4.0) return delta_average(D, x, 4, w);
  double s = 0.0;
  std::array<double, 2> y{};
  for (int a = 0; a < 2; ++a)
    for (int j = 0; j < 8; ++j) {
      const double th = std::numbers::pi * (j + 0.5 * a) / 4.0;
      y[0] = x[0] - rings.r[a] * std::cos(th);
      y[1] = x[1] - rings.r[a] * std::sin(th);
      s += rings.w[a] / 8.0 * w(std::span<const double>(y.data(), 2));
    }
  return s;
}

inline double combo_at(const SmoothFamily& g, std::size_t k, const std::array<double, 2>& q, const Terms& terms) {
  std::span<const double> qs(q.data(), 2);
  double v = 0.0;
  for (const auto& [a, c] : terms) v += c * g.partial(k, qs, a);
  return v;
}

inline double min_feature(const SmoothFamily& g, std::size_t k) {
  double s = kInf;
  for (const auto& ft : g.features()) s = std::min(s, ft.scale(k));
  return std::isfinite(s) ? s : 1.0;
}

/// Classical heat potential (E_cl ⋆ Σ c_α ∂^α g)(y) for compact g, with s = σ²
/// and z = 2σζ so that the kernel becomes π^{-1/2} e^{-ζ²}.
inline double heat_potential(const SmoothFamily& g, std::size_t k, const Terms& terms, std::span<const double> y) {
  const double R = g.support_radius(k);
  const Point& c = g.support_center();
  const double s_lo = std::max(0.0, y[0] - (c[0] + R)), s_hi = y[0] - (c[0] - R);
  if (s_hi <= 0.0 || R == 0.0) return 0.0;
  const double fs = min_feature(g, k);
  const Rule1D& gl = gauss_legendre(16);  // ∂_t g and ∂_x² g cancel; order 12 leaves ~1e-7
  std::array<double, 2> q{};
  double total = 0.0;
  const double ds = fs / 2.0;
  const int nu = std::max(1, static_cast<int>(std::ceil((s_hi - s_lo) / ds)));
  std::vector<double> cuts;
  for (int i = 0; i <= nu; ++i) cuts.push_back(s_lo + (s_hi - s_lo) * i / nu);
  if (s_lo == 0.0) {
    // grade geometrically toward s = 0, where g is sampled at its own edge
    const double a = cuts[1];
    for (int j = 1; j <= 4; ++j) cuts.insert(cuts.begin() + 1, a * std::ldexp(1.0, -j));
  }
  for (std::size_t cs = 0; cs + 1 < cuts.size(); ++cs) {
    const double sa = cuts[cs], sb = cuts[cs + 1];
    const double ga = std::sqrt(sa), gb = std::sqrt(sb);
    const double gm = 0.5 * (ga + gb), gh = 0.5 * (gb - ga);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double sigma = gm + gh * gl.nodes[i];
      const double tq = y[0] - sigma * sigma;
      q[0] = tq;
      // ζ-range where g can be nonzero, clipped to the Gaussian window
      double z_lo = -6.0, z_hi = 6.0;
      if (sigma > 0.0) {
        z_lo = std::max(z_lo, (y[1] - c[1] - R) / (2.0 * sigma));
        z_hi = std::min(z_hi, (y[1] - c[1] + R) / (2.0 * sigma));
      }
      if (z_hi <= z_lo) continue;
      const double hz = sigma > 0.0 ? std::min(1.0, fs / (4.0 * sigma)) : 1.0;
      const int nz = std::max(1, static_cast<int>(std::ceil((z_hi - z_lo) / hz)));
      const double h = (z_hi - z_lo) / nz;
      double inner = 0.0;
      for (int m = 0; m < nz; ++m) {
        const double zm = z_lo + (m + 0.5) * h;
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
          const double z = zm + 0.5 * h * gl.nodes[j];
          q[1] = y[1] - 2.0 * sigma * z;
          inner += 0.5 * h * gl.weights[j] * std::exp(-z * z) * combo_at(g, k, q, terms);
        }
      }
      total += gh * gl.weights[i] * 2.0 * sigma * kInvSqrtPi * inner;
    }
  }
  return total;
}

/// (H(t)δ(x − ct) ⋆ Σ c_α ∂^α g)(y) = ∫_0^∞ Σ c_α ∂^α g(y − s(1, c)) ds.
inline double transport_potential(const SmoothFamily& g, std::size_t k, const Terms& terms, double c,
                                  std::span<const double> y) {
  const double R = g.support_radius(k);
  if (R == 0.0) return 0.0;
  const Point& ctr = g.support_center();
  const double p[2] = {y[0] - ctr[0], y[1] - ctr[1]};
  const double A = 1.0 + c * c, B = -2.0 * (p[0] + c * p[1]), C = p[0] * p[0] + p[1] * p[1] - R * R;
  const double disc = B * B - 4.0 * A * C;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double lo = std::max(0.0, (-B - sq) / (2.0 * A)), hi = (-B + sq) / (2.0 * A);
  if (hi <= lo) return 0.0;
  const double fs = min_feature(g, k);
  const int cells = std::max(2, static_cast<int>(std::ceil((hi - lo) * std::sqrt(A) / (fs / 2.0))));
  std::array<double, 2> q{};
  return composite_gauss(
      [&](double s) {
        q[0] = y[0] - s;
        q[1] = y[1] - c * s;
        return combo_at(g, k, q, terms);
      },
      lo, hi, cells, 16);
}

}  // namespace kernel_detail

/// E_ρ = E_cl ⋆ δ_ρ for a catalog operator, as a ladder-indexed family.
inline SmoothFamily mollified_kernel(std::string_view name, const ScaleLadder& ladder, const Mollifier& psi,
                                     double c = 1.0) {
  using namespace kernel_detail;
  const std::size_t d = catalog_dimension(name);
  require(psi.kind() == MollifierKind::bump, ErrorKind::invalid_argument,
          "fundamental solutions are mollified with the compact bump");
  require(psi.dimension() == d, ErrorKind::dimension_mismatch, "mollifier dimension differs from the operator's");
  auto deltas = std::make_shared<std::vector<DilatedProfile>>();
  for (std::size_t k = 0; k < ladder.size(); ++k) deltas->emplace_back(psi, ladder.rho(k));
  auto rings = std::make_shared<std::vector<DeltaRings>>();
  if (d == 2)
    for (const auto& D : *deltas) rings->push_back(delta_rings(D));

  FamilyParts p;
  p.dim = d;
  p.ladder = ladder;
  p.support_radius = constant_level(kInf);
  p.label = "E[" + std::string(name) + "]";
  p.features.push_back({Point{}, [ladder, w = psi.width()](std::size_t k) { return ladder.rho(k) * w; }, false});
  p.tags.insert("fundamental-solution");

  if (name == "ddx_1d") {
    p.eval = [deltas](std::size_t k, std::span<const double> x, const MultiIndex& a) {
      const auto& D = (*deltas)[k];
      if (a[0] == 0) return smoothed_heaviside(D, x[0]);
      return partial(D, x, MultiIndex{a[0] - 1});
    };
    p.envelope = [](std::size_t, double) { return 1.0; };
  } else if (name == "laplace_1d") {
    p.eval = [deltas](std::size_t k, std::span<const double> x, const MultiIndex& a) {
      const auto& D = (*deltas)[k];
      if (a[0] == 0) return smoothed_abs_half(D, x[0]);
      if (a[0] == 1) return smoothed_heaviside(D, x[0]) - 0.5;
      return partial(D, x, MultiIndex{a[0] - 2});
    };
  } else if (name == "laplace_2d" || name == "laplace_3d") {
    const ShellTables* tab = &ShellTables::get(d);
    const double w = psi.width();
    p.eval = [tab, ladder, w](std::size_t k, std::span<const double> x, const MultiIndex& a) {
      const double rho = ladder.rho(k) * w;
      LaplaceProfile prof{LaplaceShell{tab, rho}};
      std::array<double, kMaxDim> y{};
      double r2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i];
        r2 += x[i] * x[i];
      }
      // the radius is not differentiable at 0; E_ρ is, so step off the centre
      if (a.order() > 0 && r2 < 1e-16 * rho * rho) y[0] += 1e-8 * rho;
      return partial(prof, std::span<const double>(y.data(), x.size()), a);
    };
    p.radial = true;
    if (d == 3)
      p.envelope = [tab, ladder, w](std::size_t k, double r) {
        const double rho = ladder.rho(k) * w;
        return r >= rho ? 1.0 / (4.0 * std::numbers::pi * r) : std::abs(LaplaceShell{tab, rho}.U(0.0));
      };
  } else if (name == "heat_1p1") {
    p.combo = [deltas](std::size_t k, std::span<const double> x, const Terms& terms) {
      const auto& D = (*deltas)[k];
      return heat_integral(D, x[0], x[1], terms);
    };
    p.eval = [combo = p.combo](std::size_t k, std::span<const double> x, const MultiIndex& a) {
      return combo(k, x, Terms{{a, 1.0}});
    };
    p.convolver = [deltas, rings](std::size_t k, std::span<const double> x, const Terms& t, const SmoothFamily& g) {
      return delta_smooth_average((*deltas)[k], (*rings)[k], min_feature(g, k), x,
                                  [&](std::span<const double> y) { return heat_potential(g, k, t, y); });
    };
  } else {
    require(std::isfinite(c), ErrorKind::invalid_argument, "transport speed must be finite");
    p.combo = [deltas, c](std::size_t k, std::span<const double> x, const Terms& terms) {
      const auto& D = (*deltas)[k];
      return transport_integral(D.rho, c, x[0], x[1], DeltaCombo{&D, &terms});
    };
    p.eval = [combo = p.combo](std::size_t k, std::span<const double> x, const MultiIndex& a) {
      return combo(k, x, Terms{{a, 1.0}});
    };
    p.convolver = [deltas, c, rings](std::size_t k, std::span<const double> x, const Terms& t, const SmoothFamily& g) {
      return delta_smooth_average((*deltas)[k], (*rings)[k], min_feature(g, k), x,
                                  [&](std::span<const double> y) { return transport_potential(g, k, t, c, y); });
    };
    p.envelope = [deltas](std::size_t k, double) {
      const auto& D = (*deltas)[k];
      const double z[2] = {0.0, 0.0};
      return 2.0 * D.rho * D(std::span<const double>(z, 2));
    };
  }
  return SmoothFamily(std::move(p));
}

}  // namespace gfc
