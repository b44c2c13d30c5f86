#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "gfc/dual.hpp"
#include "gfc/error.hpp"
#include "gfc/quadrature.hpp"

namespace gfc {

enum class MollifierKind { bump, gaussian, sinc };

inline std::string_view to_string(MollifierKind k) {
  switch (k) {
    case MollifierKind::bump: return "bump";
    case MollifierKind::gaussian: return "gaussian";
    case MollifierKind::sinc: return "sinc";
  }
  return "?";
}

inline MollifierKind parse_mollifier_kind(std::string_view name) {
  if (name == "bump") return MollifierKind::bump;
  if (name == "gaussian") return MollifierKind::gaussian;
  if (name == "sinc") return MollifierKind::sinc;
  fail(ErrorKind::unknown_name, "unknown mollifier kind '" + std::string(name) + "'");
}

/// Surface measure of the unit sphere S^{d-1} (|S^0| = 2).
inline double unit_sphere_area(std::size_t d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// ∫_{R^d} exp(-1/(1-|x|²)) over the unit ball, by adaptive quadrature to 1e-12.
inline double bump_mass(std::size_t d) {
  require(d >= 1 && d <= kMaxDim, ErrorKind::invalid_argument, "bump dimension must be 1..3");
  static std::array<double, kMaxDim + 1> cache{};
  static std::array<std::once_flag, kMaxDim + 1> flags;
  std::call_once(flags[d], [d] {
    auto radial = [d](double r) {
      if (r >= 1.0) return 0.0;
      return std::pow(r, static_cast<double>(d - 1)) * std::exp(-1.0 / (1.0 - r * r));
    };
    cache[d] = unit_sphere_area(d) * integrate_adaptive(radial, 0.0, 1.0, 1e-12, 15).value;
  });
  return cache[d];
}

/// sin(u)/u, with a Taylor branch near 0 so derivatives stay exact.
template <class T>
T sinc_ratio(const T& u) {
  if (std::abs(primal(u)) < 1e-3) {
    T u2 = u * u;
    return 1.0 - u2 * (1.0 / 6.0 - u2 * (1.0 / 120.0 - u2 * (1.0 / 5040.0 - u2 * (1.0 / 362880.0))));
  }
  return sin(u) / u;
}

/// A fixed smooth profile ψ with ∫ψ = 1: the compact bump, the Gaussian, or
/// the (1-D) sinc kernel sin(x)/(πx). `width` dilates ψ to w^{-d}ψ(x/w).
class Mollifier {
 public:
  Mollifier(MollifierKind kind, std::size_t dim, double width = 1.0) : kind_(kind), dim_(dim), width_(width) {
    require(dim >= 1 && dim <= kMaxDim, ErrorKind::invalid_argument, "mollifier dimension must be 1..3");
    require(width > 0.0 && std::isfinite(width), ErrorKind::invalid_argument, "mollifier width must be positive");
    switch (kind) {
      case MollifierKind::bump:
        normalization_ = 1.0 / bump_mass(dim);
        support_radius_ = width;
        abs_integral_ = 1.0;
        break;
      case MollifierKind::gaussian:
        normalization_ = std::pow(2.0 * std::numbers::pi, -0.5 * dim);
        support_radius_ = kInf;
        abs_integral_ = 1.0;
        break;
      case MollifierKind::sinc:
        require(dim == 1, ErrorKind::invalid_argument, "the sinc mollifier is only defined for d = 1");
        normalization_ = 1.0 / std::numbers::pi;
        support_radius_ = kInf;
        abs_integral_ = kInf;
        break;
    }
    amplitude_ = normalization_ * std::pow(width_, -static_cast<double>(dim_));
  }

  MollifierKind kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }
  double width() const { return width_; }
  double support_radius() const { return support_radius_; }
  /// Multiplier C making ∫ψ = 1 for the undilated profile.
  double normalization() const { return normalization_; }
  double abs_integral() const { return abs_integral_; }
  bool compact() const { return std::isfinite(support_radius_); }

  template <class T>
  T operator()(std::span<const T> x) const {
    if (kind_ == MollifierKind::sinc) return amplitude_ * sinc_ratio(T(x[0] / width_));
    T s = square(x[0] / width_);
    for (std::size_t i = 1; i < dim_; ++i) s = s + square(x[i] / width_);
    if (kind_ == MollifierKind::gaussian) return amplitude_ * exp(-0.5 * s);
    if (primal(s) >= 1.0) return lift<T>(0.0);
    return amplitude_ * exp(-1.0 / (1.0 - s));
  }

  /// Upper bound on |ψ(x)| for |x| ≥ r.
  double envelope(double r) const {
    const double scale = std::pow(width_, -static_cast<double>(dim_));
    const double u = r / width_;
    switch (kind_) {
      case MollifierKind::bump: return u >= 1.0 ? 0.0 : normalization_ * scale * std::exp(-1.0 / (1.0 - u * u));
      case MollifierKind::gaussian: return normalization_ * scale * std::exp(-0.5 * u * u);
      case MollifierKind::sinc: return u <= 1.0 ? normalization_ * scale : normalization_ * scale / u;
    }
    return kInf;
  }

 private:
  MollifierKind kind_;
  std::size_t dim_;
  double width_;
  double normalization_ = 1.0;
  double support_radius_ = 1.0;
  double abs_integral_ = 1.0;
  double amplitude_ = 1.0;
};

inline Mollifier make_mollifier(MollifierKind kind, std::size_t dim) { return Mollifier(kind, dim); }

inline Mollifier make_mollifier(std::string_view kind, std::size_t dim) {
  return Mollifier(parse_mollifier_kind(kind), dim);
}

}  // namespace gfc
