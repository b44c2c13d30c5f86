#pragma once

// Nested forward-mode dual numbers. A Dual<Dual<double>> carries the value,
// two first-order seeds and their mixed second derivative; nesting N levels
// yields the exact mixed partial of order N in the top-most component. All
// analytic profiles in the library are written once as templates over the
// scalar type and differentiated through this type.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>

#include "gfc/multi_index.hpp"

namespace gfc {

template <class T>
struct Dual {
  T v{};
  T d{};
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Innermost double value.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

// ---- arithmetic -----------------------------------------------------------

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.v * b.d + a.d * b.v};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T inv = 1.0 / b.v;
  T q = a.v * inv;
  return {q, (a.d - q * b.d) * inv};
}

template <class T>
Dual<T> operator+(const Dual<T>& a, double s) {
  return {a.v + s, a.d};
}
template <class T>
Dual<T> operator+(double s, const Dual<T>& a) {
  return {a.v + s, a.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double s) {
  return {a.v - s, a.d};
}
template <class T>
Dual<T> operator-(double s, const Dual<T>& a) {
  return {s - a.v, -a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double s) {
  return {a.v * s, a.d * s};
}
template <class T>
Dual<T> operator*(double s, const Dual<T>& a) {
  return {a.v * s, a.d * s};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double s) {
  return {a.v / s, a.d / s};
}
template <class T>
Dual<T> operator/(double s, const Dual<T>& b) {
  T inv = 1.0 / b.v;
  T q = s * inv;
  return {q, -(q * b.d) * inv};
}

template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) {
  a = a + b;
  return a;
}
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) {
  a = a - b;
  return a;
}
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) {
  a = a * b;
  return a;
}
template <class T>
Dual<T>& operator+=(Dual<T>& a, double s) {
  a.v += s;
  return a;
}
template <class T>
Dual<T>& operator*=(Dual<T>& a, double s) {
  a = a * s;
  return a;
}

// Construction of a Dual from a plain double (constant, zero seed).
template <class T>
struct lift_t {
  static T from(double x) { return x; }
};
template <class T>
struct lift_t<Dual<T>> {
  static Dual<T> from(double x) { return {lift_t<T>::from(x), lift_t<T>::from(0.0)}; }
};
template <class T>
T lift(double x) {
  return lift_t<T>::from(x);
}

// ---- elementary functions -------------------------------------------------

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  return {log(a.v), a.d / a.v};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {sin(a.v), cos(a.v) * a.d};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {cos(a.v), -(sin(a.v) * a.d)};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}

/// |x| with the a.e. derivative sign(x); used only by kink profiles.
inline double abs_ae(double x) { return std::abs(x); }
template <class T>
Dual<T> abs_ae(const Dual<T>& a) {
  return primal(a) < 0.0 ? -a : a;
}

inline double square(double x) { return x * x; }
template <class T>
Dual<T> square(const Dual<T>& a) {
  return a * a;
}

template <class T>
T ipow(const T& x, int n) {
  T r = lift<T>(1.0);
  for (int i = 0; i < n; ++i) r = r * x;
  return r;
}

// ---- exact partial derivatives of generic profiles -----------------------

inline constexpr int kMaxAnalyticOrder = 6;

namespace detail {

template <int N>
struct nest {
  using type = Dual<typename nest<N - 1>::type>;
};
template <>
struct nest<0> {
  using type = double;
};
template <int N>
using nest_t = typename nest<N>::type;

template <int N>
nest_t<N> seed(double value, std::size_t var, const std::array<int, kMaxAnalyticOrder>& dirs) {
  if constexpr (N == 0) {
    return value;
  } else {
    using Inner = nest_t<N - 1>;
    return nest_t<N>{seed<N - 1>(value, var, dirs),
                     lift<Inner>(dirs[N - 1] == static_cast<int>(var) ? 1.0 : 0.0)};
  }
}

template <int N>
double top(const nest_t<N>& x) {
  if constexpr (N == 0) {
    return x;
  } else {
    return top<N - 1>(x.d);
  }
}

template <int N, class Profile>
double nested_partial(const Profile& profile, std::span<const double> x,
                      const std::array<int, kMaxAnalyticOrder>& dirs) {
  using T = nest_t<N>;
  std::array<T, kMaxDim> xs{};
  for (std::size_t i = 0; i < x.size(); ++i) xs[i] = seed<N>(x[i], i, dirs);
  T r = profile(std::span<const T>(xs.data(), x.size()));
  return top<N>(r);
}

}  // namespace detail

/// ∂^α of a profile written as `template <class T> T operator()(std::span<const T>) const`.
template <class Profile>
double partial(const Profile& profile, std::span<const double> x, const MultiIndex& alpha) {
  std::array<int, kMaxAnalyticOrder> dirs{};
  int n = 0;
  for (std::size_t i = 0; i < alpha.dim(); ++i)
    for (int j = 0; j < alpha[i]; ++j) {
      if (n >= kMaxAnalyticOrder) fail(ErrorKind::smoothness_exceeded, "analytic derivative order above 6");
      dirs[n++] = static_cast<int>(i);
    }
  switch (n) {
    case 0: return profile(x);
    case 1: return detail::nested_partial<1>(profile, x, dirs);
    case 2: return detail::nested_partial<2>(profile, x, dirs);
    case 3: return detail::nested_partial<3>(profile, x, dirs);
    case 4: return detail::nested_partial<4>(profile, x, dirs);
    case 5: return detail::nested_partial<5>(profile, x, dirs);
    default: return detail::nested_partial<6>(profile, x, dirs);
  }
}

}  // namespace gfc
