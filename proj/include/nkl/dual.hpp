#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<T>> gives mixed higher-order
// directional derivatives without truncation error.

#include <cmath>
#include <ostream>
#include <type_traits>

namespace nkl {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // directional derivative

  constexpr Dual() = default;
  constexpr Dual(T value, T derivative) : v(value), d(derivative) {}
  // Constants carry a zero derivative payload.
  constexpr Dual(double c) : v(c), d(0.0) {}

  constexpr Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) { return *this = *this * o; }
  constexpr Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend constexpr Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
  }

  friend constexpr Dual operator+(const Dual& a, double b) { return {a.v + b, a.d}; }
  friend constexpr Dual operator+(double a, const Dual& b) { return {a + b.v, b.d}; }
  friend constexpr Dual operator-(const Dual& a, double b) { return {a.v - b, a.d}; }
  friend constexpr Dual operator-(double a, const Dual& b) { return {a - b.v, -b.d}; }
  friend constexpr Dual operator*(const Dual& a, double b) { return {a.v * b, a.d * b}; }
  friend constexpr Dual operator*(double a, const Dual& b) { return {a * b.v, a * b.d}; }
  friend constexpr Dual operator/(const Dual& a, double b) { return {a.v / b, a.d / b}; }
  friend constexpr Dual operator/(double a, const Dual& b) { return Dual(a) / b; }
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

template <class S>
concept Scalar = std::is_same_v<S, double> || is_dual<S>::value;

/// Innermost real value of a (possibly nested) dual.
constexpr double value_of(double x) { return x; }
template <class T>
constexpr double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.v), cos(x.v) * x.d};
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.v), -(sin(x.v) * x.d)};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  return {e, e * x.d};
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T r = sqrt(x.v);
  return {r, x.d / (2.0 * r)};
}

template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& x) {
  return os << '(' << x.v << " + " << x.d << "e)";
}

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;
using Dual3 = Dual<Dual2>;

/// Seeds a variable with up to three nested perturbation directions
/// (components `a`, `b`, `c` of this coordinate along each direction).
inline Dual1 seed1(double x, double a) { return {x, a}; }
inline Dual2 seed2(double x, double a, double b) { return {seed1(x, a), Dual1{b, 0.0}}; }
inline Dual3 seed3(double x, double a, double b, double c) {
  return {seed2(x, a, b), Dual2{Dual1{c, 0.0}, Dual1{0.0, 0.0}}};
}

}  // namespace nkl
