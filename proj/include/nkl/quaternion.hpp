#pragma once

// Hamilton quaternions over a (possibly dual) scalar. Unit quaternions model
// points of S^3; imaginary quaternions model its Lie algebra.

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nkl/dual.hpp"

namespace nkl {

template <Scalar S>
struct Quaternion {
  S w{}, x{}, y{}, z{};  // w + x i + y j + z k

  constexpr Quaternion() = default;
  constexpr Quaternion(S w_, S x_, S y_, S z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion real(S r) { return {r, S(0.0), S(0.0), S(0.0)}; }
  static constexpr Quaternion one() { return real(S(1.0)); }
  static constexpr Quaternion i() { return {S(0.0), S(1.0), S(0.0), S(0.0)}; }
  static constexpr Quaternion j() { return {S(0.0), S(0.0), S(1.0), S(0.0)}; }
  static constexpr Quaternion k() { return {S(0.0), S(0.0), S(0.0), S(1.0)}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr S norm2() const { return w * w + x * x + y * y + z * z; }
  S norm() const {
    using std::sqrt;
    return sqrt(norm2());
  }
  constexpr Quaternion imag() const { return {S(0.0), x, y, z}; }
  constexpr std::array<S, 4> coeffs() const { return {w, x, y, z}; }

  Quaternion& operator+=(const Quaternion& o) { return *this = *this + o; }
  Quaternion& operator-=(const Quaternion& o) { return *this = *this - o; }

  friend constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr bool operator==(const Quaternion& a, const Quaternion& b) = default;
  friend constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }

  // Hamilton product: ij = k, jk = i, ki = j.
  friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend constexpr Quaternion operator*(const S& s, const Quaternion& a) {
    return {s * a.w, s * a.x, s * a.y, s * a.z};
  }
  friend constexpr Quaternion operator*(const Quaternion& a, const S& s) { return s * a; }
  friend constexpr Quaternion operator/(const Quaternion& a, const S& s) {
    return {a.w / s, a.x / s, a.y / s, a.z / s};
  }
};

using Quat = Quaternion<double>;

template <Scalar S>
constexpr Quaternion<S> qmul(const Quaternion<S>& a, const Quaternion<S>& b) {
  return a * b;
}

/// Euclidean R^4 inner product.
template <Scalar S>
constexpr S dot(const Quaternion<S>& a, const Quaternion<S>& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

template <Scalar S>
Quaternion<S> qinv(const Quaternion<S>& a) {
  S n2 = a.norm2();
  if (!(value_of(n2) > 0.0)) throw std::domain_error("qinv: zero-norm quaternion");
  return a.conj() / n2;
}

/// Promotes a real quaternion to a dual-valued constant.
template <Scalar S>
constexpr Quaternion<S> lift(const Quat& q) {
  return {S(q.w), S(q.x), S(q.y), S(q.z)};
}

template <Scalar S>
Quat value_of(const Quaternion<S>& q) {
  return {value_of(q.w), value_of(q.x), value_of(q.y), value_of(q.z)};
}

template <Scalar S>
struct ImQuaternion {
  S x{}, y{}, z{};

  constexpr ImQuaternion() = default;
  constexpr ImQuaternion(S x_, S y_, S z_) : x(x_), y(y_), z(z_) {}
  /// Drops the real part.
  constexpr explicit ImQuaternion(const Quaternion<S>& q) : x(q.x), y(q.y), z(q.z) {}

  constexpr Quaternion<S> quat() const { return {S(0.0), x, y, z}; }
  constexpr S norm2() const { return x * x + y * y + z * z; }

  friend constexpr ImQuaternion operator+(const ImQuaternion& a, const ImQuaternion& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr ImQuaternion operator-(const ImQuaternion& a, const ImQuaternion& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr ImQuaternion operator-(const ImQuaternion& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr ImQuaternion operator*(const S& s, const ImQuaternion& a) {
    return {s * a.x, s * a.y, s * a.z};
  }
};

using ImQuat = ImQuaternion<double>;

/// (ab - ba)/2 for imaginary a, b; the cross product in R^3.
template <Scalar S>
constexpr ImQuaternion<S> im_half_commutator(const ImQuaternion<S>& a, const ImQuaternion<S>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

namespace detail {

// cos(sqrt(s)) and sin(sqrt(s))/sqrt(s) as smooth functions of s >= 0.
template <Scalar S>
S cos_sqrt(const S& s) {
  using std::cos;
  using std::sqrt;
  if (value_of(s) < 1e-2) {
    S term(1.0), sum(1.0);
    for (int n = 1; n < 12; ++n) {
      term = term * (-1.0) * s / double((2 * n - 1) * (2 * n));
      sum = sum + term;
    }
    return sum;
  }
  return cos(sqrt(s));
}

template <Scalar S>
S sinc_sqrt(const S& s) {
  using std::sin;
  using std::sqrt;
  if (value_of(s) < 1e-2) {
    S term(1.0), sum(1.0);
    for (int n = 1; n < 12; ++n) {
      term = term * (-1.0) * s / double((2 * n) * (2 * n + 1));
      sum = sum + term;
    }
    return sum;
  }
  S r = sqrt(s);
  return sin(r) / r;
}

}  // namespace detail

/// Exponential of an imaginary quaternion; smooth (and AD-safe) at zero.
template <Scalar S>
Quaternion<S> exp_im(const ImQuaternion<S>& v) {
  S s = v.norm2();
  S c = detail::cos_sqrt(s);
  S sc = detail::sinc_sqrt(s);
  return {c, sc * v.x, sc * v.y, sc * v.z};
}

/// Tolerance policy for points of S^3: deviations up to 1e-12 are accepted
/// as is, up to `reject_tol` are renormalized, anything larger is rejected.
inline Quat to_unit(const Quat& q, double reject_tol = 1e-9) {
  double n = q.norm();
  double dev = std::abs(n - 1.0);
  if (!(dev <= reject_tol)) throw std::domain_error("to_unit: quaternion is not of unit norm");
  if (dev > 1e-12) return q / n;
  return q;
}

inline bool is_unit(const Quat& q, double tol = 1e-12) { return std::abs(q.norm() - 1.0) <= tol; }
inline bool is_imaginary(const Quat& q, double tol = 1e-12) { return std::abs(q.w) <= tol; }

template <Scalar S>
std::ostream& operator<<(std::ostream& os, const Quaternion<S>& q) {
  return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

}  // namespace nkl
