#pragma once

// The homogeneous nearly Kaehler structure on S^3 x S^3: left-invariant
// frame, almost complex structure J, almost product structure P, product
// structure Q, both metrics, the tensors G = (nabla J) and nabla P, the
// curvature tensor, and conversions between the flat R^8, product and
// nearly Kaehler connections.

#include <array>
#include <cmath>
#include <stdexcept>

#include "nkl/quaternion.hpp"

namespace nkl {

inline const double kSqrt3 = std::sqrt(3.0);

template <Scalar S>
struct AmbientPoint {
  Quaternion<S> p, q;
};

using Point = AmbientPoint<double>;

template <Scalar S>
Point value_of(const AmbientPoint<S>& x) {
  return {value_of(x.p), value_of(x.q)};
}

inline void require_on_manifold(const Point& x, double tol = 1e-12) {
  if (!is_unit(x.p, tol) || !is_unit(x.q, tol))
    throw std::domain_error("point is not on S^3 x S^3");
}

/// A raw vector of H^2 = R^8 with no base point (second derivatives, etc.).
template <Scalar S>
struct R8 {
  Quaternion<S> u, v;

  friend R8 operator+(const R8& a, const R8& b) { return {a.u + b.u, a.v + b.v}; }
  friend R8 operator-(const R8& a, const R8& b) { return {a.u - b.u, a.v - b.v}; }
  friend R8 operator-(const R8& a) { return {-a.u, -a.v}; }
  friend R8 operator*(const S& s, const R8& a) { return {s * a.u, s * a.v}; }
};

template <Scalar S>
S dot(const R8<S>& a, const R8<S>& b) {
  return dot(a.u, b.u) + dot(a.v, b.v);
}

/// Tangent vector Z = (U, V) at (p, q).
template <Scalar S>
struct AmbientVector {
  AmbientPoint<S> base;
  Quaternion<S> u, v;

  R8<S> raw() const { return {u, v}; }
  static AmbientVector zero(const AmbientPoint<S>& at) { return {at, {}, {}}; }

  friend AmbientVector operator+(const AmbientVector& a, const AmbientVector& b) {
    return {a.base, a.u + b.u, a.v + b.v};
  }
  friend AmbientVector operator-(const AmbientVector& a, const AmbientVector& b) {
    return {a.base, a.u - b.u, a.v - b.v};
  }
  friend AmbientVector operator-(const AmbientVector& a) { return {a.base, -a.u, -a.v}; }
  friend AmbientVector operator*(const S& s, const AmbientVector& a) {
    return {a.base, s * a.u, s * a.v};
  }
  AmbientVector& operator+=(const AmbientVector& o) { return *this = *this + o; }
  AmbientVector& operator-=(const AmbientVector& o) { return *this = *this - o; }
};

using Vector = AmbientVector<double>;

template <Scalar S>
Vector value_of(const AmbientVector<S>& z) {
  return {value_of(z.base), value_of(z.u), value_of(z.v)};
}

namespace detail {

inline void require_same_base(const Point& a, const Point& b, const char* what) {
  constexpr double tol = 1e-12;
  auto close = [](const Quat& x, const Quat& y) { return (x - y).norm() <= tol; };
  if (!close(a.p, b.p) || !close(a.q, b.q))
    throw std::domain_error(std::string(what) + ": vectors live at different base points");
}

template <Scalar S>
void require_same_base(const AmbientVector<S>& a, const AmbientVector<S>& b, const char* what) {
  require_same_base(value_of(a.base), value_of(b.base), what);
}

// Imaginary units with the frame's sign convention: e_1 = i, e_2 = j, e_3 = -k.
template <Scalar S>
Quaternion<S> frame_unit(int idx) {
  switch (idx) {
    case 0: return Quaternion<S>::i();
    case 1: return Quaternion<S>::j();
    default: return -Quaternion<S>::k();
  }
}

template <Scalar S>
using Coeff3 = std::array<S, 3>;

template <Scalar S>
Coeff3<S> cross(const Coeff3<S>& a, const Coeff3<S>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Coefficients of a left-translated imaginary quaternion w.r.t. (i, j, -k).
template <Scalar S>
Coeff3<S> frame_coeffs(const Quaternion<S>& left_translated) {
  return {left_translated.x, left_translated.y, -left_translated.z};
}

template <Scalar S>
Quaternion<S> from_frame_coeffs(const Coeff3<S>& c) {
  return {S(0.0), c[0], c[1], -c[2]};
}

}  // namespace detail

/// Six left-invariant fields E_i = (p e_i, 0), F_i = (0, q e_i).
template <Scalar S>
struct FrameBasis {
  std::array<AmbientVector<S>, 3> E, F;
};

template <Scalar S>
FrameBasis<S> frame_at(const AmbientPoint<S>& pt) {
  FrameBasis<S> fb;
  for (int i = 0; i < 3; ++i) {
    auto e = detail::frame_unit<S>(i);
    fb.E[i] = {pt, pt.p * e, Quaternion<S>{}};
    fb.F[i] = {pt, Quaternion<S>{}, pt.q * e};
  }
  return fb;
}

/// Components of Z in the frame: Z = sum a_i E_i + b_i F_i.
template <Scalar S>
struct FrameCoeffs {
  detail::Coeff3<S> a, b;
};

template <Scalar S>
FrameCoeffs<S> frame_coeffs(const AmbientVector<S>& z) {
  return {detail::frame_coeffs(z.base.p.conj() * z.u), detail::frame_coeffs(z.base.q.conj() * z.v)};
}

template <Scalar S>
AmbientVector<S> from_frame_coeffs(const AmbientPoint<S>& at, const FrameCoeffs<S>& c) {
  return {at, at.p * detail::from_frame_coeffs(c.a), at.q * detail::from_frame_coeffs(c.b)};
}

template <Scalar S>
AmbientVector<S> apply_J(const AmbientVector<S>& z) {
  const auto& p = z.base.p;
  const auto& q = z.base.q;
  const double s = 1.0 / kSqrt3;
  return {z.base, S(s) * (2.0 * (p * q.conj() * z.v) - z.u),
          S(s) * (z.v - 2.0 * (q * p.conj() * z.u))};
}

template <Scalar S>
AmbientVector<S> apply_P(const AmbientVector<S>& z) {
  const auto& p = z.base.p;
  const auto& q = z.base.q;
  return {z.base, p * q.conj() * z.v, q * p.conj() * z.u};
}

template <Scalar S>
AmbientVector<S> apply_Q(const AmbientVector<S>& z) {
  return {z.base, -z.u, z.v};
}

/// Product round metric <Z, Z'>.
template <Scalar S>
S metric_euclid(const AmbientVector<S>& z, const AmbientVector<S>& w) {
  detail::require_same_base(z, w, "metric_euclid");
  return dot(z.u, w.u) + dot(z.v, w.v);
}

/// Nearly Kaehler metric g(Z, Z') = (<Z,Z'> + <JZ,JZ'>)/2.
template <Scalar S>
S metric_g(const AmbientVector<S>& z, const AmbientVector<S>& w) {
  detail::require_same_base(z, w, "metric_g");
  auto jz = apply_J(z);
  auto jw = apply_J(w);
  return 0.5 * (dot(z.u, w.u) + dot(z.v, w.v) + dot(jz.u, jw.u) + dot(jz.v, jw.v));
}

/// The same metric in its 4/3, -2/3 closed form.
template <Scalar S>
S metric_g_closed(const AmbientVector<S>& z, const AmbientVector<S>& w) {
  detail::require_same_base(z, w, "metric_g_closed");
  const auto pc = z.base.p.conj();
  const auto qc = z.base.q.conj();
  return (4.0 / 3.0) * (dot(z.u, w.u) + dot(z.v, w.v)) -
         (2.0 / 3.0) * (dot(pc * z.u, qc * w.v) + dot(pc * w.u, qc * z.v));
}

/// G(X, Y) = (nabla_X J) Y by bilinear expansion in the left-invariant frame.
template <Scalar S>
AmbientVector<S> tensor_G(const AmbientVector<S>& x, const AmbientVector<S>& y) {
  detail::require_same_base(x, y, "tensor_G");
  using detail::cross;
  auto cx = frame_coeffs(x);
  auto cy = frame_coeffs(y);
  auto ac = cross(cx.a, cy.a);
  auto ad = cross(cx.a, cy.b);
  auto bc = cross(cx.b, cy.a);
  auto bd = cross(cx.b, cy.b);
  const double kappa = 2.0 / (3.0 * kSqrt3);
  FrameCoeffs<S> out;
  for (int k = 0; k < 3; ++k) {
    out.a[k] = -kappa * (ac[k] + ad[k] + bc[k] - 2.0 * bd[k]);
    out.b[k] = -kappa * (2.0 * ac[k] - ad[k] - bc[k] - bd[k]);
  }
  return from_frame_coeffs(x.base, out);
}

/// (nabla_X P) Y by bilinear expansion in the left-invariant frame.
template <Scalar S>
AmbientVector<S> tensor_nablaP(const AmbientVector<S>& x, const AmbientVector<S>& y) {
  detail::require_same_base(x, y, "tensor_nablaP");
  using detail::cross;
  auto cx = frame_coeffs(x);
  auto cy = frame_coeffs(y);
  detail::Coeff3<S> amb;
  for (int k = 0; k < 3; ++k) amb[k] = cx.a[k] - cx.b[k];
  auto mc = cross(amb, cy.a);
  auto md = cross(amb, cy.b);
  FrameCoeffs<S> out;
  for (int k = 0; k < 3; ++k) {
    out.a[k] = (1.0 / 3.0) * (mc[k] - 2.0 * md[k]);
    out.b[k] = (1.0 / 3.0) * (2.0 * mc[k] - md[k]);
  }
  return from_frame_coeffs(x.base, out);
}

/// Riemann curvature R(X,Y)Z of g, R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
template <Scalar S>
AmbientVector<S> curvature_R(const AmbientVector<S>& x, const AmbientVector<S>& y,
                             const AmbientVector<S>& z) {
  detail::require_same_base(x, y, "curvature_R");
  detail::require_same_base(x, z, "curvature_R");
  auto g = [](const AmbientVector<S>& a, const AmbientVector<S>& b) { return metric_g(a, b); };
  auto jx = apply_J(x), jy = apply_J(y), jz = apply_J(z);
  auto px = apply_P(x), py = apply_P(y);
  auto jpx = apply_J(px), jpy = apply_J(py);
  AmbientVector<S> r = (5.0 / 12.0) * (g(y, z) * x - g(x, z) * y);
  r += (1.0 / 12.0) * (g(jy, z) * jx - g(jx, z) * jy - 2.0 * g(jx, y) * jz);
  r += (1.0 / 3.0) * (g(py, z) * px - g(px, z) * py + g(jpy, z) * jpx - g(jpx, z) * jpy);
  return r;
}

/// Orthogonal projection of a raw R^8 vector onto T_(p,q)(S^3 x S^3).
template <Scalar S>
AmbientVector<S> tangential(const AmbientPoint<S>& at, const R8<S>& w) {
  return {at, w.u - dot(w.u, at.p) * at.p, w.v - dot(w.v, at.q) * at.q};
}

template <Scalar S>
bool is_tangent(const AmbientVector<S>& z, double tol = 1e-9) {
  auto zv = value_of(z);
  double scale = 1.0 + zv.u.norm() + zv.v.norm();
  return std::abs(dot(zv.u, zv.base.p)) <= tol * scale && std::abs(dot(zv.v, zv.base.q)) <= tol * scale;
}

enum class ConnectionKind { EuclidToProduct, ProductToNearlyKaehler };

/// Product Levi-Civita derivative from the flat R^8 derivative D_X Y of a
/// tangent field Y along a map f: adds back (<X,Y> f + <X,QY> Qf)/2, then
/// projects tangentially.
template <Scalar S>
AmbientVector<S> euclid_to_product(const R8<S>& flat, const AmbientVector<S>& x,
                                   const AmbientVector<S>& y) {
  if (!is_tangent(x) || !is_tangent(y))
    throw std::domain_error("connect_convert: non-tangent input");
  S xy = metric_euclid(x, y);
  S xqy = metric_euclid(x, apply_Q(y));
  const auto& at = x.base;
  R8<S> f{at.p, at.q};
  R8<S> qf{-at.p, at.q};
  R8<S> full = flat + S(0.5) * (xy * f + xqy * qf);
  return tangential(at, full);
}

/// Nearly Kaehler Levi-Civita derivative from the product one.
template <Scalar S>
AmbientVector<S> product_to_nk(const AmbientVector<S>& nabla_e, const AmbientVector<S>& x,
                               const AmbientVector<S>& y) {
  if (!is_tangent(x) || !is_tangent(y) || !is_tangent(nabla_e))
    throw std::domain_error("connect_convert: non-tangent input");
  auto corr = apply_J(tensor_G(x, apply_P(y))) + apply_J(tensor_G(y, apply_P(x)));
  return nabla_e - S(0.5) * corr;
}

/// Full chain: flat R^8 derivative of Y along X -> nearly Kaehler derivative.
template <Scalar S>
AmbientVector<S> nk_derivative(const R8<S>& flat, const AmbientVector<S>& x,
                               const AmbientVector<S>& y) {
  return product_to_nk(euclid_to_product(flat, x, y), x, y);
}

/// Ambient isometry (p, q) -> (a p c^-1, b q c^-1) for unit a, b, c.
struct Isometry {
  Quat a = Quat::one(), b = Quat::one(), c = Quat::one();

  template <Scalar S>
  AmbientPoint<S> apply(const AmbientPoint<S>& x) const {
    auto cc = lift<S>(c.conj());
    return {lift<S>(a) * x.p * cc, lift<S>(b) * x.q * cc};
  }
  /// Differential on raw R^8 data (linear, so it acts on any jet component).
  template <Scalar S>
  R8<S> push(const R8<S>& w) const {
    auto cc = lift<S>(c.conj());
    return {lift<S>(a) * w.u * cc, lift<S>(b) * w.v * cc};
  }
  template <Scalar S>
  AmbientVector<S> push(const AmbientVector<S>& z) const {
    auto w = push(z.raw());
    return {apply(z.base), w.u, w.v};
  }
};

}  // namespace nkl
