#pragma once

// Induced geometry of an immersed 3-manifold in coordinates: pushforward,
// induced metric, Christoffel symbols, second fundamental form, the
// tangential/normal parts A, B of P, and the Lagrangian test.

#include <array>
#include <stdexcept>

#include "nkl/ambient.hpp"
#include "nkl/jet.hpp"

namespace nkl {

template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

template <Scalar S>
Mat3<S> inverse3(const Mat3<S>& m) {
  Mat3<S> c;
  c[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  c[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  c[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  c[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  c[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  c[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  c[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  c[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  c[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  S det = m[0][0] * c[0][0] + m[0][1] * c[1][0] + m[0][2] * c[2][0];
  if (std::abs(value_of(det)) < 1e-300) throw std::domain_error("singular induced metric");
  S inv = 1.0 / det;
  for (auto& row : c)
    for (auto& e : row) e = e * inv;
  return c;
}

/// Everything first- and second-order about the chart at one point.
template <Scalar S>
struct ChartGeometry {
  AmbientPoint<S> x;
  Arr3<AmbientVector<S>> f;       // f_a = df(d_a)
  Arr3<AmbientVector<S>> Jf;      // J f_a
  Mat3<S> G, Ginv;                // induced metric and inverse
  Mat3<S> A, B;                   // g(P f_a, f_b), g(P f_a, J f_b)
  Mat3<S> L;                      // g(f_a, J f_b); zero iff Lagrangian
  Mat3<AmbientVector<S>> nabla;   // nearly Kaehler derivative of f_b along f_a
  Mat3<Arr3<S>> gamma_low;        // g(nabla_{d_a} d_b, d_c)
  Mat3<Arr3<S>> gamma;            // Gamma^c_ab
  Mat3<AmbientVector<S>> h;       // second fundamental form h(d_a, d_b)
  Mat3<Arr3<S>> h3;               // g(h(d_a,d_b), J f_c)

  /// Tangential part (as a vector) of an ambient vector.
  AmbientVector<S> tangential_part(const AmbientVector<S>& w) const {
    Arr3<S> c = coords(w);
    AmbientVector<S> r = AmbientVector<S>::zero(x);
    for (int a = 0; a < 3; ++a) r += c[a] * f[a];
    return r;
  }
  AmbientVector<S> normal_part(const AmbientVector<S>& w) const { return w - tangential_part(w); }

  /// Coordinates of the tangential projection of w in the basis f_a.
  Arr3<S> coords(const AmbientVector<S>& w) const {
    Arr3<S> gw, c;
    for (int a = 0; a < 3; ++a) gw[a] = metric_g(w, f[a]);
    for (int a = 0; a < 3; ++a) c[a] = Ginv[a][0] * gw[0] + Ginv[a][1] * gw[1] + Ginv[a][2] * gw[2];
    return c;
  }

  /// Coordinates of a normal vector w.r.t. the basis J f_a.
  Arr3<S> normal_coords(const AmbientVector<S>& w) const {
    Arr3<S> gw, c;
    for (int a = 0; a < 3; ++a) gw[a] = metric_g(w, Jf[a]);
    for (int a = 0; a < 3; ++a) c[a] = Ginv[a][0] * gw[0] + Ginv[a][1] * gw[1] + Ginv[a][2] * gw[2];
    return c;
  }

  AmbientVector<S> combine(const Arr3<S>& c) const {
    return c[0] * f[0] + c[1] * f[1] + c[2] * f[2];
  }
};

template <Scalar S>
ChartGeometry<S> chart_geometry(const Jet2<S>& j) {
  ChartGeometry<S> cg;
  cg.x = j.x;
  for (int a = 0; a < 3; ++a) {
    // Exact jets are tangent already; projecting absorbs finite-difference error.
    cg.f[a] = tangential(j.x, j.d1[a]);
    cg.Jf[a] = apply_J(cg.f[a]);
  }
  Arr3<AmbientVector<S>> Pf;
  for (int a = 0; a < 3; ++a) Pf[a] = apply_P(cg.f[a]);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      cg.G[a][b] = metric_g(cg.f[a], cg.f[b]);
      cg.A[a][b] = metric_g(Pf[a], cg.f[b]);
      cg.B[a][b] = metric_g(Pf[a], cg.Jf[b]);
      cg.L[a][b] = metric_g(cg.f[a], cg.Jf[b]);
    }
  cg.Ginv = inverse3(cg.G);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      // The second partials are the flat derivative of the field f_b along f_a.
      cg.nabla[a][b] = nk_derivative(j.d2[a][b], cg.f[a], cg.f[b]);
      for (int c = 0; c < 3; ++c) cg.gamma_low[a][b][c] = metric_g(cg.nabla[a][b], cg.f[c]);
      for (int c = 0; c < 3; ++c)
        cg.gamma[a][b][c] = cg.Ginv[c][0] * cg.gamma_low[a][b][0] + cg.Ginv[c][1] * cg.gamma_low[a][b][1] +
                            cg.Ginv[c][2] * cg.gamma_low[a][b][2];
      AmbientVector<S> tang = cg.combine(cg.gamma[a][b]);
      cg.h[a][b] = cg.nabla[a][b] - tang;
      for (int c = 0; c < 3; ++c) cg.h3[a][b][c] = metric_g(cg.h[a][b], cg.Jf[c]);
    }
  return cg;
}

/// Dual-number derivative part of a scalar / matrix.
inline double dpart(const Dual1& s) { return s.d; }
inline Mat3<double> dpart(const Mat3<Dual1>& m) {
  Mat3<double> r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r[a][b] = m[a][b].d;
  return r;
}
inline Mat3<double> vpart(const Mat3<Dual1>& m) {
  Mat3<double> r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r[a][b] = m[a][b].v;
  return r;
}
inline R8<double> dpart(const AmbientVector<Dual1>& w) {
  auto d = [](const Quaternion<Dual1>& q) { return Quat{q.w.d, q.x.d, q.y.d, q.z.d}; };
  return {d(w.u), d(w.v)};
}

}  // namespace nkl
