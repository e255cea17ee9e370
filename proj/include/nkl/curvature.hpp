#pragma once

// Sectional curvature two ways: from the Gauss equation (ambient data and
// h) and from finite differences of the induced metric alone.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "nkl/identities.hpp"

namespace nkl {

namespace detail {

inline Mat3<double> induced_metric(const Immersion& imm, const ChartPoint& x) {
  Jet j = imm.jet(x, 1);
  Mat3<double> G{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Vector fa{j.x, j.d1[a].u, j.d1[a].v}, fb{j.x, j.d1[b].u, j.d1[b].v};
      G[a][b] = metric_g(fa, fb);
    }
  return G;
}

// Fourth-order central difference of a matrix-valued function along axis c.
template <class F>
Mat3<double> central4(F f, ChartPoint x, int c, double h) {
  auto at = [&](double s) {
    ChartPoint y = x;
    y[c] += s * h;
    return f(y);
  };
  Mat3<double> m2 = at(-2), m1 = at(-1), p1 = at(1), p2 = at(2), r{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r[a][b] = (m2[a][b] - 8 * m1[a][b] + 8 * p1[a][b] - p2[a][b]) / (12 * h);
  return r;
}

// Gamma^c_ab of the induced metric, by differences of G.
inline Mat3<Arr3<double>> fd_christoffel(const Immersion& imm, const ChartPoint& x, double h) {
  Mat3<double> G = induced_metric(imm, x), Gi = inverse3(G);
  std::array<Mat3<double>, 3> dG;
  for (int c = 0; c < 3; ++c)
    dG[c] = central4([&](const ChartPoint& y) { return induced_metric(imm, y); }, x, c, h);
  Mat3<Arr3<double>> gam{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int d = 0; d < 3; ++d) s += Gi[c][d] * 0.5 * (dG[a][b][d] + dG[b][a][d] - dG[d][a][b]);
        gam[a][b][c] = s;
      }
  return gam;
}

}  // namespace detail

/// Sectional curvature of span(X, Y) (chart directions) from differences
/// of the induced metric. Only defined for analytic immersions.
inline double sectional_curvature_fd(const Immersion& imm, const ChartPoint& x, const Arr3<double>& X,
                                     const Arr3<double>& Y, double h = 1e-3) {
  if (imm.is_sampled()) throw std::invalid_argument("metric-difference curvature needs an analytic immersion");
  auto gam = detail::fd_christoffel(imm, x, h);
  // d_e Gamma^c_ab
  std::array<Mat3<Arr3<double>>, 3> dgam;
  for (int e = 0; e < 3; ++e) {
    ChartPoint lo2 = x, lo1 = x, hi1 = x, hi2 = x;
    lo2[e] -= 2 * h;
    lo1[e] -= h;
    hi1[e] += h;
    hi2[e] += 2 * h;
    auto g0 = detail::fd_christoffel(imm, lo2, h), g1 = detail::fd_christoffel(imm, lo1, h);
    auto g2 = detail::fd_christoffel(imm, hi1, h), g3 = detail::fd_christoffel(imm, hi2, h);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          dgam[e][a][b][c] = (g0[a][b][c] - 8 * g1[a][b][c] + 8 * g2[a][b][c] - g3[a][b][c]) / (12 * h);
  }
  Mat3<double> G = detail::induced_metric(imm, x);
  // R(d_a, d_b) d_c = R^d_cab d_d
  auto Rup = [&](int a, int b, int c, int d) {
    double r = dgam[a][b][c][d] - dgam[b][a][c][d];
    for (int e = 0; e < 3; ++e) r += gam[a][e][d] * gam[b][c][e] - gam[b][e][d] * gam[a][c][e];
    return r;
  };
  double num = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double coef = X[a] * Y[b] * Y[c];
          if (coef == 0.0) continue;
          double low = 0.0;
          for (int e = 0; e < 3; ++e) low += Rup(a, b, c, e) * G[e][d];
          num += coef * low * X[d];
        }
  double gxx = 0.0, gyy = 0.0, gxy = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      gxx += G[a][b] * X[a] * X[b];
      gyy += G[a][b] * Y[a] * Y[b];
      gxy += G[a][b] * X[a] * Y[b];
    }
  return num / (gxx * gyy - gxy * gxy);
}

/// Sectional curvature of the eigenframe plane (E_i, E_j), both routes.
struct SectionalCurvature {
  double gauss = 0.0;
  std::optional<double> metric_fd;  // absent for sampled immersions
};

inline SectionalCurvature sectional_curvature(const Immersion& imm, const LagrangianPoint& lp, int i, int j,
                                              double h = 1e-3) {
  SectionalCurvature k;
  k.gauss = sectional_curvature_gauss(lp, i, j);
  if (!imm.is_sampled()) k.metric_fd = sectional_curvature_fd(imm, lp.chart(), lp.frame().C[i], lp.frame().C[j], h);
  return k;
}

/// Berger parameters from the connection and curvature pattern, using the
/// index whose angle is not repeated as the distinguished direction.
struct BergerFit {
  double tau = 0.0;
  double kappa = 0.0;
  int axis = -1;
};

inline std::optional<BergerFit> berger_fit(const LagrangianPoint& lp) {
  const auto& fr = lp.frame();
  int axis = -1;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    if (fr.same_cluster(j, k) && !fr.same_cluster(i, j)) axis = i;
  }
  if (axis < 0) return std::nullopt;
  int j = (axis + 1) % 3, k = (axis + 2) % 3;
  BergerFit b;
  b.axis = axis;
  b.tau = 0.5 * (std::abs(fr.omega[j][k][axis]) + std::abs(fr.omega[k][j][axis]));
  b.kappa = sectional_curvature_gauss(lp, j, k) + 3 * b.tau * b.tau;
  return b;
}

}  // namespace nkl
