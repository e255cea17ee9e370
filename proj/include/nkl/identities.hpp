#pragma once

// Pointwise residuals of the submanifold identities. Each evaluator works in
// chart coordinates and reports the largest component after contraction
// with the orthonormal eigenframe.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "nkl/ambient_checks.hpp"
#include "nkl/lagrangian.hpp"

namespace nkl {

namespace detail {

inline double vnorm(const Vector& v) { return euclid_norm(v); }

// Largest frame component of a coordinate tensor of ambient vectors V_abc.
inline double frame_max(const LagrangianPoint& lp, const Mat3<Arr3<Vector>>& v) {
  double worst = 0.0;
  Vector zero = Vector::zero(lp.geometry().x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) worst = std::max(worst, vnorm(lp.to_frame3(v, i, j, k, zero)));
  return worst;
}

inline double frame_max(const LagrangianPoint& lp, const Mat3<Arr3<double>>& v) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(lp.to_frame3(v, i, j, k, 0.0)));
  return worst;
}

// A^e_b: coordinates of the operator image A d_b.
inline Mat3<double> raise(const ChartGeometry<double>& cg, const Mat3<double>& low) {
  Mat3<double> r{};
  for (int e = 0; e < 3; ++e)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) r[e][b] += cg.Ginv[e][c] * low[b][c];
  return r;
}

}  // namespace detail

/// Gauss equation: g(R(X,Y)Z,W) from the intrinsic metric against the
/// ambient expression with A, B and h.
inline double residual_gauss(const LagrangianPoint& lp) {
  const auto& cg = lp.geometry();
  // d_d Gamma^c_ab
  Mat3<Arr3<Arr3<double>>> dgam;
  for (int d = 0; d < 3; ++d)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) dgam[a][b][c][d] = lp.derivative_geometry(d).gamma[a][b][c].d;
  const auto& Gm = cg.gamma;
  std::array<Mat3<Arr3<double>>, 3> res;  // res[a][b][c][d]
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        Arr3<double> up{};  // R(d_a, d_b) d_c
        for (int e = 0; e < 3; ++e) {
          double r = dgam[b][c][e][a] - dgam[a][c][e][b];
          for (int f = 0; f < 3; ++f) r += Gm[b][c][f] * Gm[a][f][e] - Gm[a][c][f] * Gm[b][f][e];
          up[e] = r;
        }
        for (int d = 0; d < 3; ++d) {
          double lhs = 0.0;
          for (int e = 0; e < 3; ++e) lhs += up[e] * cg.G[e][d];
          const auto &G = cg.G, &A = cg.A, &B = cg.B;
          double rhs = 5.0 / 12.0 * (G[b][c] * G[a][d] - G[a][c] * G[b][d]) +
                       (1.0 / 3.0) * (A[b][c] * A[a][d] - A[a][c] * A[b][d] + B[b][c] * B[a][d] - B[a][c] * B[b][d]) +
                       metric_g(cg.h[b][c], cg.h[a][d]) - metric_g(cg.h[a][c], cg.h[b][d]);
          res[a][b][c][d] = lhs - rhs;
        }
      }
  double worst = 0.0;
  const auto& C = lp.frame().C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) s += C[i][a] * C[j][b] * C[k][c] * C[l][d] * res[a][b][c][d];
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

/// Codazzi equation for the normal-valued second fundamental form.
inline double residual_codazzi(const LagrangianPoint& lp) {
  const auto& cg = lp.geometry();
  Mat3<double> Aop = detail::raise(cg, cg.A), Bop = detail::raise(cg, cg.B);
  Arr3<Vector> JA, JB;  // J A d_a, J B d_a
  for (int a = 0; a < 3; ++a) {
    Vector va = Vector::zero(cg.x), vb = Vector::zero(cg.x);
    for (int e = 0; e < 3; ++e) {
      va += Aop[e][a] * cg.f[e];
      vb += Bop[e][a] * cg.f[e];
    }
    JA[a] = apply_J(va);
    JB[a] = apply_J(vb);
  }
  // (nabla h)(d_a, d_b, d_c)
  Mat3<Arr3<Vector>> nh;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const Vector& hbc = cg.h[b][c];
        Vector v = cg.normal_part(nk_derivative(dpart(lp.derivative_geometry(a).h[b][c]), cg.f[a], hbc));
        for (int e = 0; e < 3; ++e) v -= cg.gamma[a][b][e] * cg.h[e][c] + cg.gamma[a][c][e] * cg.h[b][e];
        nh[a][b][c] = v;
      }
  Mat3<Arr3<Vector>> res;
  const auto &A = cg.A, &B = cg.B;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        Vector rhs = (1.0 / 3.0) * (A[b][c] * JB[a] - A[a][c] * JB[b] - B[b][c] * JA[a] + B[a][c] * JA[b]);
        res[a][b][c] = nh[a][b][c] - nh[b][a][c] - rhs;
      }
  return detail::frame_max(lp, res);
}

namespace detail {

// nearly Kaehler derivative of the normal field J f_b along d_a
inline Vector nabla_Jf(const LagrangianPoint& lp, int a, int b) {
  const auto& cg = lp.geometry();
  return nk_derivative(dpart(lp.derivative_geometry(a).Jf[b]), cg.f[a], cg.Jf[b]);
}

}  // namespace detail

namespace detail {

inline double frame_max2(const LagrangianPoint& lp, const Mat3<Vector>& t) {
  const auto& C = lp.frame().C;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vector s = Vector::zero(lp.geometry().x);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += (C[i][a] * C[j][b]) * t[a][b];
      worst = std::max(worst, euclid_norm(s));
    }
  return worst;
}

}  // namespace detail

/// Normal connection of J f_* Y: nabla^perp_X J Y = J nabla_X Y + G(X, Y).
inline double residual_weingarten_normal(const LagrangianPoint& lp) {
  const auto& cg = lp.geometry();
  Mat3<Vector> res;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Vector lhs = cg.normal_part(detail::nabla_Jf(lp, a, b));
      res[a][b] = lhs - apply_J(cg.combine(cg.gamma[a][b])) - tensor_G(cg.f[a], cg.f[b]);
    }
  return detail::frame_max2(lp, res);
}

/// Tangential part: f_*(S_{JY} X) = -J h(X, Y), with S_{JY} X the negative
/// tangential part of nabla_X JY.
inline double residual_shape_tangent(const LagrangianPoint& lp) {
  const auto& cg = lp.geometry();
  Mat3<Vector> res;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      res[a][b] = apply_J(cg.h[a][b]) - cg.tangential_part(detail::nabla_Jf(lp, a, b));
  return detail::frame_max2(lp, res);
}

/// Total symmetry of h_ij^k.
inline double residual_cubic_symmetry(const LagrangianPoint& lp) {
  const auto& h = lp.frame().h;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        worst = std::max({worst, std::abs(h[i][j][k] - h[j][i][k]), std::abs(h[i][j][k] - h[i][k][j])});
  return worst;
}

/// Minimality: sum_i h_ii^k = 0.
inline double residual_minimality(const LagrangianPoint& lp) {
  const auto& h = lp.frame().h;
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(h[0][0][k] + h[1][1][k] + h[2][2][k]));
  return worst;
}

/// Covariant derivatives of A and B expressed through h and G.
inline double residual_nabla_AB(const LagrangianPoint& lp) {
  const auto& cg = lp.geometry();
  Mat3<double> Aop = detail::raise(cg, cg.A), Bop = detail::raise(cg, cg.B);
  Mat3<Arr3<double>> jg;  // g(JG(f_a, f_b), f_d)
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Vector v = apply_J(tensor_G(cg.f[a], cg.f[b]));
      for (int d = 0; d < 3; ++d) jg[a][b][d] = metric_g(v, cg.f[d]);
    }
  const auto& h = cg.h3;
  Mat3<Arr3<double>> rA, rB;
  for (int a = 0; a < 3; ++a) {
    Mat3<double> dA = dpart(lp.derivative_geometry(a).A);
    Mat3<double> dB = dpart(lp.derivative_geometry(a).B);
    for (int b = 0; b < 3; ++b)
      for (int d = 0; d < 3; ++d) {
        double nA = dA[b][d], nB = dB[b][d];
        for (int e = 0; e < 3; ++e) {
          nA -= cg.gamma[a][b][e] * cg.A[e][d] + cg.gamma[a][d][e] * cg.A[b][e];
          nB -= cg.gamma[a][b][e] * cg.B[e][d] + cg.gamma[a][d][e] * cg.B[b][e];
        }
        double eA = 0.0, eB = 0.0;
        for (int e = 0; e < 3; ++e) {
          eA += Bop[e][d] * h[b][e][a] + Bop[e][b] * h[a][e][d] + 0.5 * Aop[e][b] * jg[a][e][d] -
                0.5 * Aop[e][d] * jg[a][b][e];
          eB += -Aop[e][b] * h[a][e][d] - Aop[e][d] * h[b][e][a] + 0.5 * Bop[e][b] * jg[a][e][d] -
                0.5 * Bop[e][d] * jg[a][b][e];
        }
        rA[a][b][d] = nA - eA;
        rB[a][b][d] = nB - eB;
      }
  }
  return std::max(detail::frame_max(lp, rA), detail::frame_max(lp, rB));
}

/// h_ij^k cos(th_j - th_k) = (sqrt(3)/6 eps_ijk - omega_ij^k) sin(th_j - th_k)
/// for j != k, where |sin(th_j - th_k)| >= min_sin.
inline double residual_omega_angles(const LagrangianPoint& lp, double min_sin = 1e-3) {
  const auto& fr = lp.frame();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        if (j == k) continue;
        double d = fr.theta(j) - fr.theta(k);
        if (std::abs(std::sin(d)) < min_sin) continue;
        double r = fr.h[i][j][k] * std::cos(d) - (kSqrt3 / 6.0 * levi_civita(i, j, k) - fr.omega[i][j][k]) * std::sin(d);
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

/// Compatibility of the angle derivatives:
/// -E_k(h_jj^i) + E_i(h_jj^k) = sum_l (omega_ik^l - omega_ki^l) h_jj^l.
inline double residual_compatibility(const LagrangianPoint& lp) {
  const auto& fr = lp.frame();
  const auto& C = fr.C;
  const auto& m = lp.frame_derivative();
  const auto& h = fr.h;
  // d_a h(E_x, E_y, E_z) in the eigenframe, frame motion included
  auto dh = [&](int a, int x, int y, int z) {
    double dh3 = 0.0;
    const auto& dg = lp.derivative_geometry(a);
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int r = 0; r < 3; ++r) dh3 += C[x][p] * C[y][q] * C[z][r] * dg.h3[p][q][r].d;
    for (int l = 0; l < 3; ++l) dh3 += m[a][l][x] * h[l][y][z] + m[a][l][y] * h[x][l][z] + m[a][l][z] * h[x][y][l];
    return dh3;
  };
  auto along = [&](int k, int x, int y, int z) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += C[k][a] * dh(a, x, y, z);
    return s;
  };
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double lhs = -along(k, j, j, i) + along(i, j, j, k);
        double rhs = 0.0;
        for (int l = 0; l < 3; ++l) rhs += (fr.omega[i][k][l] - fr.omega[k][i][l]) * h[j][j][l];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

/// E_i(theta_j) = -h_jj^i with the left side from central differences of
/// the angle functions along the chart line through x in direction E_i.
/// Returns nothing when the cluster pattern changes inside the stencil.
inline std::optional<double> residual_angle_derivatives(const Immersion& imm, const LagrangianPoint& lp,
                                                      const AnalysisOptions& opt, double step = 1e-4) {
  const auto& fr = lp.frame();
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    std::array<std::array<double, 3>, 2> ang;
    for (int s = 0; s < 2; ++s) {
      ChartPoint y = lp.chart();
      double sign = s == 0 ? -1.0 : 1.0;
      for (int a = 0; a < 3; ++a) y[a] += sign * step * fr.C[i][a];
      LagrangianPoint q(imm, y, opt);
      if (q.frame().cluster != fr.cluster) return std::nullopt;
      ang[s] = q.frame().angles;
    }
    for (int j = 0; j < 3; ++j) {
      // unwrap across the 0 / 2 pi seam
      double d = ang[1][j] - ang[0][j];
      d = std::remainder(d, 2.0 * std::numbers::pi);
      if (std::abs(d) > 0.5) return std::nullopt;  // crossing re-sorted the angles
      double lhs = d / (2.0 * 2.0 * step);
      worst = std::max(worst, std::abs(lhs + fr.h[j][j][i]));
    }
  }
  return worst;
}

/// Frame-level data for algebraic identities: A, B, JG and h in the
/// orthonormal eigenframe (tangent coordinates w.r.t. E_i, normal
/// coordinates w.r.t. J E_i).
struct FrameAlgebra {
  Mat3<double> A{}, B{};
  Mat3<Arr3<double>> jg{};  // tangent coordinates of JG(E_i, E_j)
  Tensor3 h{};

  explicit FrameAlgebra(const LagrangianPoint& lp) {
    const auto& E = lp.frame().E;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        A[i][j] = metric_g(apply_P(E[i]), E[j]);
        B[i][j] = metric_g(apply_P(E[i]), apply_J(E[j]));
        Vector v = apply_J(tensor_G(E[i], E[j]));
        for (int k = 0; k < 3; ++k) jg[i][j][k] = metric_g(v, E[k]);
      }
    h = lp.frame().h;
  }
};

namespace detail {

using V3 = Arr3<double>;
inline V3 add(const V3& a, const V3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline V3 scale(double s, const V3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot3(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline V3 mat_vec(const Mat3<double>& m, const V3& v) {  // m symmetric
  V3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += m[i][j] * v[j];
  return r;
}

}  // namespace detail

/// The cyclic expression of the key lemma for frame vectors (W, X, Y, Z);
/// returns normal coordinates of the resulting normal vector.
inline Arr3<double> keylemma_expression(const FrameAlgebra& fa, int W, int X, int Y, int Z) {
  using namespace detail;
  const auto& A = fa.A;
  const auto& B = fa.B;
  auto JG = [&](int a, int b) { return fa.jg[a][b]; };
  auto H = [&](int a, int b) { return V3{fa.h[a][b][0], fa.h[a][b][1], fa.h[a][b][2]}; };
  auto G = [&](int a, int b) { return scale(-1.0, fa.jg[a][b]); };  // normal coordinates of G(E_a, E_b)
  auto Grow = [&](int a, const V3& v) {  // G(E_a, sum v_l E_l)
    V3 r{};
    for (int l = 0; l < 3; ++l) r = add(r, scale(v[l], G(a, l)));
    return r;
  };
  auto Hrow = [&](int a, const V3& v) {
    V3 r{};
    for (int l = 0; l < 3; ++l) r = add(r, scale(v[l], H(a, l)));
    return r;
  };
  V3 total{};
  int t[3] = {W, X, Y};
  for (int c = 0; c < 3; ++c) {
    int w = t[c], x = t[(c + 1) % 3], y = t[(c + 2) % 3];
    const V3& Aw = A[w];
    const V3& Ay = A[y];
    const V3& Bw = B[w];
    const V3& By = B[y];
    double c1 = dot3(JG(y, w), A[Z]) + 0.5 * dot3(JG(y, Z), Aw) - 0.5 * dot3(JG(w, Z), Ay) +
                dot3(H(w, Z), By) - dot3(H(y, Z), Bw);
    double c2 = dot3(JG(w, y), B[Z]) + 0.5 * dot3(JG(w, Z), By) - 0.5 * dot3(JG(y, Z), Bw) +
                dot3(H(w, Z), Ay) - dot3(H(y, Z), Aw);
    total = add(total, scale(c1, B[x]));
    total = add(total, scale(c2, A[x]));
    V3 t3 = add(add(mat_vec(B, JG(w, y)), scale(0.5, Grow(y, Bw))), scale(-0.5, Grow(w, By)));
    t3 = add(t3, add(Hrow(w, Ay), scale(-1.0, Hrow(y, Aw))));
    total = add(total, scale(A[x][Z], t3));
    V3 t4 = add(add(scale(-1.0, mat_vec(A, JG(w, y))), scale(0.5, Grow(w, Ay))), scale(-0.5, Grow(y, Aw)));
    t4 = add(t4, add(Hrow(w, By), scale(-1.0, Hrow(y, Bw))));
    total = add(total, scale(B[x][Z], t4));
  }
  return total;
}

/// Max over all 81 frame 4-tuples of the key-lemma expression.
inline double residual_keylemma(const LagrangianPoint& lp) {
  FrameAlgebra fa(lp);
  double worst = 0.0;
  for (int w = 0; w < 3; ++w)
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y)
        for (int z = 0; z < 3; ++z) {
          auto v = keylemma_expression(fa, w, x, y, z);
          worst = std::max(worst, std::sqrt(detail::dot3(v, v)));
        }
  return worst;
}

/// Linear equations for h on constant-curvature submanifolds, for positive
/// permutations (i j k).
inline double residual_linear_h(const LagrangianPoint& lp) {
  const auto& fr = lp.frame();
  const auto& l = fr.lambda;
  const auto& m = fr.mu;
  const auto& h = fr.h;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    double ci = l[i] * (l[j] - l[k]) + m[i] * (m[j] - m[k]);
    double ck = l[k] * (l[i] - l[j]) + m[k] * (m[i] - m[j]);
    worst = std::max(worst, std::abs(ci * h[k][k][j] + ck * h[i][i][j]));
    worst = std::max(worst, std::abs(ci * h[0][1][2]));
  }
  return worst;
}

/// Sine form of the coefficients and the general solution of the linear
/// equations in the h_12^3 = 0 case, checked on given angles and alpha.
inline double residual_case2_param(const Arr3<double>& theta, const Arr3<double>& alpha) {
  double worst = 0.0;
  Arr3<double> l, m;
  for (int i = 0; i < 3; ++i) l[i] = std::cos(2 * theta[i]), m[i] = std::sin(2 * theta[i]);
  Tensor3 h{};
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    h[i][i][j] = -2 * alpha[j] * std::sin(theta[j] - theta[k]) * std::sin(2 * theta[i] - theta[j] - theta[k]);
    h[k][k][j] = 2 * alpha[j] * std::sin(theta[i] - theta[j]) * std::sin(2 * theta[k] - theta[i] - theta[j]);
  }
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    double ci = l[i] * (l[j] - l[k]) + m[i] * (m[j] - m[k]);
    double sine_form = 2 * std::sin(theta[j] - theta[k]) * std::sin(2 * theta[i] - theta[j] - theta[k]);
    worst = std::max(worst, std::abs(ci - sine_form));
    double ck = l[k] * (l[i] - l[j]) + m[k] * (m[i] - m[j]);
    worst = std::max(worst, std::abs(ci * h[k][k][j] + ck * h[i][i][j]));
  }
  return worst;
}

/// Full curvature tensor in the eigenframe from the Gauss equation,
/// R[i][j][k][l] = g(R(E_i,E_j)E_k, E_l).
inline std::array<Mat3<Arr3<double>>, 3> frame_curvature(const LagrangianPoint& lp) {
  const auto& E = lp.frame().E;
  const auto& h = lp.frame().h;
  std::array<Mat3<Arr3<double>>, 3> R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Vector amb = curvature_R(E[i], E[j], E[k]);
        for (int l = 0; l < 3; ++l) {
          double hh = 0.0;
          for (int n = 0; n < 3; ++n) hh += h[j][k][n] * h[i][l][n] - h[i][k][n] * h[j][l][n];
          R[i][j][k][l] = metric_g(amb, E[l]) + hh;
        }
      }
  return R;
}

/// Sectional curvature of the plane (E_i, E_j) from the Gauss equation.
inline double sectional_curvature_gauss(const LagrangianPoint& lp, int i, int j) {
  return frame_curvature(lp)[i][j][j][i];
}

/// Distance of the curvature tensor from constant curvature K and the K
/// itself (average of the three frame planes).
struct ConstantCurvatureFit {
  double K = 0.0;
  double deviation = 0.0;
};

inline ConstantCurvatureFit constant_curvature_fit(const LagrangianPoint& lp) {
  auto R = frame_curvature(lp);
  ConstantCurvatureFit fit;
  fit.K = (R[0][1][1][0] + R[0][2][2][0] + R[1][2][2][1]) / 3.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double model = fit.K * ((j == k) * (i == l) - (i == k) * (j == l));
          fit.deviation = std::max(fit.deviation, std::abs(R[i][j][k][l] - model));
        }
  return fit;
}

}  // namespace nkl
