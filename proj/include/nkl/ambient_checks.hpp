#pragma once

// Randomized residual suite for the ambient structure tensors.

#include <cstdint>
#include <functional>
#include <sstream>
#include <vector>

#include "nkl/ambient.hpp"
#include "nkl/residual.hpp"
#include "nkl/sampling.hpp"

namespace nkl {

inline double euclid_norm(const Vector& z) { return std::sqrt(z.u.norm2() + z.v.norm2()); }

namespace detail {

inline std::string describe(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << "p=" << x.p << " q=" << x.q;
  return os.str();
}

// The curve t -> (p exp(t a), q exp(t b)) through `base` with velocity X = (p a, q b).
struct FrameCurve {
  Point base;
  Quat a, b;  // imaginary generators; X = (p a, q b)

  AmbientPoint<Dual1> point(const Dual1& t) const {
    auto pa = ImQuaternion<Dual1>(t * lift<Dual1>(a));
    auto qb = ImQuaternion<Dual1>(t * lift<Dual1>(b));
    return {lift<Dual1>(base.p) * exp_im(pa), lift<Dual1>(base.q) * exp_im(qb)};
  }

  Vector velocity() const { return {base, base.p * a, base.q * b}; }
};

// Tangent field along that curve whose left-translated components move linearly in t.
inline AmbientVector<Dual1> field_on(const AmbientPoint<Dual1>& x, const Dual1& t, const Quat& y1,
                                     const Quat& y2, const Quat& dy1, const Quat& dy2) {
  auto l1 = lift<Dual1>(y1) + t * lift<Dual1>(dy1);
  auto l2 = lift<Dual1>(y2) + t * lift<Dual1>(dy2);
  return {x, x.p * l1, x.q * l2};
}

inline R8<double> flat_derivative(const AmbientVector<Dual1>& w) {
  return {Quat{w.u.w.d, w.u.x.d, w.u.y.d, w.u.z.d}, Quat{w.v.w.d, w.v.x.d, w.v.y.d, w.v.z.d}};
}

}  // namespace detail

struct AmbientSuiteConfig {
  std::uint64_t seed = 1;
  int n_samples = 200;
  int n_jet_samples = 50;
  double tol_algebraic = 1e-12;
  double tol_jet = 1e-9;
};

/// Runs every pointwise ambient identity on seeded random samples.
inline std::vector<ResidualReport> verify_ambient(const AmbientSuiteConfig& cfg) {
  using detail::describe;
  const double ta = cfg.tol_algebraic;
  std::vector<ResidualReport> out;
  out.reserve(32);  // the references below must stay valid
  auto add = [&](const char* id, const char* anchor, double tol) -> ResidualReport& {
    out.push_back(make_report(id, anchor, tol));
    return out.back();
  };

  auto& r_j2 = add("J_squared", "J^2 = -Id", ta);
  auto& r_p2 = add("P_squared", "P^2 = Id", ta);
  auto& r_pj = add("PJ_anticommute", "PJ + JP = 0", ta);
  auto& r_gj = add("J_compatible", "g(JZ,JW) = g(Z,W)", ta);
  auto& r_gp = add("P_compatible", "g(PZ,PW) = g(Z,W)", ta);
  auto& r_ps = add("P_symmetric", "g(PZ,W) = g(Z,PW)", ta);
  auto& r_gc = add("metric_closed_form", "averaged metric equals the 4/3, -2/3 closed form", ta);
  auto& r_gsk = add("G_skew", "G(X,Y) + G(Y,X) = 0", ta);
  auto& r_gjy = add("G_J", "G(X,JY) + J G(X,Y) = 0", ta);
  auto& r_gmet = add("G_metric_skew", "g(G(X,Y),Z) + g(G(X,Z),Y) = 0", ta);
  auto& r_i1 = add("PG_PXPY", "P G(X,Y) + G(PX,PY) = 0", ta);
  auto& r_hj = add("nablaP_J", "(nabla_X P) JY = J (nabla_X P) Y", ta);
  auto& r_i2 = add("G_P_nablaP", "G(X,PY) + P G(X,Y) = -2 J (nabla_X P) Y", ta);
  auto& r_h2 = add("nablaP_P", "(nabla_X P) PY + P (nabla_X P) Y = 0", ta);
  auto& r_h3 = add("nablaP_PX", "(nabla_X P) Y + (nabla_PX P) Y = 0", ta);
  auto& r_ct = add("constant_type", "g(G(X,Y),G(Z,W)) = (1/3)(g(X,Z)g(Y,W) - g(X,W)g(Y,Z) + g(JX,Z)g(JW,Y) - g(JX,W)g(JZ,Y))", ta);
  auto& r_gg = add("G_G", "G(X,G(Y,Z)) = (1/3)(g(X,Z)Y - g(X,Y)Z + g(JX,Z)JY - g(JX,Y)JZ)", ta);
  auto& r_q = add("Q_from_PJ", "QZ = (2 PJZ - JZ)/sqrt(3)", ta);
  auto& r_p = add("P_from_QJ", "PZ = (Z - sqrt(3) QJZ)/2", ta);
  auto& r_em = add("product_metric", "<Z,W> = (3/8)(g(Z,W) + g(QZ,QW)) = g(Z,W) + g(Z,PW)/2", ta);
  auto& r_eq = add("product_metric_Q", "<Z,QW> = (sqrt(3)/2) g(Z,PJW)", ta);
  auto& r_ra = add("curvature_antisymmetry", "R(X,X)Y = 0 and g(R(X,Y)Z,W) = -g(R(X,Y)W,Z)", ta);
  auto& r_rb = add("curvature_bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", ta);
  auto& r_rp = add("curvature_pair_symmetry", "g(R(X,Y)Z,W) = g(R(Z,W)X,Y)", ta);
  auto& r_iso = add("isometry_equivariance", "(p,q) -> (a p c^-1, b q c^-1) preserves g, J and P", ta);
  auto& r_ng = add("nablaG", "(nabla G)(X,Y,Z) = (1/3)(g(X,Z)JY - g(X,Y)JZ - g(JY,Z)X)", cfg.tol_jet);
  auto& r_mc = add("connection_metric", "X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)", cfg.tol_jet);
  auto& r_lc = add("frame_connection", "nabla_Ei Ej = -eps Ek, nabla_Ei Fj = eps (Ek - Fk)/3, nabla_Fi Ej = eps (Fk - Ek)/3, nabla_Fi Fj = -eps Fk", ta);

  Sampler s(cfg.seed);
  const double third = 1.0 / 3.0;
  for (int n = 0; n < cfg.n_samples; ++n) {
    Point x = s.point();
    Vector X = s.tangent(x), Y = s.tangent(x), Z = s.tangent(x), W = s.tangent(x);
    std::string where = describe(x);
    auto g = [](const Vector& a, const Vector& b) { return metric_g(a, b); };
    auto J = [](const Vector& a) { return apply_J(a); };
    auto P = [](const Vector& a) { return apply_P(a); };
    auto Q = [](const Vector& a) { return apply_Q(a); };
    auto G = [](const Vector& a, const Vector& b) { return tensor_G(a, b); };
    auto NP = [](const Vector& a, const Vector& b) { return tensor_nablaP(a, b); };
    auto R = [](const Vector& a, const Vector& b, const Vector& c) { return curvature_R(a, b, c); };
    auto nrm = euclid_norm;

    r_j2.record(nrm(J(J(Z)) + Z), where);
    r_p2.record(nrm(P(P(Z)) - Z), where);
    r_pj.record(nrm(P(J(Z)) + J(P(Z))), where);
    r_gj.record(std::abs(g(J(Z), J(W)) - g(Z, W)), where);
    r_gp.record(std::abs(g(P(Z), P(W)) - g(Z, W)), where);
    r_ps.record(std::abs(g(P(Z), W) - g(Z, P(W))), where);
    r_gc.record(std::abs(g(Z, W) - metric_g_closed(Z, W)), where);
    r_gsk.record(nrm(G(X, Y) + G(Y, X)), where);
    r_gjy.record(nrm(G(X, J(Y)) + J(G(X, Y))), where);
    r_gmet.record(std::abs(g(G(X, Y), Z) + g(G(X, Z), Y)), where);
    r_i1.record(nrm(P(G(X, Y)) + G(P(X), P(Y))), where);
    r_hj.record(nrm(NP(X, J(Y)) - J(NP(X, Y))), where);
    r_i2.record(nrm(G(X, P(Y)) + P(G(X, Y)) + 2.0 * J(NP(X, Y))), where);
    r_h2.record(nrm(NP(X, P(Y)) + P(NP(X, Y))), where);
    r_h3.record(nrm(NP(X, Y) + NP(P(X), Y)), where);
    double ct = third * (g(X, Z) * g(Y, W) - g(X, W) * g(Y, Z) + g(J(X), Z) * g(J(W), Y) -
                         g(J(X), W) * g(J(Z), Y));
    r_ct.record(std::abs(g(G(X, Y), G(Z, W)) - ct), where);
    Vector gg = third * (g(X, Z) * Y - g(X, Y) * Z + g(J(X), Z) * J(Y) - g(J(X), Y) * J(Z));
    r_gg.record(nrm(G(X, G(Y, Z)) - gg), where);
    r_q.record(nrm(Q(Z) - (1.0 / kSqrt3) * (2.0 * P(J(Z)) - J(Z))), where);
    r_p.record(nrm(P(Z) - 0.5 * (Z - kSqrt3 * Q(J(Z)))), where);
    double e = metric_euclid(Z, W);
    r_em.record(std::max(std::abs(e - 0.375 * (g(Z, W) + g(Q(Z), Q(W)))),
                         std::abs(e - (g(Z, W) + 0.5 * g(Z, P(W))))),
                where);
    r_eq.record(std::abs(metric_euclid(Z, Q(W)) - 0.5 * kSqrt3 * g(Z, P(J(W)))), where);
    r_ra.record(std::max(nrm(R(X, X, Y)), std::abs(g(R(X, Y, Z), W) + g(R(X, Y, W), Z))), where);
    r_rb.record(nrm(R(X, Y, Z) + R(Y, Z, X) + R(Z, X, Y)), where);
    r_rp.record(std::abs(g(R(X, Y, Z), W) - g(R(Z, W, X), Y)), where);

    Isometry F = s.isometry();
    auto FX = F.push(X), FY = F.push(Y);
    double iso = std::max({nrm(J(FX) - F.push(J(X))), nrm(P(FX) - F.push(P(X))),
                           std::abs(g(FX, FY) - g(X, Y)), std::abs(metric_euclid(FX, FY) - metric_euclid(X, Y))});
    r_iso.record(iso, where);
  }

  // Derivative identities: fields along one-parameter subgroup curves,
  // differentiated exactly with dual numbers.
  for (int n = 0; n < cfg.n_jet_samples; ++n) {
    Point x = s.point();
    std::string where = describe(x);
    int dir = n % 6;
    Quat e = detail::frame_unit<double>(dir % 3);
    detail::FrameCurve c{x, dir < 3 ? e : Quat{}, dir < 3 ? Quat{} : e};
    Vector X = c.velocity();
    Quat y[4], dy[4], z[4];
    for (int k = 0; k < 4; ++k) {
      y[k] = s.unit_imaginary();
      dy[k] = s.unit_imaginary();
      z[k] = s.uniform(-1.0, 1.0) * s.unit_imaginary();
    }
    Dual1 t = seed1(0.0, 1.0);
    auto xt = c.point(t);
    auto Yt = detail::field_on(xt, t, y[0], y[1], dy[0], dy[1]);
    auto Zt = detail::field_on(xt, t, y[2], y[3], z[0], z[1]);
    Vector Y0 = value_of(Yt), Z0 = value_of(Zt);
    Vector nY = nk_derivative(detail::flat_derivative(Yt), X, Y0);
    Vector nZ = nk_derivative(detail::flat_derivative(Zt), X, Z0);

    auto Wt = tensor_G(Yt, Zt);
    Vector nW = nk_derivative(detail::flat_derivative(Wt), X, value_of(Wt));
    Vector lhs = nW - tensor_G(nY, Z0) - tensor_G(Y0, nZ);
    Vector rhs = third * (metric_g(X, Z0) * apply_J(Y0) - metric_g(X, Y0) * apply_J(Z0) -
                          metric_g(apply_J(Y0), Z0) * X);
    r_ng.record(euclid_norm(lhs - rhs), where);

    Dual1 gyz = metric_g(Yt, Zt);
    r_mc.record(std::abs(gyz.d - metric_g(nY, Z0) - metric_g(Y0, nZ)), where);
  }

  // Left-invariant frame connection at a few points.
  for (int n = 0; n < 10; ++n) {
    Point x = s.point();
    auto fb = frame_at(x);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int k = i == j ? 0 : 3 - i - j;
        double eps = 0.0;
        if (i != j) eps = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
        const Quat ei = detail::frame_unit<double>(i), ej = detail::frame_unit<double>(j);
        // D_{Ei} Ej = (p ei ej, 0), etc.; mixed derivatives vanish.
        R8<double> dee{x.p * ei * ej, Quat{}}, dff{Quat{}, x.q * ei * ej}, zero{};
        Vector zE = Vector::zero(x), zF = Vector::zero(x);
        if (i != j) {
          zE = fb.E[k];
          zF = fb.F[k];
        }
        auto check = [&](const R8<double>& flat, const Vector& a, const Vector& b, const Vector& expect) {
          worst = std::max(worst, euclid_norm(nk_derivative(flat, a, b) - expect));
        };
        check(dee, fb.E[i], fb.E[j], -eps * zE);
        check(zero, fb.E[i], fb.F[j], (eps / 3.0) * (zE - zF));
        check(zero, fb.F[i], fb.E[j], (eps / 3.0) * (zF - zE));
        check(dff, fb.F[i], fb.F[j], -eps * zF);
      }
    r_lc.record(worst, describe(x));
  }
  return out;
}

}  // namespace nkl
