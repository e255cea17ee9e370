#pragma once

// Residual suite for one immersion: every submanifold identity plus the
// expected invariants of a catalog example.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nkl/catalog.hpp"
#include "nkl/classify.hpp"
#include "nkl/curvature.hpp"
#include "nkl/residual.hpp"
#include "nkl/sampling.hpp"

namespace nkl {

struct SuiteConfig {
  std::uint64_t seed = 1;
  int n_points = 20;
  int n_keylemma_points = 10;
  double tol_jet = 1e-8;
  double tol_fd = 1e-5;
  double fd_step = 1e-4;        // stencil for angle derivatives
  double metric_fd_step = 1e-3;  // nested stencil for the metric curvature route
  std::optional<std::vector<ChartPoint>> points;  // overrides the random draw
  AnalysisOptions analysis{};
};

/// Observed invariants, reported next to the residual checks.
struct SuiteSummary {
  std::array<double, 3> angles{};
  double max_h = 0.0;
  double abs_h123 = 0.0;
  double K_gauss = NAN;
  double K_metric = NAN;
  bool constant_curvature = false;
  std::optional<BergerFit> berger;
  std::string label;
};

struct SuiteResult {
  std::vector<ResidualReport> checks;
  SuiteSummary summary;
  bool pass() const { return all_pass(checks); }
};

namespace detail {

inline std::string describe(const ChartPoint& x) {
  std::ostringstream os;
  os.precision(17);
  os << "x=(" << x[0] << ", " << x[1] << ", " << x[2] << ")";
  return os.str();
}

inline std::vector<ChartPoint> default_points(const std::string& name, std::uint64_t seed, int n) {
  // the torus chart is periodic with period 4 pi / sqrt3 in each variable
  double r = (name == "4.8" || name == "4.8-proof") ? 2.0 * std::numbers::pi / kSqrt3 : 1.0;
  return random_chart_points(seed, n, -r, r);
}

}  // namespace detail

/// Identities valid on every Lagrangian immersion, evaluated at `points`.
inline SuiteResult verify_immersion(const Immersion& imm, const std::vector<ChartPoint>& points,
                                    const SuiteConfig& cfg, bool constant_curvature_checks) {
  using detail::describe;
  SuiteResult res;
  auto& out = res.checks;
  out.reserve(40);
  auto add = [&](const char* id, const char* anchor, double tol) -> ResidualReport& {
    out.push_back(make_report(id, anchor, tol));
    return out.back();
  };
  const double tj = cfg.tol_jet, tf = cfg.tol_fd;
  auto& r_lag = add("lagrangian", "g(X, JY) = 0 for tangent X, Y", tj);
  auto& r_ab = add("ab_eigenframe", "A E_i = cos(2 theta_i) E_i, B E_i = sin(2 theta_i) E_i", tj);
  auto& r_a2 = add("ab_square", "A^2 + B^2 = Id and AB = BA", tj);
  auto& r_or = add("frame_gauge", "J G(E_1, E_2) = E_3 / sqrt(3)", tj);
  auto& r_sum = add("angle_sum", "theta_1 + theta_2 + theta_3 = 0 mod pi", tj);
  auto& r_ga = add("gauss", "Gauss equation with ambient curvature 5/12 and A, B terms", tj);
  auto& r_co = add("codazzi", "Codazzi equation with normal curvature from A and B", tj);
  auto& r_wn = add("weingarten_normal", "normal part of nabla_X JY equals J nabla_X Y + G(X, Y)", tj);
  auto& r_st = add("shape_tangent", "tangent part of nabla_X JY equals J h(X, Y)", tj);
  auto& r_cs = add("cubic_symmetry", "g(h(X, Y), JZ) totally symmetric", tj);
  auto& r_mi = add("minimality", "trace of h vanishes", tj);
  auto& r_ab2 = add("nabla_AB", "covariant derivatives of A and B through h and G", tj);
  auto& r_l6o = add("omega_angles", "h_ij^k cos(theta_j - theta_k) = (sqrt3/6 eps_ijk - omega_ij^k) sin(theta_j - theta_k)", tj);
  auto& r_cmp = add("compatibility", "-E_k(h_jj^i) + E_i(h_jj^k) = sum_l (omega_ik^l - omega_ki^l) h_jj^l", tj);
  ResidualReport* r_l6a = nullptr;
  ResidualReport* r_kr = nullptr;
  if (!imm.is_sampled()) {
    r_l6a = &add("angle_derivatives", "E_i(theta_j) = -h_jj^i by central differences of the angles", tf);
    r_kr = &add("curvature_routes", "sectional curvature from the Gauss equation vs differences of the metric", tf);
  }
  ResidualReport* r_key = nullptr;
  ResidualReport* r_lin = nullptr;
  ResidualReport* r_cc = nullptr;
  if (constant_curvature_checks) {
    r_cc = &add("constant_curvature", "R(X,Y)Z = K (g(Y,Z)X - g(X,Z)Y) with one K", tj);
    r_key = &add("keylemma", "cyclic key-lemma expression on all 81 frame 4-tuples", tj);
    r_lin = &add("linear_h", "linear equations in h_ii^j, h_kk^j and h_12^3 for positive permutations", tj);
  }

  std::optional<double> K0;
  SuiteSummary& sm = res.summary;
  int idx = 0;
  for (const auto& x : points) {
    std::string where = describe(x);
    LagrangianPoint lp(imm, x, cfg.analysis);
    const auto& fr = lp.frame();
    r_lag.record(lp.lagrangian_residual(), where);

    FrameAlgebra fa(lp);
    double e_ab = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double dA = fa.A[i][j] - (i == j ? fr.lambda[i] : 0.0);
        double dB = fa.B[i][j] - (i == j ? fr.mu[i] : 0.0);
        e_ab = std::max({e_ab, std::abs(dA), std::abs(dB)});
      }
    r_ab.record(e_ab, where);
    {
      Eigen::Matrix3d A = detail::to_eigen(lp.A_induced()), B = detail::to_eigen(lp.B_induced());
      double e = (A * A + B * B - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
      e = std::max(e, (A * B - B * A).cwiseAbs().maxCoeff());
      r_a2.record(e, where);
    }
    r_or.record(euclid_norm(kSqrt3 * apply_J(tensor_G(fr.E[0], fr.E[1])) - fr.E[2]), where);
    double th = fr.theta(0) + fr.theta(1) + fr.theta(2);
    r_sum.record(std::abs(std::remainder(th, std::numbers::pi)), where);

    r_ga.record(residual_gauss(lp), where);
    r_co.record(residual_codazzi(lp), where);
    r_wn.record(residual_weingarten_normal(lp), where);
    r_st.record(residual_shape_tangent(lp), where);
    r_cs.record(residual_cubic_symmetry(lp), where);
    r_mi.record(residual_minimality(lp), where);
    r_ab2.record(residual_nabla_AB(lp), where);
    r_l6o.record(residual_omega_angles(lp), where);
    r_cmp.record(residual_compatibility(lp), where);
    if (r_l6a) {
      auto v = residual_angle_derivatives(imm, lp, cfg.analysis, cfg.fd_step);
      if (v)
        r_l6a->record(*v, where);
      else
        r_l6a->skip();
    }
    auto fit = constant_curvature_fit(lp);
    if (r_kr) {
      double worst = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          auto k = sectional_curvature(imm, lp, i, j, cfg.metric_fd_step);
          worst = std::max(worst, std::abs(k.gauss - *k.metric_fd));
          if (idx == 0 && i == 0 && j == 1) sm.K_metric = *k.metric_fd;
        }
      r_kr->record(worst, where);
    }
    if (r_cc) {
      if (!K0) K0 = fit.K;
      r_cc->record(std::max(fit.deviation, std::abs(fit.K - *K0)), where);
      if (idx < cfg.n_keylemma_points) r_key->record(residual_keylemma(lp), where);
      r_lin->record(residual_linear_h(lp), where);
    }

    double mh = 0.0;
    for (auto& a : fr.h)
      for (auto& b : a)
        for (double e : b) mh = std::max(mh, std::abs(e));
    sm.max_h = std::max(sm.max_h, mh);
    if (idx == 0) {
      sm.angles = fr.angles;
      sm.abs_h123 = std::abs(fr.h[0][1][2]);
      sm.K_gauss = sectional_curvature_gauss(lp, 0, 1);
      sm.constant_curvature = fit.deviation <= 1e-6;
      sm.berger = berger_fit(lp);
    }
    ++idx;
  }
  for (auto& r : out) r.finalize();
  return res;
}

/// Identities plus the expected record of a catalog example.
inline SuiteResult verify_example(const std::string& name, const SuiteConfig& cfg = {},
                                  const ExampleParams& prm = {}) {
  ExpectedRecord exp = expected_properties(name);
  Immersion imm = construct_example(name, prm);
  std::vector<ChartPoint> pts = cfg.points ? *cfg.points : detail::default_points(name, cfg.seed, cfg.n_points);
  SuiteResult res = verify_immersion(imm, pts, cfg, exp.K.has_value());
  auto& out = res.checks;
  const double tj = cfg.tol_jet;
  auto add = [&](const char* id, const char* anchor, double tol) -> ResidualReport& {
    out.push_back(make_report(id, anchor, tol));
    return out.back();
  };
  auto& r_ang = add("expected_angles", "angle triple (2 theta_1, 2 theta_2, 2 theta_3) of the example", tj);
  ResidualReport* r_tg = exp.totally_geodesic ? &add("totally_geodesic", "h = 0", tj) : nullptr;
  ResidualReport* r_h = exp.h123 && !exp.totally_geodesic ? &add("expected_h123", "|h_12^3| of the example", tj) : nullptr;
  ResidualReport* r_K = exp.K ? &add("expected_K", "constant sectional curvature of the example", tj) : nullptr;
  ResidualReport* r_c1 = exp.K && !exp.totally_geodesic
                             ? &add("case1_constraint", "K = 1/4 - (h_12^3)^2 and 8 (h_12^3)^2 + 2 h_12^3 = 1", tj)
                             : nullptr;
  ResidualReport* r_bg = exp.tau && exp.totally_geodesic
                             ? &add("berger_fit", "Berger parameters (kappa, tau) from the connection pattern", tj)
                             : nullptr;
  ResidualReport* r_met = nullptr;
  if (name == "4.8" || name == "4.8-proof")
    r_met = &add("induced_metric", "coordinate fields f_u, f_v, f_w are orthonormal", std::min(tj, 1e-10));
  else if (name == "4.1" || name == "4.2" || name == "4.3" || name == "4.6")
    r_met = &add("induced_metric", "g(df X_i, df X_j) = c delta_ij at the chart center", tj);

  for (const auto& x : pts) {
    std::string where = detail::describe(x);
    LagrangianPoint lp(imm, x, cfg.analysis);
    const auto& fr = lp.frame();
    r_ang.record(angle_triple_distance(fr.angles, exp.angles), where);
    double mh = 0.0;
    for (auto& a : fr.h)
      for (auto& b : a)
        for (double e : b) mh = std::max(mh, std::abs(e));
    if (r_tg) r_tg->record(mh, where);
    double h123 = fr.h[0][1][2];
    if (r_h) r_h->record(std::abs(std::abs(h123) - *exp.h123), where);
    auto fit = constant_curvature_fit(lp);
    if (r_K) r_K->record(std::max(std::abs(fit.K - *exp.K), fit.deviation), where);
    if (r_c1)
      r_c1->record(std::max(std::abs(fit.K - (0.25 - h123 * h123)), std::abs(8 * h123 * h123 + 2 * h123 - 1)), where);
    if (r_bg) {
      auto b = berger_fit(lp);
      r_bg->record(b ? std::max(std::abs(b->tau - *exp.tau), std::abs(b->kappa - *exp.kappa)) : INFINITY, where);
    }
    if (r_met && (name == "4.8" || name == "4.8-proof")) {
      const auto& G = lp.geometry().G;
      double e = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) e = std::max(e, std::abs(G[a][b] - (a == b ? 1.0 : 0.0)));
      r_met->record(e, where);
    }
  }
  if (r_met && !(name == "4.8" || name == "4.8-proof")) {
    // at the chart center the coordinate fields are X_1, X_2, X_3
    const double c = name == "4.6" ? 16.0 / 3.0 : 4.0 / 3.0;
    Sampler s(cfg.seed);
    for (int n = 0; n < cfg.n_points; ++n) {
      ExampleParams p2 = prm;
      p2.center = s.unit_quat();
      Immersion im2 = construct_example(name, p2);
      Jet j = im2.jet({0.0, 0.0, 0.0}, 1);
      double e = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          Vector fa{j.x, j.d1[a].u, j.d1[a].v}, fb{j.x, j.d1[b].u, j.d1[b].v};
          e = std::max(e, std::abs(metric_g(fa, fb) - (a == b ? c : 0.0)));
        }
      r_met->record(e, "center " + detail::describe(Point{p2.center, p2.center}));
    }
  }
  res.summary.label = classify(imm, pts, {cfg.analysis, 1e-6, 1e-6, 1e-6}).label;
  for (auto& r : out) r.finalize();
  return res;
}

/// The sine form of the coefficients and the h_12^3 = 0 parametrization on
/// random angles and alpha.
inline ResidualReport verify_case2_param(std::uint64_t seed, int n, double tol) {
  ResidualReport r = make_report("case2_param",
                                 "h_ii^j = -2 alpha_j sin(theta_j - theta_k) sin(2 theta_i - theta_j - theta_k) solves the "
                                 "linear equations; coefficient sine form",
                                 tol);
  Sampler s(seed);
  for (int k = 0; k < n; ++k) {
    Arr3<double> th{s.uniform(0, std::numbers::pi), s.uniform(0, std::numbers::pi), s.uniform(0, std::numbers::pi)};
    Arr3<double> al{s.normal(), s.normal(), s.normal()};
    std::ostringstream os;
    os.precision(17);
    os << "theta=(" << th[0] << ", " << th[1] << ", " << th[2] << ")";
    r.record(residual_case2_param(th, al), os.str());
  }
  r.finalize();
  return r;
}

}  // namespace nkl
