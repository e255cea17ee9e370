#pragma once

// Decision tree sorting a Lagrangian immersion into the totally geodesic
// list or the constant sectional curvature list.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nkl/identities.hpp"

namespace nkl {

inline constexpr const char* kOutsideLabel = "outside classification / not constant curvature";

struct ClassifyOptions {
  AnalysisOptions analysis{};
  double tol_h = 1e-6;      // |h_ij^k| below this counts as zero
  double tol_angle = 1e-6;  // angle triple matching (radians, on 2 theta)
  double tol_K = 1e-6;      // curvature constancy and value matching
};

struct ClassifyResult {
  std::string label = kOutsideLabel;
  std::string item;  // "1.1(5)", "1.3(4)", ... or empty
  bool totally_geodesic = false;
  std::array<double, 3> angles{};  // at the first point
  std::optional<double> K;
  double max_h = 0.0;
  double max_abs_h123 = 0.0;
  std::vector<ChartPoint> offending;  // points breaking the chosen branch
  std::string reason;
};

struct TgCase {
  int number;
  std::array<double, 3> angles;
  const char* item;
  const char* label;
};

inline const std::array<TgCase, 6>& totally_geodesic_cases() {
  constexpr double pi = std::numbers::pi;
  static const std::array<TgCase, 6> cases{{
      {1, {4 * pi / 3, 4 * pi / 3, 4 * pi / 3}, "1.1(1)", "Theorem 1.1 (1) — round sphere (u,1)"},
      {2, {2 * pi / 3, 2 * pi / 3, 2 * pi / 3}, "1.1(2)", "Theorem 1.1 (2) — round sphere (1,u)"},
      {3, {0.0, 0.0, 0.0}, "1.1(3)", "Theorem 1.1 (3) — round sphere (u,u)"},
      {4, {0.0, pi, pi}, "1.3(4)", "Theorem 1.3 (4) — Berger sphere (u,ui)"},
      {5, {pi / 3, pi / 3, 4 * pi / 3}, "1.3(5)", "Theorem 1.3 (5) — Berger sphere (u^-1,uiu^-1)"},
      {6, {2 * pi / 3, 5 * pi / 3, 5 * pi / 3}, "1.3(6)", "Theorem 1.3 (6) — Berger sphere (uiu^-1,u^-1)"},
  }};
  return cases;
}

inline const char* kRound316Label = "Theorem 1.1 (4) — round sphere of curvature 3/16";
inline const char* kFlatTorusLabel = "Theorem 1.1 (5) — flat torus";

/// Smallest, over permutations, of the largest circular distance between
/// two angle triples.
inline double angle_triple_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  std::array<int, 3> p{0, 1, 2};
  double best = INFINITY;
  do {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, detail::circular_gap(a[i], b[p[i]]));
    best = std::min(best, d);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

/// Label expected for a catalog example name.
inline std::string classification_label(const std::string& example) {
  const auto& c = totally_geodesic_cases();
  if (example == "4.1") return c[0].label;
  if (example == "4.2") return c[1].label;
  if (example == "4.3") return c[2].label;
  if (example == "4.4") return c[3].label;
  if (example == "4.5") return c[4].label;
  if (example == "4.7") return c[5].label;
  if (example == "4.6") return kRound316Label;
  if (example == "4.8" || example == "4.8-proof") return kFlatTorusLabel;
  return kOutsideLabel;
}

/// Classify from pointwise data on a set of chart points. Throws
/// NotLagrangian or DegenerateImmersion from the first bad point.
inline ClassifyResult classify(const Immersion& imm, const std::vector<ChartPoint>& points,
                               const ClassifyOptions& opt = {}) {
  ClassifyResult res;
  if (points.empty()) {
    res.reason = "no chart points";
    return res;
  }
  struct PointData {
    ChartPoint x;
    std::array<double, 3> angles;
    double max_h, h123;
    ConstantCurvatureFit fit;
  };
  std::vector<PointData> data;
  data.reserve(points.size());
  for (const auto& x : points) {
    LagrangianPoint lp(imm, x, opt.analysis);
    PointData d{x, lp.frame().angles, 0.0, std::abs(lp.frame().h[0][1][2]), constant_curvature_fit(lp)};
    for (auto& a : lp.frame().h)
      for (auto& b : a)
        for (double e : b) d.max_h = std::max(d.max_h, std::abs(e));
    res.max_h = std::max(res.max_h, d.max_h);
    res.max_abs_h123 = std::max(res.max_abs_h123, d.h123);
    data.push_back(d);
  }
  res.angles = data.front().angles;

  // (i) totally geodesic branch
  if (res.max_h <= opt.tol_h) {
    res.totally_geodesic = true;
    for (const auto& c : totally_geodesic_cases()) {
      std::vector<ChartPoint> off;
      for (const auto& d : data)
        if (angle_triple_distance(d.angles, c.angles) > opt.tol_angle) off.push_back(d.x);
      if (off.size() == data.size()) continue;
      if (!off.empty()) {
        res.offending = off;
        res.reason = "angle triple inconsistent across the grid";
        return res;
      }
      res.label = c.label;
      res.item = c.item;
      if (c.number <= 3) res.K = data.front().fit.K;
      return res;
    }
    for (const auto& d : data) res.offending.push_back(d.x);
    res.reason = "totally geodesic but angles match none of the six cases";
    return res;
  }

  // (ii) constant angles (0, 2pi/3, 4pi/3) and constant curvature
  constexpr double pi = std::numbers::pi;
  const std::array<double, 3> special{0.0, 2 * pi / 3, 4 * pi / 3};
  for (const auto& d : data)
    if (angle_triple_distance(d.angles, special) > opt.tol_angle || d.fit.deviation > opt.tol_K ||
        std::abs(d.fit.K - data.front().fit.K) > opt.tol_K)
      res.offending.push_back(d.x);
  if (!res.offending.empty()) {
    res.reason = "angles not constant (0, 2pi/3, 4pi/3) or curvature not constant";
    return res;
  }
  double K = data.front().fit.K;
  res.K = K;
  if (std::abs(K - 3.0 / 16.0) <= opt.tol_K) {
    res.label = kRound316Label;
    res.item = "1.1(4)";
  } else if (std::abs(K) <= opt.tol_K) {
    res.label = kFlatTorusLabel;
    res.item = "1.1(5)";
  } else {
    res.reason = "constant curvature with a value not in the list";
  }
  return res;
}

/// Chart points spread over a box, drawn from a seeded generator.
inline std::vector<ChartPoint> random_chart_points(std::uint64_t seed, int n, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<ChartPoint> pts(n);
  for (auto& p : pts) p = {U(rng), U(rng), U(rng)};
  return pts;
}

}  // namespace nkl
