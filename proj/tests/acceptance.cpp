// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "nkl/ambient_checks.hpp"
#include "nkl/cli.hpp"
#include "nkl/suite.hpp"
#include "oracles.hpp"

using namespace nkl;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void line(int n, bool pass, const std::string& what, double secs) {
  std::printf("[%s] criterion %2d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", n, what.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// relative error of the closed-form curvature against finite differences of
// the metric in exponential coordinates around x0
double riemann_fd_error(const Point& x0, double h) {
  oracle::FdRiemann<6> fr;
  fr.h = h;
  auto chart = [x0](const auto& t) {
    using S = std::decay_t<decltype(t[0])>;
    ImQuaternion<S> a{t[0], t[1], -t[2]}, b{t[3], t[4], -t[5]};
    return AmbientPoint<S>{lift<S>(x0.p) * exp_im(a), lift<S>(x0.q) * exp_im(b)};
  };
  fr.metric = [&](const Eigen::Matrix<double, 6, 1>& xx) {
    std::array<Vector, 6> d;
    for (int a = 0; a < 6; ++a) {
      std::array<Dual1, 6> t;
      for (int k = 0; k < 6; ++k) t[k] = seed1(xx(k), k == a);
      auto pt = chart(t);
      AmbientVector<Dual1> v{pt, pt.p, pt.q};
      auto fl = detail::flat_derivative(v);
      d[a] = Vector{value_of(pt), fl.u, fl.v};
    }
    Eigen::Matrix<double, 6, 6> g;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) g(a, b) = metric_g(d[a], d[b]);
    return g;
  };
  auto low = fr.lowered(Eigen::Matrix<double, 6, 1>::Zero());
  auto fb = frame_at(x0);
  std::array<Vector, 6> basis = {fb.E[0], fb.E[1], fb.E[2], fb.F[0], fb.F[1], fb.F[2]};
  double scale = 0.0, worst = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c)
        for (int d = 0; d < 6; ++d) {
          double exact = metric_g(curvature_R(basis[c], basis[d], basis[b]), basis[a]);
          scale = std::max(scale, std::abs(exact));
          worst = std::max(worst, std::abs(exact - low[a][b][c][d]));
        }
  return worst / scale;
}

const ResidualReport* find(const SuiteResult& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace

int main() {
  const std::uint64_t seed = 20261016;

  // 1, 2: ambient identities
  {
    auto t0 = Clock::now();
    AmbientSuiteConfig cfg;
    cfg.seed = seed;
    cfg.n_samples = 200;
    cfg.n_jet_samples = 50;
    cfg.tol_algebraic = 1e-12;
    cfg.tol_jet = 1e-9;
    auto reps = verify_ambient(cfg);
    double secs = seconds_since(t0);
    double worst_alg = 0.0, worst_jet = 0.0;
    bool ok_alg = true, ok_jet = false;
    int n_alg = 0;
    for (const auto& r : reps) {
      if (r.id == "nablaG") {
        ok_jet = r.pass && r.n_samples >= 50 && r.max_residual <= 1e-9;
        worst_jet = r.max_residual;
      } else if (r.tol <= 1e-12) {
        ok_alg = ok_alg && r.pass && r.n_samples >= 1;
        worst_alg = std::max(worst_alg, r.max_residual);
        ++n_alg;
      }
    }
    line(1, ok_alg && n_alg >= 20 && secs < 2.0,
         "ambient algebraic identities (" + std::to_string(n_alg) + " checks, 200 samples): max " + sci(worst_alg) +
             " <= 1e-12",
         secs);
    line(2, ok_jet && secs < 2.0, "nabla G identity by AD, 50 samples: " + sci(worst_jet) + " <= 1e-9", secs);
  }

  // 3: closed-form curvature vs finite differences of the metric
  {
    auto t0 = Clock::now();
    Sampler s(seed);
    double worst = 0.0;
    for (int n = 0; n < 5; ++n) worst = std::max(worst, riemann_fd_error(s.point(), 1e-4));
    double secs = seconds_since(t0);
    line(3, worst <= 1e-5 && secs < 30.0, "curvature tensor vs FD Riemann (5 points, step 1e-4): relative " + sci(worst) +
                                               " <= 1e-5", secs);
  }

  // 4-8: example suites (20 chart points each)
  {
    auto t0 = Clock::now();
    SuiteConfig cfg;
    cfg.seed = seed;
    cfg.n_points = 20;
    cfg.n_keylemma_points = 10;
    cfg.tol_jet = 1e-8;
    cfg.tol_fd = 1e-5;
    std::map<std::string, SuiteResult> res;
    for (const auto& name : example_names()) res.emplace(name, verify_example(name, cfg));
    double secs = seconds_since(t0);

    auto all_pass = [&](const std::vector<std::string>& names, const std::vector<std::string>& ids, double& worst,
                        std::string& bad) {
      bool ok = true;
      for (const auto& n : names)
        for (const auto& id : ids) {
          const ResidualReport* r = find(res.at(n), id);
          if (!r) continue;
          worst = std::max(worst, r->max_residual);
          if (!r->pass && bad.empty()) bad = n + "/" + id;
          ok = ok && r->pass;
        }
      return ok;
    };
    const std::vector<std::string> eight{"4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7", "4.8"};

    double w4 = 0.0;
    std::string b4;
    bool ok4 = all_pass(eight, {"expected_angles", "totally_geodesic", "expected_h123", "expected_K", "induced_metric"},
                        w4, b4);
    for (const auto& n : {"4.1", "4.2", "4.3", "4.4", "4.5", "4.7"}) ok4 = ok4 && find(res.at(n), "totally_geodesic");
    ok4 = ok4 && find(res.at("4.8"), "induced_metric") && find(res.at("4.8"), "induced_metric")->tol <= 1e-10;
    line(4, ok4, "example table 4.1-4.8 (angles, h = 0, K, |h_12^3|, 4.8 metric): max " + sci(w4) + (b4.empty() ? "" : ", first failure " + b4),
         secs);

    bool ok5 = true;
    std::string k5;
    for (const auto& n : {"4.1", "4.2", "4.3", "4.6"}) {
      const auto& sm = res.at(n).summary;
      double want = std::string(n) == "4.6" ? 3.0 / 16.0 : 0.75;
      const ResidualReport* r = find(res.at(n), "expected_K");
      ok5 = ok5 && r && r->pass && std::abs(sm.K_gauss - want) <= 1e-8;
      k5 += std::string(n) + " K=" + std::to_string(sm.K_gauss) + " r=" + std::to_string(1.0 / std::sqrt(sm.K_gauss)) + "; ";
    }
    k5.resize(k5.size() - 2);
    line(5, ok5, "round sphere curvatures 3/4 and 3/16 (radii 2/sqrt3, 4/sqrt3): " + k5, secs);

    double w6 = 0.0, w6fd = 0.0;
    std::string b6;
    bool ok6 = all_pass(eight,
                        {"gauss", "codazzi", "weingarten_normal", "shape_tangent", "cubic_symmetry", "minimality",
                         "nabla_AB", "omega_angles", "compatibility"},
                        w6, b6);
    ok6 = all_pass(eight, {"angle_derivatives", "curvature_routes"}, w6fd, b6) && ok6;
    for (const auto& n : eight) ok6 = ok6 && find(res.at(n), "gauss")->n_samples >= 20;
    line(6, ok6, "submanifold identities, 20 points per example: max " + sci(w6) + " <= 1e-8, FD-based " + sci(w6fd) +
                     " <= 1e-5" + (b6.empty() ? "" : ", first failure " + b6),
         secs);

    double w7 = 0.0;
    std::string b7;
    const std::vector<std::string> cc{"4.1", "4.2", "4.3", "4.6", "4.8"};
    bool ok7 = all_pass(cc, {"keylemma"}, w7, b7);
    for (const auto& n : cc) ok7 = ok7 && find(res.at(n), "keylemma") && find(res.at(n), "keylemma")->n_samples >= 10;
    line(7, ok7, "key lemma over 81 frame tuples, 10 points on 4.1-4.3, 4.6, 4.8: max " + sci(w7) + " <= 1e-8", secs);

    double w8 = 0.0;
    std::string b8;
    bool ok8 = all_pass({"4.6", "4.8"}, {"case1_constraint"}, w8, b8);
    ok8 = ok8 && find(res.at("4.6"), "case1_constraint") && find(res.at("4.8"), "case1_constraint");
    line(8, ok8,
         "K = 1/4 - (h_12^3)^2 on 4.6 (|h_12^3| = " + std::to_string(res.at("4.6").summary.abs_h123) + ") and 4.8 (|h_12^3| = " +
             std::to_string(res.at("4.8").summary.abs_h123) + "): max " + sci(w8),
         secs);
  }

  // 9: reconstruction
  {
    auto t0 = Clock::now();
    cli::RunConfig rc;
    rc.seed = seed;
    VerificationReport a = cli::cmd_reconstruct("case1a", rc, ""), b = cli::cmd_reconstruct("case1b", rc, "");
    double secs = seconds_since(t0);
    double ra = a.properties["error_h_0.1"].get<double>() / a.properties["error_h_0.05"].get<double>();
    double rb = b.properties["error_h_0.2"].get<double>() / b.properties["error_h_0.1"].get<double>();
    bool ok = a.pass() && b.pass() && ra >= 8.0 && rb >= 4.0 && secs < 60.0;
    line(9, ok,
         "case 1a vs 4.6 after alignment " + sci(a.checks[3].max_residual) + ", case 1b vs 4.8 " +
             sci(b.properties["closed_form_deviation"].get<double>()) + " (<= 1e-6); halving ratios " +
             std::to_string(ra) + " >= 8, " + std::to_string(rb) + " >= 4",
         secs);
  }

  // 10: classifier round trip under random ambient isometries
  {
    auto t0 = Clock::now();
    Sampler s(seed);
    int correct = 0, total = 0;
    std::string bad;
    for (const auto& name : {"4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7", "4.8"})
      for (int n = 0; n < 10; ++n) {
        ExampleParams prm;
        prm.isometry = s.isometry();
        auto pts = random_chart_points(seed + 100 * n, 4);
        ClassifyResult r = classify(construct_example(name, prm), pts, {});
        ++total;
        if (r.label == classification_label(name))
          ++correct;
        else if (bad.empty())
          bad = std::string(name) + " -> " + r.label;
      }
    double secs = seconds_since(t0);
    line(10, correct == 80 && total == 80 && secs < 60.0,
         "classifier round trip under random isometries: " + std::to_string(correct) + "/" + std::to_string(total) +
             (bad.empty() ? "" : ", first miss " + bad),
         secs);
  }

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
