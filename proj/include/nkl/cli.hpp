#pragma once

// Command-line front end: verify / classify / reconstruct / align.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nkl/align.hpp"
#include "nkl/ambient_checks.hpp"
#include "nkl/integrator.hpp"
#include "nkl/io.hpp"
#include "nkl/report.hpp"
#include "nkl/suite.hpp"

namespace nkl::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kMalformed = 2 };

struct GridSpec {
  double lo = 0.0, hi = 0.0;
  int n = 1;

  static GridSpec parse(const std::string& s) {
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || !is.eof())
      throw MalformedInput("--grid expects lo:hi:n, got '" + s + "'");
    if (g.n < 1) throw MalformedInput("--grid count must be >= 1");
    if (g.n > 1 && !(g.hi > g.lo)) throw MalformedInput("--grid needs hi > lo");
    return g;
  }
  double step() const { return n > 1 ? (hi - lo) / (n - 1) : 1.0; }
  std::string str() const {
    std::ostringstream os;
    os << lo << ':' << hi << ':' << n;
    return os.str();
  }
  std::vector<ChartPoint> points() const {
    std::vector<ChartPoint> pts;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) pts.push_back({lo + a * step(), lo + b * step(), lo + c * step()});
    return pts;
  }
};

struct RunConfig {
  std::uint64_t seed = 1;
  double tol_algebraic = 1e-12;
  double tol_jet = 1e-8;
  double tol_fd = 1e-5;
  double fd_step = 1e-4;
  std::optional<GridSpec> grid;
  OutputFormat format = OutputFormat::json;
  std::string out;

  nlohmann::ordered_json echo() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["tol_algebraic"] = tol_algebraic;
    j["tol_jet"] = tol_jet;
    j["tol_fd"] = tol_fd;
    j["fd_step"] = fd_step;
    j["grid"] = grid ? nlohmann::ordered_json(grid->str()) : nlohmann::ordered_json(nullptr);
    j["format"] = format == OutputFormat::json ? "json" : format == OutputFormat::markdown ? "markdown" : "csv";
    return j;
  }
};

/// Tolerance for checks on ingested files (finite-difference jets).
inline constexpr double kFileTol = 1e-4;

namespace detail {

inline nlohmann::ordered_json quat_json(const Quat& q) { return {q.w, q.x, q.y, q.z}; }

inline SuiteConfig suite_config(const RunConfig& rc) {
  SuiteConfig sc;
  sc.seed = rc.seed;
  sc.tol_jet = rc.tol_jet;
  sc.tol_fd = rc.tol_fd;
  sc.fd_step = rc.fd_step;
  sc.analysis.seed = rc.seed;
  if (rc.grid) sc.points = rc.grid->points();
  return sc;
}

inline nlohmann::ordered_json summary_json(const SuiteSummary& s) {
  nlohmann::ordered_json j;
  j["angles"] = s.angles;
  j["angles_over_pi"] = {s.angles[0] / std::numbers::pi, s.angles[1] / std::numbers::pi, s.angles[2] / std::numbers::pi};
  j["max_abs_h"] = s.max_h;
  j["abs_h123"] = s.abs_h123;
  j["K_gauss"] = nkl::detail::number_or_null(s.K_gauss);
  j["K_metric"] = nkl::detail::number_or_null(s.K_metric);
  j["constant_curvature"] = s.constant_curvature;
  if (s.berger) j["berger"] = {{"tau", s.berger->tau}, {"kappa", s.berger->kappa}};
  j["label"] = s.label;
  return j;
}

inline nlohmann::ordered_json expected_json(const ExpectedRecord& e) {
  nlohmann::ordered_json j;
  j["angles"] = e.angles;
  j["totally_geodesic"] = e.totally_geodesic;
  if (e.h123) j["abs_h123"] = *e.h123;
  j["K"] = e.K ? nlohmann::ordered_json(*e.K) : nlohmann::ordered_json("nonconstant");
  if (e.tau) j["berger"] = {{"tau", *e.tau}, {"kappa", *e.kappa}};
  j["label"] = classification_label(e.name);
  j["description"] = e.description;
  return j;
}

// A classification or alignment target: "example:NAME" or a sampled file.
struct Target {
  std::string spec;
  std::optional<std::string> example;
  Immersion imm;
};

inline Target load_target(const std::string& spec) {
  Target t{spec, std::nullopt, {}};
  const std::string prefix = "example:";
  if (spec.rfind(prefix, 0) == 0) {
    t.example = spec.substr(prefix.size());
    try {
      t.imm = construct_example(*t.example);
    } catch (const UnknownExample& e) {
      throw MalformedInput(e.what());
    }
  } else {
    t.imm = Immersion::sampled(spec, read_grid_file(spec));
  }
  return t;
}

// Nodes far enough from the boundary for central stencils, thinned to at
// most `cap` per axis.
inline std::vector<ChartPoint> interior_nodes(const SampledGrid& g, int cap = 3) {
  std::array<std::vector<int>, 3> idx;
  for (int a = 0; a < 3; ++a) {
    int lo = g.counts[a] > 6 ? 3 : 0, hi = g.counts[a] > 6 ? g.counts[a] - 4 : g.counts[a] - 1;
    int m = std::min(cap, hi - lo + 1);
    for (int k = 0; k < m; ++k) idx[a].push_back(m == 1 ? (lo + hi) / 2 : lo + (hi - lo) * k / (m - 1));
  }
  std::vector<ChartPoint> pts;
  for (int i : idx[0])
    for (int j : idx[1])
      for (int k : idx[2]) pts.push_back(g.node(i, j, k));
  return pts;
}

inline std::vector<ChartPoint> target_points(const Target& t, const RunConfig& rc, int n_random) {
  if (rc.grid) return rc.grid->points();
  if (t.example) return nkl::detail::default_points(*t.example, rc.seed, n_random);
  return interior_nodes(*t.imm.grid());
}

}  // namespace detail

inline VerificationReport cmd_verify_ambient(const RunConfig& rc) {
  VerificationReport rep;
  rep.command = "verify ambient";
  rep.config_echo = rc.echo();
  AmbientSuiteConfig ac;
  ac.seed = rc.seed;
  ac.tol_algebraic = rc.tol_algebraic;
  ac.tol_jet = rc.tol_jet;
  rep.append(verify_ambient(ac));
  return rep;
}

inline VerificationReport cmd_verify_example(const std::string& name, const RunConfig& rc) {
  VerificationReport rep;
  rep.command = "verify example " + name;
  rep.config_echo = rc.echo();
  ExpectedRecord exp;
  try {
    exp = expected_properties(name);
  } catch (const UnknownExample& e) {
    throw MalformedInput(e.what());
  }
  SuiteResult res = verify_example(name, detail::suite_config(rc));
  rep.append(res.checks);
  rep.properties["example"] = name;
  rep.properties["observed"] = detail::summary_json(res.summary);
  rep.properties["expected"] = detail::expected_json(exp);
  return rep;
}

inline VerificationReport cmd_verify_all(const RunConfig& rc) {
  VerificationReport rep = cmd_verify_ambient(rc);
  rep.command = "verify all";
  for (const auto& name : example_names()) {
    VerificationReport ex = cmd_verify_example(name, rc);
    rep.append(ex.checks, name);
    rep.properties[name] = ex.properties["observed"];
  }
  rep.checks.push_back(verify_case2_param(rc.seed, 200, rc.tol_jet));
  return rep;
}

inline VerificationReport cmd_classify(const std::string& spec, const RunConfig& rc) {
  VerificationReport rep;
  rep.command = "classify " + spec;
  rep.config_echo = rc.echo();
  detail::Target t = detail::load_target(spec);
  const bool file = !t.example;
  const double tol = file ? kFileTol : 1e-6;
  ClassifyOptions co{{}, tol, tol, tol};
  co.analysis.seed = rc.seed;
  if (file) co.analysis.lagrangian_tol = co.analysis.commute_tol = kFileTol;
  std::vector<ChartPoint> pts = detail::target_points(t, rc, 10);

  auto r_lag = make_report("lagrangian", "g(X, JY) = 0 for tangent X, Y", file ? kFileTol : rc.tol_jet);
  for (const auto& x : pts) r_lag.record(lagrangian_residual(t.imm, x), nkl::detail::describe(x));
  r_lag.finalize();
  rep.checks.push_back(r_lag);
  auto r_cls = make_report("classified", "the immersion matches an entry of the two classification lists", 0.0);
  if (r_lag.pass) {
    ClassifyResult cr = classify(t.imm, pts, co);
    r_cls.record(cr.label == kOutsideLabel ? 1.0 : 0.0, cr.reason);
    rep.properties["label"] = cr.label;
    rep.properties["item"] = cr.item;
    rep.properties["totally_geodesic"] = cr.totally_geodesic;
    rep.properties["angles"] = cr.angles;
    rep.properties["K"] = cr.K ? nlohmann::ordered_json(*cr.K) : nlohmann::ordered_json(nullptr);
    rep.properties["max_abs_h"] = cr.max_h;
    rep.properties["abs_h123"] = cr.max_abs_h123;
    if (!cr.reason.empty()) rep.properties["reason"] = cr.reason;
    nlohmann::ordered_json off = nlohmann::ordered_json::array();
    for (const auto& x : cr.offending) off.push_back(x);
    rep.properties["offending_points"] = off;
  } else {
    r_cls.record(1.0, "not Lagrangian");
    rep.properties["label"] = kOutsideLabel;
  }
  r_cls.finalize();
  rep.checks.push_back(r_cls);
  rep.properties["n_points"] = pts.size();
  return rep;
}

inline SampledGrid export_grid_case1b(const std::optional<GridSpec>& gs) {
  GridSpec g = gs ? *gs : GridSpec{0.0, 0.5, 11};
  const int refine = 5;
  double h = g.step() / refine;
  int n = (g.n - 1) * refine + 1;
  Immersion ref = construct_example("4.8");
  TorusState fine = integrate_case1b({g.lo, g.lo, g.lo}, {h, h, h}, {n, n, n},
                                     TorusInit::from_immersion(ref, {g.lo, g.lo, g.lo}));
  SampledGrid out;
  out.origin = {g.lo, g.lo, g.lo};
  out.step = {g.step(), g.step(), g.step()};
  out.counts = {g.n, g.n, g.n};
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int c = 0; c < g.n; ++c) out.values.push_back(fine.at(a * refine, b * refine, c * refine));
  return out;
}

inline SampledGrid export_grid_case1a(const std::optional<GridSpec>& gs) {
  GridSpec g = gs ? *gs : GridSpec{-0.25, 0.25, 11};
  return reconstruct_case1a_grid({g.lo, g.lo, g.lo}, {g.step(), g.step(), g.step()}, {g.n, g.n, g.n}, 1e-3);
}

inline VerificationReport cmd_reconstruct(const std::string& which, const RunConfig& rc,
                                          const std::string& export_path) {
  VerificationReport rep;
  rep.command = "reconstruct " + which;
  rep.config_echo = rc.echo();
  if (which == "case1a") {
    const double pi = std::numbers::pi;
    const std::vector<PathSegment> path{{1, 2 * pi}, {2, 1.3}, {3, -0.7}, {1, 0.4}};
    auto run = [&](double h) {
      Case1aOptions o;
      o.step = h;
      o.abort_drift = 1e-2;
      auto tr = integrate_case1a(path, FrameStateS3::standard(), o);
      double dev = 0.0, drift = 0.0;
      for (const auto& s : tr) {
        Point ex{s.u * Quat{0, 1, 0, 0} * qinv(s.u), s.u * Quat{0, 0, 1, 0} * qinv(s.u)};
        dev = std::max({dev, (s.p - ex.p).norm(), (s.q - ex.q).norm()});
        drift = std::max(drift, frame_invariant_drift(s));
      }
      return std::pair{dev, drift};
    };
    auto [dev, drift] = run(1e-3);
    auto r_cf = make_report("case1a_closed_form", "frame ODE solution equals (u i u^-1, u j u^-1) along the path", 1e-6);
    r_cf.record(dev, "step 1e-3");
    auto r_inv = make_report("case1a_invariants",
                             "|alpha|^2 = 3/4, orthogonality, beta_2 x alpha_1 = (sqrt3/2) alpha_3 along the flow", 1e-7);
    r_inv.record(drift, "step 1e-3");
    double e1 = run(0.1).first, e2 = run(0.05).first;
    auto r_conv = make_report("case1a_convergence", "halving the step cuts the error at least 8 times (8 e(h/2) / e(h))", 1.0);
    r_conv.record(8.0 * e2 / e1, "h = 0.1 vs 0.05");
    // alignment against the closed form sampled in the product chart
    SampledGrid g = reconstruct_case1a_grid({-0.3, -0.3, -0.3}, {0.3, 0.3, 0.3}, {3, 3, 3}, 1e-3);
    std::vector<Point> A, B;
    Immersion ref = construct_example("4.6");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          A.push_back(g.at(i, j, k));
          Quat u = product_chart(Quat::one(), g.node(i, j, k));
          B.push_back({u * Quat{0, 1, 0, 0} * qinv(u), u * Quat{0, 0, 1, 0} * qinv(u)});
        }
    Alignment al = isometry_align(A, B);
    auto r_al = make_report("case1a_alignment", "reconstruction agrees with the closed form up to an ambient isometry", 1e-6);
    r_al.record(al.max_deviation, "27 grid nodes");
    for (auto* r : {&r_cf, &r_inv, &r_conv, &r_al}) rep.checks.push_back(*r);
    rep.properties["closed_form_deviation"] = dev;
    rep.properties["error_h_0.1"] = e1;
    rep.properties["error_h_0.05"] = e2;
    rep.properties["alignment"] = {{"a", detail::quat_json(al.iso.a)}, {"b", detail::quat_json(al.iso.b)},
                                   {"c", detail::quat_json(al.iso.c)}};
    if (!export_path.empty()) write_grid_file(export_path, export_grid_case1a(rc.grid));
  } else if (which == "case1b") {
    const double L = 4.0 * std::numbers::pi / kSqrt3;
    Immersion ref = construct_example("4.8");
    TorusInit init = TorusInit::from_immersion(ref, {0, 0, 0});
    auto run = [&](double h) {
      int n = int(std::round(L / h)) + 1;
      double s = L / (n - 1);
      TorusState st = integrate_case1b({0, 0, 0}, {s, s, s}, {n, n, n}, init);
      return std::pair{torus_deviation(st, ref), torus_residuals(st)};
    };
    auto [dev, res] = run(1e-2);
    auto r_cf = make_report("case1b_closed_form", "marched solution equals the flat torus closed form on [0, 4 pi/sqrt3]^3", 1e-6);
    r_cf.record(dev, "step 1e-2");
    auto r_pde = make_report("case1b_pde", "p_uu = p_ww = -3/4 p, q_uu = q_vv = -3/4 q and the two mixed equations", 1e-6);
    r_pde.record(res.max(), "step 1e-2");
    double e1 = run(0.2).first, e2 = run(0.1).first;
    auto r_conv = make_report("case1b_convergence", "halving the step cuts the error at least 4 times (4 e(h/2) / e(h))", 1.0);
    r_conv.record(4.0 * e2 / e1, "h = 0.2 vs 0.1");
    for (auto* r : {&r_cf, &r_pde, &r_conv}) rep.checks.push_back(*r);
    rep.properties["closed_form_deviation"] = dev;
    rep.properties["pde_residuals"] = {{"p_uu", res.p_uu}, {"p_ww", res.p_ww}, {"q_uu", res.q_uu},
                                       {"q_vv", res.q_vv}, {"p_uw", res.p_uw}, {"q_uv", res.q_uv}};
    rep.properties["error_h_0.2"] = e1;
    rep.properties["error_h_0.1"] = e2;
    if (!export_path.empty()) write_grid_file(export_path, export_grid_case1b(rc.grid));
  } else {
    throw MalformedInput("reconstruct expects case1a or case1b, got '" + which + "'");
  }
  return rep;
}

inline VerificationReport cmd_align(const std::string& sa, const std::string& sb, const RunConfig& rc) {
  VerificationReport rep;
  rep.command = "align " + sa + " " + sb;
  rep.config_echo = rc.echo();
  detail::Target a = detail::load_target(sa), b = detail::load_target(sb);
  std::vector<ChartPoint> pts;
  if (rc.grid) {
    pts = rc.grid->points();
  } else if (a.example && b.example) {
    pts = nkl::detail::default_points(*a.example, rc.seed, 12);
  } else {
    const SampledGrid* g = a.example ? b.imm.grid() : a.imm.grid();
    for (int i = 0; i < g->counts[0]; i += std::max(1, g->counts[0] / 4))
      for (int j = 0; j < g->counts[1]; j += std::max(1, g->counts[1] / 4))
        for (int k = 0; k < g->counts[2]; k += std::max(1, g->counts[2] / 4)) pts.push_back(g->node(i, j, k));
  }
  std::vector<Point> A, B;
  try {
    for (const auto& x : pts) {
      A.push_back(a.imm.eval(x));
      B.push_back(b.imm.eval(x));
    }
  } catch (const std::domain_error& e) {
    throw MalformedInput(std::string("targets do not share chart points: ") + e.what());
  }
  Alignment al = isometry_align(A, B, rc.tol_fd);
  auto r = make_report("isometry_align", "B = (a p c^-1, b q c^-1) applied to A at matched chart points", rc.tol_fd);
  r.record(al.max_deviation, std::to_string(pts.size()) + " matched points");
  r.finalize();
  rep.checks.push_back(r);
  rep.properties["a"] = detail::quat_json(al.iso.a);
  rep.properties["b"] = detail::quat_json(al.iso.b);
  rep.properties["c"] = detail::quat_json(al.iso.c);
  rep.properties["max_deviation"] = al.max_deviation;
  rep.properties["congruent"] = al.congruent;
  return rep;
}

/// Parse `args` (without the program name), run, write the report.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification tool for Lagrangian submanifolds of the nearly Kaehler S3 x S3", "nkl_verify"};
  app.require_subcommand(1);
  RunConfig rc;
  std::string grid_s, format_s = "json";
  app.add_option("--seed", rc.seed, "random seed");
  app.add_option("--tol-algebraic", rc.tol_algebraic, "tolerance for algebraic identities")->check(CLI::PositiveNumber);
  app.add_option("--tol-jet", rc.tol_jet, "tolerance for jet-based identities")->check(CLI::PositiveNumber);
  app.add_option("--tol-fd", rc.tol_fd, "tolerance for finite-difference checks")->check(CLI::PositiveNumber);
  app.add_option("--fd-step", rc.fd_step, "finite-difference step")->check(CLI::PositiveNumber);
  app.add_option("--grid", grid_s, "chart grid lo:hi:n (n points per axis)");
  app.add_option("--format", format_s, "json, markdown or csv")->check(CLI::IsMember({"json", "markdown", "csv"}));
  app.add_option("--out", rc.out, "write the report to this file");

  std::vector<std::string> verify_args;
  auto* verify = app.add_subcommand("verify", "verify ambient | verify example <name> | verify all")->fallthrough();
  verify->add_option("what", verify_args)->required()->expected(1, 2);
  std::string classify_target;
  auto* cls = app.add_subcommand("classify", "classify <file|example:NAME>")->fallthrough();
  cls->add_option("target", classify_target)->required();
  std::string recon_which, export_path;
  auto* recon = app.add_subcommand("reconstruct", "reconstruct case1a|case1b")->fallthrough();
  recon->add_option("which", recon_which)->required();
  recon->add_option("--export", export_path, "write the reconstruction as a sampled-immersion file");
  std::string align_a, align_b;
  auto* align = app.add_subcommand("align", "align <a> <b>")->fallthrough();
  align->add_option("a", align_a)->required();
  align->add_option("b", align_b)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  }

  try {
    if (!grid_s.empty()) rc.grid = GridSpec::parse(grid_s);
    rc.format = format_s == "markdown" ? OutputFormat::markdown : format_s == "csv" ? OutputFormat::csv : OutputFormat::json;
    VerificationReport rep;
    if (verify->parsed()) {
      const std::string& w = verify_args[0];
      if (w == "ambient" && verify_args.size() == 1)
        rep = cmd_verify_ambient(rc);
      else if (w == "all" && verify_args.size() == 1)
        rep = cmd_verify_all(rc);
      else if (w == "example" && verify_args.size() == 2)
        rep = cmd_verify_example(verify_args[1], rc);
      else
        throw MalformedInput("verify expects: ambient | all | example <name>");
    } else if (cls->parsed()) {
      rep = cmd_classify(classify_target, rc);
    } else if (recon->parsed()) {
      rep = cmd_reconstruct(recon_which, rc, export_path);
    } else {
      rep = cmd_align(align_a, align_b, rc);
    }
    std::string text = render(rep, rc.format);
    if (!rc.out.empty()) {
      std::ofstream f(rc.out);
      if (!f) throw MalformedInput("cannot write " + rc.out);
      f << text;
    } else {
      out << text;
    }
    if (const ResidualReport* bad = rep.first_failure()) {
      err << "FAIL " << bad->id << ": max residual " << bad->max_residual << " > tol " << bad->tol;
      if (!bad->worst_sample.empty()) err << " at " << bad->worst_sample;
      err << '\n';
      return kCheckFailure;
    }
    return kPass;
  } catch (const MalformedInput& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::exception& e) {
    err << "FAIL: " << e.what() << '\n';
    return kCheckFailure;
  }
}

}  // namespace nkl::cli
