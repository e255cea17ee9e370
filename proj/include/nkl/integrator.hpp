#pragma once

// Reconstruction of the two non totally geodesic constant curvature
// immersions from their structure equations: a frame ODE on S^3 for the
// round sphere of curvature 3/16 and a coordinate-line marcher on R^3 for
// the flat torus.

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nkl/catalog.hpp"
#include "nkl/jet.hpp"

namespace nkl {

struct IntegrationDrift : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- Case 1a

/// State of the frame ODE: position u on S^3, the imaginary quaternions
/// alpha_1, beta_2, alpha_3 and the immersion (p, q).
struct FrameStateS3 {
  Quat u = Quat::one();
  Quat alpha1, beta2, alpha3;  // imaginary
  Quat p, q;

  static FrameStateS3 standard() {
    const double s = kSqrt3 / 2.0;
    FrameStateS3 st;
    st.alpha1 = {0.0, 0.0, 0.0, -s};
    st.beta2 = {0.0, s, 0.0, 0.0};
    st.alpha3 = {0.0, 0.0, s, 0.0};
    st.p = {0.0, 1.0, 0.0, 0.0};
    st.q = {0.0, 0.0, 1.0, 0.0};
    return st;
  }

  friend FrameStateS3 operator+(const FrameStateS3& a, const FrameStateS3& b) {
    return {a.u + b.u, a.alpha1 + b.alpha1, a.beta2 + b.beta2, a.alpha3 + b.alpha3, a.p + b.p, a.q + b.q};
  }
  friend FrameStateS3 operator*(double s, const FrameStateS3& a) {
    return {s * a.u, s * a.alpha1, s * a.beta2, s * a.alpha3, s * a.p, s * a.q};
  }
};

/// Largest violation of |alpha|^2 = 3/4, mutual orthogonality,
/// beta_2 x alpha_1 = (sqrt3/2) alpha_3 and |u| = |p| = |q| = 1.
inline double frame_invariant_drift(const FrameStateS3& s) {
  auto im = [](const Quat& x) { return ImQuat(x); };
  double d = 0.0;
  for (const Quat* a : {&s.alpha1, &s.beta2, &s.alpha3}) d = std::max(d, std::abs(dot(*a, *a) - 0.75));
  d = std::max({d, std::abs(dot(s.alpha1, s.beta2)), std::abs(dot(s.alpha1, s.alpha3)), std::abs(dot(s.beta2, s.alpha3))});
  ImQuat cr = im_half_commutator(im(s.beta2), im(s.alpha1)) - (kSqrt3 / 2.0) * im(s.alpha3);
  d = std::max(d, std::sqrt(cr.norm2()));
  for (const Quat* a : {&s.u, &s.p, &s.q}) d = std::max(d, std::abs(a->norm() - 1.0));
  for (const Quat* a : {&s.alpha1, &s.beta2, &s.alpha3}) d = std::max(d, std::abs(a->w));
  return d;
}

/// Derivative of the state along the left invariant field X_dir (1, 2, 3).
inline FrameStateS3 frame_rhs(const FrameStateS3& s, int dir) {
  const double c = -4.0 / kSqrt3;
  FrameStateS3 d;
  const Quat zero{};
  switch (dir) {
    case 1:
      d.u = s.u * Quat{0.0, 1.0, 0.0, 0.0};
      d.alpha1 = 2.0 * s.alpha3;
      d.beta2 = zero;
      d.alpha3 = -2.0 * s.alpha1;
      d.p = zero;
      d.q = c * (s.q * s.beta2);
      break;
    case 2:
      d.u = s.u * Quat{0.0, 0.0, 1.0, 0.0};
      d.alpha1 = -2.0 * s.beta2;
      d.beta2 = 2.0 * s.alpha1;
      d.alpha3 = zero;
      d.p = c * (s.p * s.alpha3);
      d.q = zero;
      break;
    case 3:
      d.u = s.u * Quat{0.0, 0.0, 0.0, -1.0};
      d.alpha1 = zero;
      d.beta2 = -2.0 * s.alpha3;
      d.alpha3 = 2.0 * s.beta2;
      d.p = c * (s.p * s.alpha1);
      d.q = c * (s.q * s.alpha1);
      break;
    default:
      throw std::invalid_argument("direction must be 1, 2 or 3");
  }
  return d;
}

struct PathSegment {
  int dir;        // X_1, X_2 or X_3
  double length;  // signed parameter length
};

struct Case1aOptions {
  double step = 1e-3;
  double abort_drift = 1e-5;
  bool record = true;  // keep every step in the trajectory
};

/// RK4 along a piecewise path of integral curves of X_1, X_2, X_3.
inline std::vector<FrameStateS3> integrate_case1a(const std::vector<PathSegment>& path,
                                                  const FrameStateS3& init = FrameStateS3::standard(),
                                                  const Case1aOptions& opt = {}) {
  if (!(opt.step > 0)) throw std::invalid_argument("step must be positive");
  if (frame_invariant_drift(init) > 1e-8) throw std::invalid_argument("initial frame violates the invariants");
  std::vector<FrameStateS3> traj{init};
  FrameStateS3 s = init;
  for (const auto& seg : path) {
    int n = std::max(1, int(std::ceil(std::abs(seg.length) / opt.step - 1e-9)));
    double h = seg.length / n;
    for (int k = 0; k < n; ++k) {
      FrameStateS3 k1 = frame_rhs(s, seg.dir);
      FrameStateS3 k2 = frame_rhs(s + (0.5 * h) * k1, seg.dir);
      FrameStateS3 k3 = frame_rhs(s + (0.5 * h) * k2, seg.dir);
      FrameStateS3 k4 = frame_rhs(s + h * k3, seg.dir);
      s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      double drift = frame_invariant_drift(s);
      if (drift > opt.abort_drift) {
        std::ostringstream msg;
        msg << "frame invariants drifted by " << drift << " along X_" << seg.dir;
        throw IntegrationDrift(msg.str());
      }
      if (opt.record) traj.push_back(s);
    }
  }
  if (!opt.record && !path.empty()) traj.push_back(s);
  return traj;
}

/// Integrate over a regular grid of the product chart
/// (t1, t2, t3) -> u0 exp(t1 i) exp(t2 j) exp(-t3 k), where u0 is the
/// position of `init`; node (t1, t2, t3) is reached by flowing along X_1,
/// then X_2, then X_3.
inline SampledGrid reconstruct_case1a_grid(const Arr3<double>& origin, const Arr3<double>& step,
                                           const Arr3<int>& counts, double h = 1e-3,
                                           const FrameStateS3& init = FrameStateS3::standard()) {
  Case1aOptions opt;
  opt.step = h;
  opt.record = false;
  auto flow = [&](const FrameStateS3& s, int dir, double len) {
    return len == 0.0 ? s : integrate_case1a({{dir, len}}, s, opt).back();
  };
  SampledGrid g;
  g.origin = origin;
  g.step = step;
  g.counts = counts;
  g.values.resize(g.size());
  FrameStateS3 s1 = flow(init, 1, origin[0]);
  for (int i = 0; i < counts[0]; ++i) {
    if (i > 0) s1 = flow(s1, 1, step[0]);
    FrameStateS3 s2 = flow(s1, 2, origin[1]);
    for (int j = 0; j < counts[1]; ++j) {
      if (j > 0) s2 = flow(s2, 2, step[1]);
      FrameStateS3 s3 = flow(s2, 3, origin[2]);
      for (int k = 0; k < counts[2]; ++k) {
        if (k > 0) s3 = flow(s3, 3, step[2]);
        g.values[g.index(i, j, k)] = {s3.p, s3.q};
      }
    }
  }
  return g;
}

/// Position reached by the product-chart path, in closed form.
inline Quat product_chart(const Quat& u0, const Arr3<double>& t) {
  auto e = [](double a, const Quat& axis) { return std::cos(a) * Quat::one() + std::sin(a) * axis; };
  return u0 * e(t[0], {0.0, 1.0, 0.0, 0.0}) * e(t[1], {0.0, 0.0, 1.0, 0.0}) * e(t[2], {0.0, 0.0, 0.0, -1.0});
}

// ---------------------------------------------------------------- Case 1b

/// Values and first partials of p(u, w) and q(u, v) on the coordinate grid.
struct TorusState {
  Arr3<double> origin{};  // (u, v, w) of node 0
  Arr3<double> step{};
  Arr3<int> counts{1, 1, 1};
  // p[iu * nw + iw], q[iu * nv + iv]
  std::vector<Quat> p, p_u, p_w, p_uw;
  std::vector<Quat> q, q_u, q_v, q_uv;

  int nu() const { return counts[0]; }
  int nv() const { return counts[1]; }
  int nw() const { return counts[2]; }
  std::size_t pi(int iu, int iw) const { return std::size_t(iu) * nw() + iw; }
  std::size_t qi(int iu, int iv) const { return std::size_t(iu) * nv() + iv; }
  Point at(int iu, int iv, int iw) const { return {p[pi(iu, iw)], q[qi(iu, iv)]}; }
  ChartPoint node(int iu, int iv, int iw) const {
    return {origin[0] + iu * step[0], origin[1] + iv * step[1], origin[2] + iw * step[2]};
  }
};

/// Initial data at the grid origin: p, q and their first partials.
struct TorusInit {
  Quat p, p_u, p_w;
  Quat q, q_u, q_v;

  /// Data of an immersion at a chart point.
  static TorusInit from_immersion(const Immersion& imm, const ChartPoint& x) {
    Jet j = imm.jet(x, 1);
    return {j.x.p, j.d1[0].u, j.d1[2].u, j.x.q, j.d1[0].v, j.d1[1].v};
  }
};

namespace detail {

// RK4 for y'' = -(3/4) y together with a forced companion z' = F(t), both
// quaternion valued: state (y, y', z, z').
struct Harmonic {
  Quat y, dy, z, dz;
  friend Harmonic operator+(const Harmonic& a, const Harmonic& b) {
    return {a.y + b.y, a.dy + b.dy, a.z + b.z, a.dz + b.dz};
  }
  friend Harmonic operator*(double s, const Harmonic& a) { return {s * a.y, s * a.dy, s * a.z, s * a.dz}; }
};

// Both pairs satisfy y'' = -(3/4) y.
inline Harmonic harmonic_rhs(const Harmonic& s) { return {s.dy, -0.75 * s.y, s.dz, -0.75 * s.z}; }

inline Harmonic rk4_harmonic(const Harmonic& s, double h) {
  Harmonic k1 = harmonic_rhs(s);
  Harmonic k2 = harmonic_rhs(s + (0.5 * h) * k1);
  Harmonic k3 = harmonic_rhs(s + (0.5 * h) * k2);
  Harmonic k4 = harmonic_rhs(s + h * k3);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Along the u = 0 line: y'' = -(3/4) y and the cross partial
// x' = sigma * y * coupling, integrated together by RK4.
struct Line {
  Quat y, dy, x;
  friend Line operator+(const Line& a, const Line& b) { return {a.y + b.y, a.dy + b.dy, a.x + b.x}; }
  friend Line operator*(double s, const Line& a) { return {s * a.y, s * a.dy, s * a.x}; }
};

inline std::vector<Line> integrate_line(Line s, double h, int n, const Quat& coupling, double sigma) {
  auto rhs = [&](const Line& l) { return Line{l.dy, -0.75 * l.y, sigma * (l.y * coupling)}; };
  std::vector<Line> out{s};
  for (int k = 1; k < n; ++k) {
    Line k1 = rhs(s);
    Line k2 = rhs(s + (0.5 * h) * k1);
    Line k3 = rhs(s + (0.5 * h) * k2);
    Line k4 = rhs(s + h * k3);
    s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// Integrate p_uu = p_ww = -(3/4) p, q_uu = q_vv = -(3/4) q,
/// p_uw = -(sqrt3/2) p q^-1 q_v, q_uv = (sqrt3/2) q p^-1 p_w from data at the
/// origin: RK4 along the w (resp. v) axis, then RK4 along every u line.
inline TorusState integrate_case1b(const Arr3<double>& origin, const Arr3<double>& step, const Arr3<int>& counts,
                                   const TorusInit& init) {
  for (int c = 0; c < 3; ++c) {
    if (counts[c] < 1) throw std::invalid_argument("grid counts must be >= 1");
    if (counts[c] > 1 && !(step[c] > 0)) throw std::invalid_argument("grid steps must be positive");
  }
  TorusState st;
  st.origin = origin;
  st.step = step;
  st.counts = counts;
  const int nu = counts[0], nv = counts[1], nw = counts[2];
  const double s = kSqrt3 / 2.0;
  // q^-1 q_v does not depend on v, p^-1 p_w does not depend on w
  const Quat cq = qinv(init.q) * init.q_v;
  const Quat cp = qinv(init.p) * init.p_w;
  auto pline = detail::integrate_line({init.p, init.p_w, init.p_u}, step[2], nw, cq, -s);
  auto qline = detail::integrate_line({init.q, init.q_v, init.q_u}, step[1], nv, cp, s);
  st.p.resize(std::size_t(nu) * nw);
  st.p_u.resize(st.p.size());
  st.p_w.resize(st.p.size());
  st.p_uw.resize(st.p.size());
  st.q.resize(std::size_t(nu) * nv);
  st.q_u.resize(st.q.size());
  st.q_v.resize(st.q.size());
  st.q_uv.resize(st.q.size());
  for (int iw = 0; iw < nw; ++iw) {
    const auto& l = pline[iw];
    // (p, p_u) and (p_w, p_uw) both solve y_uu = -(3/4) y
    detail::Harmonic h{l.y, l.x, l.dy, -s * (l.y * cq)};
    for (int iu = 0; iu < nu; ++iu) {
      if (iu > 0) h = detail::rk4_harmonic(h, step[0]);
      auto k = st.pi(iu, iw);
      st.p[k] = h.y;
      st.p_u[k] = h.dy;
      st.p_w[k] = h.z;
      st.p_uw[k] = h.dz;
    }
  }
  for (int iv = 0; iv < nv; ++iv) {
    const auto& l = qline[iv];
    detail::Harmonic h{l.y, l.x, l.dy, s * (l.y * cp)};
    for (int iu = 0; iu < nu; ++iu) {
      if (iu > 0) h = detail::rk4_harmonic(h, step[0]);
      auto k = st.qi(iu, iv);
      st.q[k] = h.y;
      st.q_u[k] = h.dy;
      st.q_v[k] = h.z;
      st.q_uv[k] = h.dz;
    }
  }
  for (const auto* f : {&st.p, &st.q})
    for (const Quat& x : *f)
      if (!(std::abs(x.norm() - 1.0) <= 1e-3)) throw IntegrationDrift("torus marcher left S^3 x S^3");
  return st;
}

/// The six equations of the system on the computed solution. The pure
/// second partials come from differences of the stored first partials, the
/// mixed ones are integrated quantities.
struct TorusResiduals {
  double p_uu = 0, p_ww = 0, q_uu = 0, q_vv = 0, p_uw = 0, q_uv = 0;
  double max() const { return std::max({p_uu, p_ww, q_uu, q_vv, p_uw, q_uv}); }
};

inline TorusResiduals torus_residuals(const TorusState& st) {
  TorusResiduals r;
  const double s = kSqrt3 / 2.0;
  // fourth-order central difference of stored first partials
  auto d1 = [](const std::vector<Quat>& f, auto idx, int i, double h) {
    return (f[idx(i - 2)] - 8.0 * f[idx(i - 1)] + 8.0 * f[idx(i + 1)] - f[idx(i + 2)]) / (12.0 * h);
  };
  const int nu = st.nu(), nv = st.nv(), nw = st.nw();
  for (int iu = 2; iu + 2 < nu; ++iu) {
    for (int iw = 0; iw < nw; ++iw) {
      Quat puu = d1(st.p_u, [&](int i) { return st.pi(i, iw); }, iu, st.step[0]);
      r.p_uu = std::max(r.p_uu, (puu + 0.75 * st.p[st.pi(iu, iw)]).norm());
    }
    for (int iv = 0; iv < nv; ++iv) {
      Quat quu = d1(st.q_u, [&](int i) { return st.qi(i, iv); }, iu, st.step[0]);
      r.q_uu = std::max(r.q_uu, (quu + 0.75 * st.q[st.qi(iu, iv)]).norm());
    }
  }
  for (int iu = 0; iu < nu; ++iu) {
    for (int iw = 2; iw + 2 < nw; ++iw) {
      Quat pww = d1(st.p_w, [&](int i) { return st.pi(iu, i); }, iw, st.step[2]);
      r.p_ww = std::max(r.p_ww, (pww + 0.75 * st.p[st.pi(iu, iw)]).norm());
    }
    for (int iv = 2; iv + 2 < nv; ++iv) {
      Quat qvv = d1(st.q_v, [&](int i) { return st.qi(iu, i); }, iv, st.step[1]);
      r.q_vv = std::max(r.q_vv, (qvv + 0.75 * st.q[st.qi(iu, iv)]).norm());
    }
    // coupled equations, at a few v / w nodes of the same u
    for (int iw = 0; iw < nw; iw += std::max(1, nw / 7))
      for (int iv = 0; iv < nv; iv += std::max(1, nv / 7)) {
        const Quat& p = st.p[st.pi(iu, iw)];
        const Quat& q = st.q[st.qi(iu, iv)];
        Quat e1 = st.p_uw[st.pi(iu, iw)] + s * (p * qinv(q) * st.q_v[st.qi(iu, iv)]);
        Quat e2 = st.q_uv[st.qi(iu, iv)] - s * (q * qinv(p) * st.p_w[st.pi(iu, iw)]);
        r.p_uw = std::max(r.p_uw, e1.norm());
        r.q_uv = std::max(r.q_uv, e2.norm());
      }
  }
  return r;
}

/// Largest deviation of the computed torus from an immersion on the grid.
inline double torus_deviation(const TorusState& st, const Immersion& ref) {
  double worst = 0.0;
  const int nu = st.nu(), nv = st.nv(), nw = st.nw();
  for (int iu = 0; iu < nu; ++iu) {
    for (int iw = 0; iw < nw; ++iw) {
      Point y = ref.eval(st.node(iu, 0, iw));
      worst = std::max(worst, (y.p - st.p[st.pi(iu, iw)]).norm());
    }
    for (int iv = 0; iv < nv; ++iv) {
      Point y = ref.eval(st.node(iu, iv, 0));
      worst = std::max(worst, (y.q - st.q[st.qi(iu, iv)]).norm());
    }
  }
  return worst;
}

/// Sampled immersion from a torus state (every node of the 3D grid).
inline SampledGrid torus_grid(const TorusState& st) {
  SampledGrid g;
  g.origin = st.origin;
  g.step = st.step;
  g.counts = st.counts;
  g.values.reserve(g.size());
  for (int iu = 0; iu < st.nu(); ++iu)
    for (int iv = 0; iv < st.nv(); ++iv)
      for (int iw = 0; iw < st.nw(); ++iw) g.values.push_back(st.at(iu, iv, iw));
  return g;
}

}  // namespace nkl
