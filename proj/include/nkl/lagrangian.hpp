#pragma once

// Lagrangian immersions: induced orthonormal frame, the A/B decomposition of
// P, angle functions, canonical eigenframe, second fundamental form and
// connection coefficients at a chart point.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkl/geometry.hpp"
#include "nkl/jet.hpp"

namespace nkl {

struct DegenerateImmersion : std::domain_error {
  using std::domain_error::domain_error;
};

struct NotLagrangian : std::domain_error {
  using std::domain_error::domain_error;
};

using Tensor3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

inline double levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

struct AnalysisOptions {
  std::uint64_t seed = 1;         // draws the diagonalization mixing angle
  double lagrangian_tol = 1e-8;   // precondition for A/B extraction
  double commute_tol = 1e-8;      // [A,B] = 0 requirement
  double cluster_tol = 1e-6;      // angles closer than this are one eigenvalue
  double rank_tol = 1e-8;         // smallest singular value of df under g
};

namespace detail {

using M3 = Eigen::Matrix3d;

inline M3 to_eigen(const Mat3<double>& m) {
  M3 r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r(a, b) = m[a][b];
  return r;
}

inline double off_norm(const M3& m) {
  return std::sqrt(m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2));
}

// Joint diagonalization of symmetric matrices by Jacobi rotations
// (Cardoso-Souloumiac). Returns the accumulated orthogonal matrix.
inline M3 jacobi_joint(M3 a, M3 b) {
  M3 v = M3::Identity();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
        for (const M3* m : {&a, &b}) {
          Eigen::Vector2d h((*m)(p, p) - (*m)(q, q), 2.0 * (*m)(p, q));
          g += h * h.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
        Eigen::Vector2d top = es.eigenvectors().col(1);
        if (top(0) < 0) top = -top;
        double theta = 0.5 * std::atan2(top(1), top(0));
        double c = std::cos(theta), s = std::sin(theta);
        if (std::abs(s) < 1e-16) continue;
        rotated = true;
        M3 r = M3::Identity();
        r(p, p) = c;
        r(p, q) = -s;
        r(q, p) = s;
        r(q, q) = c;
        a = r.transpose() * a * r;
        b = r.transpose() * b * r;
        v = v * r;
      }
    if (!rotated || off_norm(a) + off_norm(b) < 1e-15) break;
  }
  return v;
}

inline double wrap_2pi(double a) {
  const double tau = 2.0 * std::numbers::pi;
  a = std::fmod(a, tau);
  if (a < 0) a += tau;
  if (tau - a < 1e-9) a = 0.0;
  return a;
}

inline double circular_gap(double a, double b) {
  const double tau = 2.0 * std::numbers::pi;
  double d = std::fmod(std::abs(a - b), tau);
  return std::min(d, tau - d);
}

}  // namespace detail

/// Canonical eigenframe data at one chart point.
struct LagrangianFrame {
  ChartPoint chart{};
  Mat3<double> C{};              // E_i = sum_a C[i][a] d_a
  std::array<Vector, 3> E;       // ambient vectors df(E_i)
  std::array<double, 3> angles{};  // 2 theta_i in [0, 2 pi), ascending
  std::array<double, 3> lambda{}, mu{};  // cos 2 theta_i, sin 2 theta_i
  std::array<int, 3> cluster{};  // cluster id per index (equal angles share an id)
  bool degenerate = false;       // some angle repeated
  Tensor3 h{};                   // h_ij^k
  Tensor3 omega{};               // omega_ij^k
  int diag_attempts = 0;         // mixing angles tried
  bool used_jacobi = false;

  double theta(int i) const { return 0.5 * angles[i]; }
  bool same_cluster(int i, int j) const { return cluster[i] == cluster[j]; }
};

/// All pointwise data used by the residual evaluators.
class LagrangianPoint {
 public:
  LagrangianPoint(const Immersion& imm, const ChartPoint& x, const AnalysisOptions& opt = {})
      : chart_(x), opt_(opt) {
    jet_ = imm.jet(x, 3);
    try {
      cg_ = chart_geometry(truncate(jet_));
      for (int c = 0; c < 3; ++c) {
        Arr3<double> e{0.0, 0.0, 0.0};
        e[c] = 1.0;
        dg_[c] = chart_geometry(jet_along(jet_, e));
      }
    } catch (const std::domain_error& e) {
      throw DegenerateImmersion(e.what());
    }
    build_orthonormal();
    check_lagrangian();
    build_frame();
    build_frame_derivative();
    build_sff_and_connection();
  }

  const ChartPoint& chart() const { return chart_; }
  const Jet& jet() const { return jet_; }
  const ChartGeometry<double>& geometry() const { return cg_; }
  const ChartGeometry<Dual1>& derivative_geometry(int c) const { return dg_[c]; }
  const LagrangianFrame& frame() const { return frame_; }
  /// Induced g-orthonormal frame (Gram-Schmidt of the coordinate fields).
  const Mat3<double>& orthonormal() const { return O_; }
  std::array<Vector, 3> induced_frame() const { return combine_rows(O_); }
  /// max |g(df e_i, J df e_j)| over the induced orthonormal frame.
  double lagrangian_residual() const { return lagr_residual_; }
  /// A, B in the induced orthonormal frame.
  const Mat3<double>& A_induced() const { return A_on_; }
  const Mat3<double>& B_induced() const { return B_on_; }
  /// Frame derivative: d_a E_j = sum_l M[a][l][j] E_l.
  const Tensor3& frame_derivative() const { return m_; }

  /// Contract a coordinate tensor T_abc with the eigenframe.
  template <class T, class Zero>
  T to_frame3(const Mat3<Arr3<T>>& t, int i, int j, int k, Zero zero) const {
    T r = zero;
    const auto& C = frame_.C;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) r = r + (C[i][a] * C[j][b] * C[k][c]) * t[a][b][c];
    return r;
  }

  std::array<Vector, 3> combine_rows(const Mat3<double>& C) const {
    std::array<Vector, 3> out;
    for (int i = 0; i < 3; ++i) {
      Vector v = Vector::zero(cg_.x);
      for (int a = 0; a < 3; ++a) v += C[i][a] * cg_.f[a];
      out[i] = v;
    }
    return out;
  }

 private:
  void build_orthonormal() {
    detail::M3 G = detail::to_eigen(cg_.G);
    Eigen::SelfAdjointEigenSolver<detail::M3> es(G);
    double smin = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
    if (!(smin >= opt_.rank_tol)) throw DegenerateImmersion("pushforward has rank < 3");
    Eigen::LLT<detail::M3> llt(G);
    detail::M3 Linv = llt.matrixL().solve(detail::M3::Identity());
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < 3; ++a) O_[i][a] = Linv(i, a);
  }

  template <class M>
  Mat3<double> in_basis(const M& C, const Mat3<double>& t) const {
    Mat3<double> r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) r[i][j] += C[i][a] * C[j][b] * t[a][b];
    return r;
  }

  void check_lagrangian() {
    Mat3<double> l = in_basis(O_, cg_.L);
    lagr_residual_ = 0.0;
    for (auto& row : l)
      for (double e : row) lagr_residual_ = std::max(lagr_residual_, std::abs(e));
    A_on_ = in_basis(O_, cg_.A);
    B_on_ = in_basis(O_, cg_.B);
  }

  void build_frame() {
    if (!(lagr_residual_ <= opt_.lagrangian_tol))
      throw NotLagrangian("immersion is not Lagrangian at this point (residual " +
                          std::to_string(lagr_residual_) + ")");
    detail::M3 A = detail::to_eigen(A_on_), B = detail::to_eigen(B_on_);
    A = 0.5 * (A + A.transpose());
    B = 0.5 * (B + B.transpose());
    double comm = (A * B - B * A).norm();
    if (!(comm <= opt_.commute_tol)) throw NotLagrangian("A and B do not commute");

    std::mt19937_64 rng(opt_.seed);
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
    detail::M3 V;
    bool ok = false;
    for (int attempt = 0; attempt < 5 && !ok; ++attempt) {
      double phi = U(rng);
      Eigen::SelfAdjointEigenSolver<detail::M3> es(std::cos(phi) * A + std::sin(phi) * B);
      V = es.eigenvectors();
      frame_.diag_attempts = attempt + 1;
      ok = detail::off_norm(V.transpose() * A * V) <= 1e-10 && detail::off_norm(V.transpose() * B * V) <= 1e-10;
    }
    if (!ok) {
      V = detail::jacobi_joint(A, B);
      frame_.used_jacobi = true;
      const double off_tol = std::max(1e-8, opt_.commute_tol);
      if (detail::off_norm(V.transpose() * A * V) > off_tol || detail::off_norm(V.transpose() * B * V) > off_tol)
        throw NotLagrangian("joint diagonalization of A and B failed");
    }
    detail::M3 Ad = V.transpose() * A * V, Bd = V.transpose() * B * V;
    std::array<int, 3> order{0, 1, 2};
    std::array<double, 3> ang;
    for (int i = 0; i < 3; ++i) ang[i] = detail::wrap_2pi(std::atan2(Bd(i, i), Ad(i, i)));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
    for (int i = 0; i < 3; ++i) {
      int s = order[i];
      frame_.angles[i] = ang[s];
      frame_.lambda[i] = std::cos(ang[s]);
      frame_.mu[i] = std::sin(ang[s]);
      for (int a = 0; a < 3; ++a) {
        double c = 0.0;
        for (int k = 0; k < 3; ++k) c += V(k, s) * O_[k][a];
        frame_.C[i][a] = c;
      }
    }
    frame_.chart = chart_;
    frame_.E = combine_rows(frame_.C);
    // Orientation gauge: J G(E1, E2) = +E3 / sqrt(3).
    double o = kSqrt3 * metric_g(apply_J(tensor_G(frame_.E[0], frame_.E[1])), frame_.E[2]);
    if (o < 0) {
      for (int a = 0; a < 3; ++a) frame_.C[0][a] = -frame_.C[0][a];
      frame_.E[0] = -frame_.E[0];
    }
    // Clusters of equal angles.
    int next = 0;
    for (int i = 0; i < 3; ++i) {
      frame_.cluster[i] = -1;
      for (int j = 0; j < i; ++j)
        if (detail::circular_gap(frame_.angles[i], frame_.angles[j]) <= opt_.cluster_tol) {
          frame_.cluster[i] = frame_.cluster[j];
          frame_.degenerate = true;
          break;
        }
      if (frame_.cluster[i] < 0) frame_.cluster[i] = next++;
    }
  }

  // First-order variation of the eigenframe along each chart direction,
  // from the perturbation of the generalized eigenproblems (A, G), (B, G).
  // Inside a cluster of equal angles the rotation part is gauged to zero.
  void build_frame_derivative() {
    const auto& C = frame_.C;
    for (int a = 0; a < 3; ++a) {
      Mat3<double> dG = in_basis(C, dpart(dg_[a].G));
      Mat3<double> dA = in_basis(C, dpart(dg_[a].A));
      Mat3<double> dB = in_basis(C, dpart(dg_[a].B));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double m;
          if (i == j || frame_.same_cluster(i, j)) {
            m = -0.5 * dG[i][j];
          } else {
            double gl = frame_.lambda[i] - frame_.lambda[j];
            double gm = frame_.mu[i] - frame_.mu[j];
            if (std::abs(gl) >= std::abs(gm))
              m = (frame_.lambda[j] * dG[i][j] - 0.5 * (dA[i][j] + dA[j][i])) / gl;
            else
              m = (frame_.mu[j] * dG[i][j] - 0.5 * (dB[i][j] + dB[j][i])) / gm;
          }
          m_[a][i][j] = m;
        }
    }
  }

  void build_sff_and_connection() {
    const auto& C = frame_.C;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          frame_.h[i][j][k] = to_frame3(cg_.h3, i, j, k, 0.0);
          double w = 0.0;
          for (int a = 0; a < 3; ++a) {
            double inner = m_[a][k][j];
            for (int b = 0; b < 3; ++b)
              for (int e = 0; e < 3; ++e) inner += C[j][b] * C[k][e] * cg_.gamma_low[a][b][e];
            w += C[i][a] * inner;
          }
          frame_.omega[i][j][k] = w;
        }
  }

  ChartPoint chart_;
  AnalysisOptions opt_;
  Jet jet_;
  ChartGeometry<double> cg_;
  std::array<ChartGeometry<Dual1>, 3> dg_;
  Mat3<double> O_{};
  Mat3<double> A_on_{}, B_on_{};
  double lagr_residual_ = 0.0;
  LagrangianFrame frame_;
  Tensor3 m_{};
};

/// Lagrangian test without the A/B precondition.
inline double lagrangian_residual(const Immersion& imm, const ChartPoint& x) {
  Jet j = imm.jet(x, 1);
  Jet2<double> j2;
  j2.x = j.x;
  j2.d1 = j.d1;
  Arr3<Vector> f, Jf;
  Mat3<double> G{}, L{};
  for (int a = 0; a < 3; ++a) {
    f[a] = tangential(j.x, j.d1[a]);
    Jf[a] = apply_J(f[a]);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      G[a][b] = metric_g(f[a], f[b]);
      L[a][b] = metric_g(f[a], Jf[b]);
    }
  Eigen::Matrix3d Ge = detail::to_eigen(G);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Ge);
  if (!(es.eigenvalues()(0) >= 1e-16)) throw DegenerateImmersion("pushforward has rank < 3");
  Eigen::Matrix3d Linv = Eigen::LLT<Eigen::Matrix3d>(Ge).matrixL().solve(Eigen::Matrix3d::Identity());
  Eigen::Matrix3d l = Linv * detail::to_eigen(L) * Linv.transpose();
  return l.cwiseAbs().maxCoeff();
}

}  // namespace nkl
