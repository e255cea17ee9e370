#pragma once

// Fit an ambient isometry (p, q) -> (a p c^-1, b q c^-1) between two matched
// sample sets.

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <stdexcept>
#include <vector>

#include "nkl/ambient.hpp"

namespace nkl {

struct Alignment {
  Isometry iso;
  double max_deviation = 0.0;
  bool congruent = false;  // max_deviation within the requested tolerance
};

/// Largest Euclidean deviation between F(A_i) and B_i.
inline double alignment_deviation(const Isometry& F, const std::vector<Point>& A, const std::vector<Point>& B) {
  double worst = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    Point y = F.apply(A[i]);
    worst = std::max({worst, (y.p - B[i].p).norm(), (y.q - B[i].q).norm()});
  }
  return worst;
}

namespace detail {

inline double alignment_sq(const Isometry& F, const std::vector<Point>& A, const std::vector<Point>& B) {
  double s = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    Point y = F.apply(A[i]);
    s += (y.p - B[i].p).norm2() + (y.q - B[i].q).norm2();
  }
  return s;
}

// Gauss-Newton on a <- a exp(x), b <- b exp(y), c <- c exp(z).
inline Isometry refine_alignment(Isometry F, const std::vector<Point>& A, const std::vector<Point>& B,
                                 int max_iter = 10) {
  const Quat e[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const int n = static_cast<int>(A.size());
  double cost = alignment_sq(F, A, B);
  for (int it = 0; it < max_iter && cost > 1e-28; ++it) {
    Eigen::MatrixXd Jm = Eigen::MatrixXd::Zero(8 * n, 9);
    Eigen::VectorXd r(8 * n);
    Quat cc = F.c.conj();
    auto put = [](Eigen::MatrixXd& M, int row, int col, const Quat& q) {
      M(row, col) = q.w;
      M(row + 1, col) = q.x;
      M(row + 2, col) = q.y;
      M(row + 3, col) = q.z;
    };
    for (int i = 0; i < n; ++i) {
      Point y = F.apply(A[i]);
      Quat dp = y.p - B[i].p, dq = y.q - B[i].q;
      r.segment<4>(8 * i) << dp.w, dp.x, dp.y, dp.z;
      r.segment<4>(8 * i + 4) << dq.w, dq.x, dq.y, dq.z;
      for (int m = 0; m < 3; ++m) {
        put(Jm, 8 * i, m, F.a * e[m] * A[i].p * cc);
        put(Jm, 8 * i + 4, 3 + m, F.b * e[m] * A[i].q * cc);
        put(Jm, 8 * i, 6 + m, -1.0 * (F.a * A[i].p * e[m] * cc));
        put(Jm, 8 * i + 4, 6 + m, -1.0 * (F.b * A[i].q * e[m] * cc));
      }
    }
    Eigen::VectorXd d = Jm.colPivHouseholderQr().solve(-r);
    auto step = [&](const Quat& q, int off) {
      Quat r = q * exp_im(ImQuaternion<double>(d(off), d(off + 1), d(off + 2)));
      return r / r.norm();
    };
    Isometry G{step(F.a, 0), step(F.b, 3), step(F.c, 6)};
    double c2 = alignment_sq(G, A, B);
    if (!(c2 < cost)) break;
    F = G;
    cost = c2;
  }
  return F;
}

}  // namespace detail

/// Find (a, b, c) with B_i ~ (a p_i c^-1, b q_i c^-1). The relative
/// quaternions p_0^-1 p_i and q_0^-1 q_i are conjugated by c, so c solves an
/// orthogonal Procrustes problem; a and b follow by averaging, and a few
/// Gauss-Newton steps polish the fit on noisy data.
inline Alignment isometry_align(const std::vector<Point>& A, const std::vector<Point>& B, double tol = 1e-6) {
  if (A.size() != B.size()) throw std::invalid_argument("sample sets must have the same size");
  if (A.size() < 2) throw std::invalid_argument("need at least two matched samples");
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  auto add = [&](const Quat& x, const Quat& y) {
    H += Eigen::Vector3d(y.x, y.y, y.z) * Eigen::Vector3d(x.x, x.y, x.z).transpose();
  };
  for (std::size_t i = 1; i < A.size(); ++i) {
    add(qinv(A[0].p) * A[i].p, qinv(B[0].p) * B[i].p);
    add(qinv(A[0].q) * A[i].q, qinv(B[0].q) * B[i].q);
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(1) > 1e-9 * std::max(1.0, s(0))))
    throw std::invalid_argument("samples are not in general position (relative rotations are coplanar or trivial)");
  Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) D(2, 2) = -1.0;
  Eigen::Matrix3d R = svd.matrixU() * D * svd.matrixV().transpose();
  Eigen::Quaterniond ce(R);
  Quat c{ce.w(), ce.x(), ce.y(), ce.z()};
  auto average = [&](auto pick) {
    Quat acc{}, first{};
    for (std::size_t i = 0; i < A.size(); ++i) {
      Quat e = pick(B[i]) * c * qinv(pick(A[i]));
      if (i == 0) first = e;
      acc = acc + (dot(e, first) < 0 ? -1.0 : 1.0) * e;
    }
    return acc / acc.norm();
  };
  Alignment out;
  out.iso = {average([](const Point& x) { return x.p; }), average([](const Point& x) { return x.q; }), c};
  out.iso = detail::refine_alignment(out.iso, A, B);
  out.max_deviation = alignment_deviation(out.iso, A, B);
  out.congruent = out.max_deviation <= tol;
  return out;
}

}  // namespace nkl
