#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>

namespace oracle {

// ---------------------------------------------------------------------------
// Left-invariant geometry of S^3 x S^3 from the Lie bracket alone, in the
// coordinates of the basis (E1, E2, E3, F1, F2, F3).
// ---------------------------------------------------------------------------
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline double levi(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

struct LieAlgebraModel {
  Mat6 gram, gram_inv, J, P;
  std::array<std::array<Vec6, 6>, 6> bracket;  // [X_a, X_b]
  std::array<std::array<Vec6, 6>, 6> nabla;    // nabla_{X_a} X_b

  LieAlgebraModel() {
    const double s3 = std::sqrt(3.0);
    gram.setZero();
    J.setZero();
    P.setZero();
    for (int i = 0; i < 3; ++i) {
      gram(i, i) = gram(i + 3, i + 3) = 4.0 / 3.0;
      gram(i, i + 3) = gram(i + 3, i) = -2.0 / 3.0;
      // columns are images of basis vectors
      J(i, i) = -1.0 / s3;
      J(i + 3, i) = -2.0 / s3;
      J(i, i + 3) = 2.0 / s3;
      J(i + 3, i + 3) = 1.0 / s3;
      P(i + 3, i) = 1.0;
      P(i, i + 3) = 1.0;
    }
    gram_inv = gram.inverse();
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        Vec6 v = Vec6::Zero();
        bool ea = a < 3, eb = b < 3;
        if (ea == eb) {
          int off = ea ? 0 : 3;
          for (int k = 0; k < 3; ++k) v(off + k) = -2.0 * levi(a % 3, b % 3, k);
        }
        bracket[a][b] = v;
      }
    // Koszul formula for left-invariant fields.
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        Vec6 rhs;
        for (int c = 0; c < 6; ++c) {
          Vec6 ec = Vec6::Unit(c), ea = Vec6::Unit(a), eb = Vec6::Unit(b);
          rhs(c) = 0.5 * (g(bracket[a][b], ec) - g(bracket[b][c], ea) + g(bracket[c][a], eb));
        }
        nabla[a][b] = gram_inv * rhs;
      }
  }

  double g(const Vec6& x, const Vec6& y) const { return x.dot(gram * y); }

  Vec6 br(const Vec6& x, const Vec6& y) const {
    Vec6 r = Vec6::Zero();
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) r += x(a) * y(b) * bracket[a][b];
    return r;
  }

  Vec6 cov(const Vec6& x, const Vec6& y) const {
    Vec6 r = Vec6::Zero();
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) r += x(a) * y(b) * nabla[a][b];
    return r;
  }

  Vec6 G(const Vec6& x, const Vec6& y) const { return cov(x, J * y) - J * cov(x, y); }
  Vec6 nablaP(const Vec6& x, const Vec6& y) const { return cov(x, P * y) - P * cov(x, y); }
  Vec6 R(const Vec6& x, const Vec6& y, const Vec6& z) const {
    return cov(x, cov(y, z)) - cov(y, cov(x, z)) - cov(br(x, y), z);
  }
};

// ---------------------------------------------------------------------------
// Riemann tensor of a metric given in coordinates, by nested central
// differences: Christoffels from the metric, then Riemann from Christoffels.
// R[a][b][c][d] = g(R(d_c, d_d) d_b, d_a).
// ---------------------------------------------------------------------------
template <int N>
struct FdRiemann {
  using Mat = Eigen::Matrix<double, N, N>;
  using Pt = Eigen::Matrix<double, N, 1>;
  using Gamma = std::array<Mat, N>;  // Gamma[a](b, c)
  std::function<Mat(const Pt&)> metric;
  double h;

  Gamma christoffel(const Pt& x) const {
    std::array<Mat, N> dg;  // dg[c] = d_c g
    for (int c = 0; c < N; ++c) {
      Pt e = Pt::Zero();
      e(c) = h;
      dg[c] = (metric(x + e) - metric(x - e)) / (2 * h);
    }
    Mat ginv = metric(x).inverse();
    Gamma G;
    for (int a = 0; a < N; ++a) {
      G[a].setZero();
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          for (int d = 0; d < N; ++d)
            G[a](b, c) += 0.5 * ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
    }
    return G;
  }

  std::array<std::array<std::array<std::array<double, N>, N>, N>, N> lowered(const Pt& x) const {
    Gamma G0 = christoffel(x);
    std::array<Gamma, N> dG;
    for (int c = 0; c < N; ++c) {
      Pt e = Pt::Zero();
      e(c) = h;
      Gamma gp = christoffel(x + e), gm = christoffel(x - e);
      for (int a = 0; a < N; ++a) dG[c][a] = (gp[a] - gm[a]) / (2 * h);
    }
    Mat g0 = metric(x);
    std::array<std::array<std::array<std::array<double, N>, N>, N>, N> up{}, low{};
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          for (int d = 0; d < N; ++d) {
            double r = dG[c][a](d, b) - dG[d][a](c, b);
            for (int e = 0; e < N; ++e) r += G0[a](c, e) * G0[e](d, b) - G0[a](d, e) * G0[e](c, b);
            up[a][b][c][d] = r;
          }
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          for (int d = 0; d < N; ++d) {
            double r = 0.0;
            for (int e = 0; e < N; ++e) r += g0(a, e) * up[e][b][c][d];
            low[a][b][c][d] = r;
          }
    return low;
  }
};

}  // namespace oracle
