#include <gtest/gtest.h>

#include <cmath>

#include "nkl/catalog.hpp"
#include "nkl/jet.hpp"
#include "nkl/sampling.hpp"

using namespace nkl;

namespace {

double r8_dist(const R8<double>& a, const R8<double>& b) { return std::max((a.u - b.u).norm(), (a.v - b.v).norm()); }

R8<double> diff(const Point& a, const Point& b, double s) { return {(a.p - b.p) / s, (a.q - b.q) / s}; }

ChartPoint shift(ChartPoint x, int a, double h) {
  x[a] += h;
  return x;
}

}  // namespace

TEST(Pushforward, SphereChartAtCenter) {
  // d/dt u0 exp(t X) at t = 0 is u0 X with X = i, j, -k
  Sampler s(5);
  Quat u0 = s.unit_quat();
  ExampleParams prm;
  prm.center = u0;
  Immersion im = construct_example("4.1", prm);
  const Quat X[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}};
  for (int a = 0; a < 3; ++a) {
    Arr3<double> e{};
    e[a] = 1.0;
    Vector v = im.pushforward({0, 0, 0}, e);
    EXPECT_LT((v.u - u0 * X[a]).norm(), 1e-14);
    EXPECT_LT(v.v.norm(), 1e-14);
  }
}

TEST(Pushforward, Example46ByHand) {
  // f(u) = (u i u^-1, u j u^-1): df(X) = ([X, i], [X, j]) at u = 1
  Immersion im = construct_example("4.6");
  const Quat i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  const Quat X[3] = {i, j, -1.0 * k};
  for (int a = 0; a < 3; ++a) {
    Arr3<double> e{};
    e[a] = 1.0;
    Vector v = im.pushforward({0, 0, 0}, e);
    EXPECT_LT((v.u - (X[a] * i - i * X[a])).norm(), 1e-14) << a;
    EXPECT_LT((v.v - (X[a] * j - j * X[a])).norm(), 1e-14) << a;
  }
}

TEST(Jet, AnalyticAgreesWithFiniteDifferences) {
  Immersion im = construct_example("4.8");
  const ChartPoint x{0.3, -0.7, 1.1};
  const double h = 1e-4;
  Jet jt = im.jet(x, 3);
  for (int a = 0; a < 3; ++a) {
    EXPECT_LT(r8_dist(jt.d1[a], diff(im.eval(shift(x, a, h)), im.eval(shift(x, a, -h)), 2 * h)), 1e-7);
    for (int b = 0; b < 3; ++b) {
      Jet jp = im.jet(shift(x, b, h), 1), jm = im.jet(shift(x, b, -h), 1);
      R8<double> fd{(jp.d1[a].u - jm.d1[a].u) / (2 * h), (jp.d1[a].v - jm.d1[a].v) / (2 * h)};
      EXPECT_LT(r8_dist(jt.d2[a][b], fd), 1e-7);
      for (int c = 0; c < 3; ++c) {
        Jet kp = im.jet(shift(x, c, h), 2), km = im.jet(shift(x, c, -h), 2);
        R8<double> fd3{(kp.d2[a][b].u - km.d2[a][b].u) / (2 * h), (kp.d2[a][b].v - km.d2[a][b].v) / (2 * h)};
        EXPECT_LT(r8_dist(jt.d3[a][b][c], fd3), 1e-7);
      }
    }
  }
}

TEST(Jet, MixedPartialsSymmetric) {
  Immersion im = construct_example("4.6");
  Jet jt = im.jet({0.2, 0.4, -0.5}, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      EXPECT_LT(r8_dist(jt.d2[a][b], jt.d2[b][a]), 1e-14);
      for (int c = 0; c < 3; ++c) EXPECT_LT(r8_dist(jt.d3[a][b][c], jt.d3[c][a][b]), 1e-13);
    }
}

TEST(SampledGrid, JetsMatchAnalytic) {
  Immersion im = construct_example("4.6");
  SampledGrid g = im.sample({-0.08, -0.08, -0.08}, {0.02, 0.02, 0.02}, {9, 9, 9});
  Immersion sm = Immersion::sampled("grid", g);
  EXPECT_TRUE(sm.is_sampled());
  const ChartPoint x = g.node(4, 4, 4);
  Jet a = im.jet(x, 3), b = sm.jet(x, 3);
  EXPECT_LT((a.x.p - b.x.p).norm(), 1e-15);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(r8_dist(a.d1[i], b.d1[i]), 1e-6);
    for (int j = 0; j < 3; ++j) {
      EXPECT_LT(r8_dist(a.d2[i][j], b.d2[i][j]), 1e-5);
      for (int k = 0; k < 3; ++k) EXPECT_LT(r8_dist(a.d3[i][j][k], b.d3[i][j][k]), 1e-3);
    }
  }
}

TEST(SampledGrid, OffNodeRejected) {
  Immersion im = construct_example("4.1");
  SampledGrid g = im.sample({0, 0, 0}, {0.1, 0.1, 0.1}, {9, 9, 9});
  EXPECT_THROW(g.locate({0.05, 0.0, 0.0}), std::domain_error);
  EXPECT_THROW(g.locate({-0.1, 0.0, 0.0}), std::domain_error);
  EXPECT_NO_THROW(g.locate({0.3, 0.2, 0.8}));
}

TEST(Immersion, TransformedCommutesWithIsometry) {
  Sampler s(17);
  Isometry F = s.isometry();
  Immersion im = construct_example("4.7");
  Immersion tf = im.transformed(F);
  const ChartPoint x{0.4, 0.1, -0.9};
  Point a = tf.eval(x), b = F.apply(im.eval(x));
  EXPECT_LT((a.p - b.p).norm() + (a.q - b.q).norm(), 1e-14);
  Vector va = tf.pushforward(x, {1, 2, 3}), vb = F.push(im.pushforward(x, {1, 2, 3}));
  EXPECT_LT((va.u - vb.u).norm() + (va.v - vb.v).norm(), 1e-13);
}

TEST(FdWeights, CentralSecondDerivative) {
  auto w = fd_weights({-1.0, 0.0, 1.0}, 2);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_NEAR(w[0], 1.0, 1e-14);
  EXPECT_NEAR(w[1], -2.0, 1e-14);
  EXPECT_NEAR(w[2], 1.0, 1e-14);
}
