#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nkl/dual.hpp"

using namespace nkl;

namespace {

template <class S>
S sample_fn(const S& x, const S& y, const S& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  return sin(x * y) * exp(z) + sqrt(1.0 + x * x + z * z) / (2.0 + cos(y)) - atan2(y, x + 3.0) * z;
}

double f3(const double* p) { return sample_fn(p[0], p[1], p[2]); }

// Central differences of order 4; used as the oracle for every derivative.
double fd_first(int a, const double* p, double h = 1e-3) {
  auto shifted = [&](double t) {
    double q[3] = {p[0], p[1], p[2]};
    q[a] += t;
    return f3(q);
  };
  return (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h);
}

double fd_second(int a, int b, const double* p, double h = 1e-3) {
  auto shifted = [&](double t) {
    double q[3] = {p[0], p[1], p[2]};
    q[b] += t;
    return fd_first(a, q, h);
  };
  return (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h);
}

}  // namespace

TEST(Dual, FirstDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    double p[3] = {U(rng), U(rng), U(rng)};
    for (int a = 0; a < 3; ++a) {
      Dual1 x = seed1(p[0], a == 0), y = seed1(p[1], a == 1), z = seed1(p[2], a == 2);
      Dual1 r = sample_fn(x, y, z);
      EXPECT_NEAR(r.v, f3(p), 1e-15);
      EXPECT_NEAR(r.d, fd_first(a, p), 1e-9);
    }
  }
}

TEST(Dual, MixedSecondDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int n = 0; n < 20; ++n) {
    double p[3] = {U(rng), U(rng), U(rng)};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Dual2 x = seed2(p[0], a == 0, b == 0);
        Dual2 y = seed2(p[1], a == 1, b == 1);
        Dual2 z = seed2(p[2], a == 2, b == 2);
        Dual2 r = sample_fn(x, y, z);
        EXPECT_NEAR(r.d.d, fd_second(a, b, p), 2e-6);
        EXPECT_NEAR(r.v.d, fd_first(a, p), 1e-9);
        EXPECT_NEAR(r.d.v, fd_first(b, p), 1e-9);
      }
  }
}

TEST(Dual, ThirdDerivativeOfPolynomialIsExact) {
  // f = x^2 y z^3 + x y; d^3 f / dx dy dz = 6 x z^2
  auto f = [](auto x, auto y, auto z) { return x * x * y * z * z * z + x * y; };
  double x0 = 0.7, y0 = -1.3, z0 = 0.4;
  Dual3 r = f(seed3(x0, 1, 0, 0), seed3(y0, 0, 1, 0), seed3(z0, 0, 0, 1));
  EXPECT_DOUBLE_EQ(r.d.d.d, 6 * x0 * z0 * z0);
  EXPECT_DOUBLE_EQ(r.v.v.v, f(x0, y0, z0));
  EXPECT_DOUBLE_EQ(r.v.v.d, 2 * x0 * y0 * z0 * z0 * z0 + y0);
}

TEST(Dual, ConstantsCarryNoDerivative) {
  Dual2 c(3.5);
  EXPECT_EQ(c.d.v, 0.0);
  EXPECT_EQ(c.v.d, 0.0);
  EXPECT_EQ(value_of(c), 3.5);
}
