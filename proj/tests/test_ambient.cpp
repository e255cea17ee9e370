#include <gtest/gtest.h>

#include <cmath>

#include "nkl/ambient.hpp"
#include "nkl/ambient_checks.hpp"
#include "nkl/sampling.hpp"
#include "oracles.hpp"

using namespace nkl;

namespace {

const double s3 = std::sqrt(3.0);

double dist(const Vector& a, const Vector& b) { return euclid_norm(a - b); }

Vector from_coeffs(const Point& x, const oracle::Vec6& c) {
  auto fb = frame_at(x);
  Vector r = Vector::zero(x);
  for (int i = 0; i < 3; ++i) r += c(i) * fb.E[i] + c(i + 3) * fb.F[i];
  return r;
}

oracle::Vec6 random6(Sampler& s) {
  oracle::Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = s.normal();
  return v;
}

const Point origin{Quat::one(), Quat::one()};

}  // namespace

TEST(Frame, ValuesAtIdentityAndGeneralPoint) {
  auto fb = frame_at(origin);
  EXPECT_EQ(fb.E[0].u, Quat::i());
  EXPECT_EQ(fb.E[0].v, Quat{});
  Sampler s(1);
  Point x = s.point();
  auto f = frame_at(x);
  EXPECT_LE(dist(f.F[2], Vector{x, Quat{}, -(x.q * Quat::k())}), 0.0);
  EXPECT_LE(dist(f.E[1], Vector{x, x.p * Quat::j(), Quat{}}), 0.0);
}

TEST(Frame, GramMatrix) {
  Sampler s(2);
  for (int n = 0; n < 20; ++n) {
    auto fb = frame_at(s.point());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double d = i == j ? 1.0 : 0.0;
        EXPECT_NEAR(metric_g(fb.E[i], fb.E[j]), 4.0 / 3.0 * d, 1e-14);
        EXPECT_NEAR(metric_g(fb.F[i], fb.F[j]), 4.0 / 3.0 * d, 1e-14);
        EXPECT_NEAR(metric_g(fb.E[i], fb.F[j]), -2.0 / 3.0 * d, 1e-14);
        EXPECT_NEAR(metric_euclid(fb.E[i], fb.E[j]), d, 1e-14);
      }
  }
}

TEST(Frame, CoefficientRoundTrip) {
  Sampler s(3);
  for (int n = 0; n < 50; ++n) {
    Point x = s.point();
    Vector z = s.tangent(x);
    EXPECT_LE(dist(from_frame_coeffs(x, frame_coeffs(z)), z), 1e-14);
  }
}

TEST(Structures, JAtIdentity) {
  Vector z{origin, Quat::i(), Quat{}};
  Vector jz = apply_J(z);
  EXPECT_LE((jz.u - (-1.0 / s3) * Quat::i()).norm(), 1e-15);
  EXPECT_LE((jz.v - (-2.0 / s3) * Quat::i()).norm(), 1e-15);
  Vector w{origin, Quat{}, Quat::i()};
  Vector jw = apply_J(w);
  EXPECT_LE((jw.u - (2.0 / s3) * Quat::i()).norm(), 1e-15);
  EXPECT_LE((jw.v - (1.0 / s3) * Quat::i()).norm(), 1e-15);
}

TEST(Structures, PAndQOnFrame) {
  Sampler s(4);
  Point x = s.point();
  auto fb = frame_at(x);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(dist(apply_P(fb.E[i]), fb.F[i]), 1e-15);
    EXPECT_LE(dist(apply_P(fb.F[i]), fb.E[i]), 1e-15);
    EXPECT_LE(dist(apply_Q(fb.E[i]), -fb.E[i]), 0.0);
  }
  Vector z = s.tangent(x);
  Vector pz = apply_P(z);
  EXPECT_LE((pz.u - x.p * qinv(x.q) * z.v).norm(), 1e-14);
  EXPECT_LE((pz.v - x.q * qinv(x.p) * z.u).norm(), 1e-14);
}

TEST(Structures, ResultsStayTangent) {
  Sampler s(5);
  for (int n = 0; n < 50; ++n) {
    Point x = s.point();
    Vector a = s.tangent(x), b = s.tangent(x), c = s.tangent(x);
    for (const Vector& v : {apply_J(a), apply_P(a), apply_Q(a), tensor_G(a, b), tensor_nablaP(a, b),
                            curvature_R(a, b, c)})
      EXPECT_TRUE(is_tangent(v, 1e-13));
  }
}

TEST(Structures, MismatchedBasePointsRejected) {
  Sampler s(6);
  Point x = s.point(), y = s.point();
  Vector a = s.tangent(x), b = s.tangent(y);
  EXPECT_THROW(metric_g(a, b), std::domain_error);
  EXPECT_THROW(metric_euclid(a, b), std::domain_error);
  EXPECT_THROW(tensor_G(a, b), std::domain_error);
}

TEST(Tensors, TableEntries) {
  Sampler s(7);
  Point x = s.point();
  auto fb = frame_at(x);
  const double c = 2.0 / (3.0 * s3);
  EXPECT_LE(dist(tensor_G(fb.E[0], fb.E[1]), -c * (fb.E[2] + 2.0 * fb.F[2])), 1e-14);
  EXPECT_LE(dist(tensor_G(fb.F[0], fb.F[1]), c * (2.0 * fb.E[2] + fb.F[2])), 1e-14);
  EXPECT_LE(dist(tensor_G(fb.E[1], fb.F[2]), -c * (fb.E[0] - fb.F[0])), 1e-14);
  EXPECT_LE(dist(tensor_nablaP(fb.E[0], fb.E[1]), (1.0 / 3.0) * (fb.E[2] + 2.0 * fb.F[2])), 1e-14);
  EXPECT_LE(dist(tensor_nablaP(fb.E[0], fb.F[1]), (-1.0 / 3.0) * (2.0 * fb.E[2] + fb.F[2])), 1e-14);
  EXPECT_LE(dist(tensor_nablaP(fb.F[0], fb.E[1]), (-1.0 / 3.0) * (fb.E[2] + 2.0 * fb.F[2])), 1e-14);
  EXPECT_LE(dist(tensor_nablaP(fb.F[0], fb.F[1]), (1.0 / 3.0) * (2.0 * fb.E[2] + fb.F[2])), 1e-14);
}

// G, nabla P and R against the Koszul formula built from the Lie bracket.
TEST(Tensors, AgreeWithLieAlgebraOracle) {
  oracle::LieAlgebraModel m;
  Sampler s(8);
  for (int n = 0; n < 100; ++n) {
    Point x = s.point();
    auto cx = random6(s), cy = random6(s), cz = random6(s);
    Vector X = from_coeffs(x, cx), Y = from_coeffs(x, cy), Z = from_coeffs(x, cz);
    EXPECT_LE(dist(tensor_G(X, Y), from_coeffs(x, m.G(cx, cy))), 1e-12);
    EXPECT_LE(dist(tensor_nablaP(X, Y), from_coeffs(x, m.nablaP(cx, cy))), 1e-12);
    EXPECT_LE(dist(curvature_R(X, Y, Z), from_coeffs(x, m.R(cx, cy, cz))), 1e-11);
    EXPECT_NEAR(metric_g(X, Y), m.g(cx, cy), 1e-12);
    EXPECT_LE(dist(apply_J(X), from_coeffs(x, m.J * cx)), 1e-13);
  }
}

// The connection conversion applied to left-invariant fields must reproduce
// the Koszul connection.
TEST(Connection, ConversionMatchesKoszul) {
  oracle::LieAlgebraModel m;
  Sampler s(9);
  for (int n = 0; n < 20; ++n) {
    Point x = s.point();
    auto fb = frame_at(x);
    std::array<Vector, 6> basis = {fb.E[0], fb.E[1], fb.E[2], fb.F[0], fb.F[1], fb.F[2]};
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        // D_{X_a} X_b for left-invariant fields (p e, 0), (0, q e)
        R8<double> flat{};
        if (a < 3 && b < 3) flat.u = x.p * detail::frame_unit<double>(a) * detail::frame_unit<double>(b);
        if (a >= 3 && b >= 3) flat.v = x.q * detail::frame_unit<double>(a - 3) * detail::frame_unit<double>(b - 3);
        Vector got = nk_derivative(flat, basis[a], basis[b]);
        EXPECT_LE(dist(got, from_coeffs(x, m.nabla[a][b])), 1e-13) << a << ' ' << b;
      }
  }
}

TEST(Connection, NonTangentInputRejected) {
  Vector bad{origin, Quat::one(), Quat{}};
  Vector ok{origin, Quat::i(), Quat{}};
  EXPECT_THROW(euclid_to_product(R8<double>{}, bad, ok), std::domain_error);
  EXPECT_THROW(product_to_nk(ok, ok, bad), std::domain_error);
}

TEST(Connection, FiniteDifferenceMetricCompatibility) {
  // X g(Y,Z) by central differences along the curve, compared with the
  // converted covariant derivatives.
  Sampler s(10);
  for (int n = 0; n < 20; ++n) {
    Point x = s.point();
    Quat a = s.unit_imaginary(), b = s.unit_imaginary();
    detail::FrameCurve c{x, a, b};
    Quat y[4], dy[4];
    for (int k = 0; k < 4; ++k) y[k] = s.unit_imaginary(), dy[k] = s.unit_imaginary();
    auto gyz = [&](double t) {
      Dual1 td(t, 0.0);
      auto pt = c.point(td);
      return value_of(metric_g(detail::field_on(pt, td, y[0], y[1], dy[0], dy[1]),
                               detail::field_on(pt, td, y[2], y[3], dy[2], dy[3])));
    };
    const double h = 1e-4;
    double fd = (gyz(h) - gyz(-h)) / (2 * h);
    Dual1 t = seed1(0.0, 1.0);
    auto pt = c.point(t);
    auto Yt = detail::field_on(pt, t, y[0], y[1], dy[0], dy[1]);
    auto Zt = detail::field_on(pt, t, y[2], y[3], dy[2], dy[3]);
    Vector X = c.velocity(), Y = value_of(Yt), Z = value_of(Zt);
    double rhs = metric_g(nk_derivative(detail::flat_derivative(Yt), X, Y), Z) +
                 metric_g(Y, nk_derivative(detail::flat_derivative(Zt), X, Z));
    EXPECT_NEAR(fd, rhs, 1e-6);
  }
}

TEST(Curvature, FiniteDifferenceRiemannOracle) {
  Sampler s(11);
  for (int n = 0; n < 2; ++n) {
    Point x0 = s.point();
    oracle::FdRiemann<6> fr;
    fr.h = 1e-4;
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
    EXPECT_LE(worst / scale, 1e-5);
  }
}

TEST(Isometry, ActionOnPoints) {
  Sampler s(12);
  Isometry F = s.isometry();
  Point x = s.point();
  Point y = F.apply(x);
  EXPECT_TRUE(is_unit(y.p) && is_unit(y.q));
  EXPECT_LE((y.p - F.a * x.p * qinv(F.c)).norm(), 1e-15);
}

TEST(AmbientSuite, AllIdentitiesPass) {
  AmbientSuiteConfig cfg;
  cfg.seed = 7;
  auto reports = verify_ambient(cfg);
  EXPECT_GE(reports.size(), 12u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << r.id << " residual " << r.max_residual;
    EXPECT_GT(r.n_samples, 0) << r.id;
  }
}

TEST(AmbientSuite, DeterministicUnderSeed) {
  AmbientSuiteConfig cfg;
  cfg.seed = 3;
  cfg.n_samples = 20;
  cfg.n_jet_samples = 6;
  auto a = verify_ambient(cfg), b = verify_ambient(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].max_residual, b[i].max_residual);
}
