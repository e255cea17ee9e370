#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

#include "nkl/quaternion.hpp"
#include "nkl/sampling.hpp"

using namespace nkl;

namespace {

Eigen::Quaterniond to_eigen(const Quat& q) { return {q.w, q.x, q.y, q.z}; }

double dist(const Quat& a, const Quat& b) { return (a - b).norm(); }

}  // namespace

TEST(Quaternion, UnitRelations) {
  Quat i = Quat::i(), j = Quat::j(), k = Quat::k(), one = Quat::one();
  EXPECT_EQ(i * j, k);
  EXPECT_EQ(j * k, i);
  EXPECT_EQ(k * i, j);
  EXPECT_EQ(i * i, -one);
  EXPECT_EQ(i * j * k, -one);
  EXPECT_EQ(j * i, -k);
}

TEST(Quaternion, ProductAgreesWithEigen) {
  Sampler s(3);
  for (int n = 0; n < 200; ++n) {
    Quat a = s.quat(), b = s.quat();
    Eigen::Quaterniond e = to_eigen(a) * to_eigen(b);
    Quat c = a * b;
    EXPECT_NEAR(c.w, e.w(), 1e-13);
    EXPECT_NEAR(c.x, e.x(), 1e-13);
    EXPECT_NEAR(c.y, e.y(), 1e-13);
    EXPECT_NEAR(c.z, e.z(), 1e-13);
  }
}

TEST(Quaternion, AlgebraProperties) {
  Sampler s(4);
  for (int n = 0; n < 200; ++n) {
    Quat a = s.quat(), b = s.quat(), c = s.quat();
    EXPECT_LE(dist((a * b) * c, a * (b * c)), 1e-12);
    EXPECT_NEAR((a * b).norm(), a.norm() * b.norm(), 1e-12);
    EXPECT_LE(dist((a * b).conj(), b.conj() * a.conj()), 1e-13);
    EXPECT_LE(dist(a * qinv(a), Quat::one()), 1e-13);
    Quat u = s.unit_quat();
    EXPECT_LE(dist(qinv(u), u.conj()), 1e-15);
  }
}

TEST(Quaternion, InverseOfZeroThrows) { EXPECT_THROW(qinv(Quat{}), std::domain_error); }

TEST(Quaternion, HalfCommutatorIsCrossProduct) {
  Sampler s(5);
  for (int n = 0; n < 100; ++n) {
    ImQuat a(s.unit_imaginary()), b(s.unit_imaginary());
    Quat ab = a.quat() * b.quat(), ba = b.quat() * a.quat();
    Quat half = 0.5 * (ab - ba);
    Eigen::Vector3d cr = Eigen::Vector3d(a.x, a.y, a.z).cross(Eigen::Vector3d(b.x, b.y, b.z));
    ImQuat h = im_half_commutator(a, b);
    EXPECT_NEAR(h.x, cr.x(), 1e-14);
    EXPECT_NEAR(h.y, cr.y(), 1e-14);
    EXPECT_NEAR(h.z, cr.z(), 1e-14);
    EXPECT_LE(dist(half, h.quat()), 1e-14);
  }
}

TEST(Quaternion, ExpOfImaginary) {
  const double pi = std::numbers::pi;
  EXPECT_LE(dist(exp_im(ImQuat{pi / 2, 0, 0}), Quat::i()), 1e-15);
  EXPECT_LE(dist(exp_im(ImQuat{0, 0, 0}), Quat::one()), 0.0);
  Sampler s(6);
  for (int n = 0; n < 100; ++n) {
    Quat dir = s.unit_imaginary();
    double t = s.uniform(-4.0, 4.0);
    Quat expect = std::cos(t) * Quat::one() + std::sin(t) * dir;
    EXPECT_LE(dist(exp_im(ImQuat(t * dir)), expect), 1e-14);
    // small-argument branch
    double small = s.uniform(-0.09, 0.09);
    Quat es = std::cos(small) * Quat::one() + std::sin(small) * dir;
    EXPECT_LE(dist(exp_im(ImQuat(small * dir)), es), 1e-15);
  }
}

TEST(Quaternion, ExpDerivativeIsRightTranslatedDirection) {
  // d/dt exp(t v)|_t = exp(t v) v
  Sampler s(7);
  for (int n = 0; n < 50; ++n) {
    Quat v = s.quat().imag();
    double t = s.uniform(-1.0, 1.0);
    ImQuaternion<Dual1> vd(Quaternion<Dual1>{0.0, seed1(t * v.x, v.x), seed1(t * v.y, v.y), seed1(t * v.z, v.z)});
    auto e = exp_im(vd);
    Quat expect = exp_im(ImQuat(t * v)) * v;
    Quat got{e.w.d, e.x.d, e.y.d, e.z.d};
    EXPECT_LE(dist(got, expect), 1e-13);
  }
  // through the series branch at zero
  auto e0 = exp_im(ImQuaternion<Dual1>(Quaternion<Dual1>{0.0, seed1(0, 1), seed1(0, 0), seed1(0, 0)}));
  EXPECT_NEAR(e0.x.d, 1.0, 1e-15);
  EXPECT_NEAR(e0.w.d, 0.0, 1e-15);
}

TEST(Quaternion, UnitNormPolicy) {
  Quat q{0.5, 0.5, 0.5, 0.5};
  EXPECT_EQ(to_unit(q), q);
  Quat slightly = (1.0 + 1e-10) * q;
  EXPECT_NEAR(to_unit(slightly).norm(), 1.0, 1e-15);
  EXPECT_THROW(to_unit(1.01 * q), std::domain_error);
  EXPECT_TRUE(is_unit(q));
  EXPECT_FALSE(is_unit(1.001 * q));
  EXPECT_TRUE(is_imaginary(Quat::k()));
}
