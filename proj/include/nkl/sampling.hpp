#pragma once

// Seeded random draws on S^3, S^3 x S^3 and its tangent spaces.

#include <cstdint>
#include <random>

#include "nkl/ambient.hpp"

namespace nkl {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double normal() { return gauss_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Quat quat() { return {normal(), normal(), normal(), normal()}; }

  Quat unit_quat() {
    for (;;) {
      Quat q = quat();
      double n = q.norm();
      if (n > 1e-3) return q / n;
    }
  }

  Quat unit_imaginary() {
    for (;;) {
      Quat q{0.0, normal(), normal(), normal()};
      double n = q.norm();
      if (n > 1e-3) return q / n;
    }
  }

  Point point() { return {unit_quat(), unit_quat()}; }

  Vector tangent(const Point& at) {
    Quat u = quat(), v = quat();
    return {at, u - dot(u, at.p) * at.p, v - dot(v, at.q) * at.q};
  }

  Isometry isometry() { return {unit_quat(), unit_quat(), unit_quat()}; }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace nkl
