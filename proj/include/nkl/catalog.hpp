#pragma once

// Closed-form Lagrangian immersions into S^3 x S^3 and their expected
// invariants.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkl/jet.hpp"

namespace nkl {

struct UnknownExample : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parameters of the example families. Defaults are the normalized
/// representatives.
struct ExampleParams {
  Quat a{0.0, 1.0, 0.0, 0.0};  // unit imaginary
  Quat b{0.0, 1.0, 0.0, 0.0};  // unit imaginary (4.6 uses b = j by default)
  Quat center{1.0, 0.0, 0.0, 0.0};  // u0 of the sphere chart
  std::optional<Isometry> isometry;  // applied after the closed form
};

/// Expected invariants of an example.
struct ExpectedRecord {
  std::string name;
  std::array<double, 3> angles{};  // 2 theta_i, ascending in [0, 2 pi)
  bool totally_geodesic = false;
  std::optional<double> h123;      // |h_12^3|
  std::optional<double> K;         // constant sectional curvature, if any
  std::optional<double> tau, kappa;  // Berger parameters
  std::string description;
};

namespace detail {

// u0 exp(t1 i + t2 j - t3 k): X_1, X_2, X_3 at u0 are the chart directions.
template <Scalar S>
Quaternion<S> sphere_chart(const Quat& u0, const Arr3<S>& t) {
  return lift<S>(u0) * exp_im(ImQuaternion<S>(t[0], t[1], S(-1.0) * t[2]));
}

template <Scalar S>
Quaternion<S> conj_by(const Quaternion<S>& u, const Quat& c) {
  return u * lift<S>(c) * qinv(u);
}

inline void require_unit_imaginary(const Quat& q, const char* what) {
  if (!is_unit(q, 1e-12) || !is_imaginary(q, 1e-12))
    throw std::invalid_argument(std::string(what) + " must be a unit imaginary quaternion");
}

}  // namespace detail

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"4.1", "4.2", "4.3", "4.4", "4.5", "4.6", "4.7", "4.8", "4.8-proof"};
  return names;
}

inline Immersion construct_example(const std::string& name, const ExampleParams& prm = {}) {
  using detail::conj_by;
  using detail::sphere_chart;
  if (!is_unit(prm.center, 1e-12)) throw std::invalid_argument("chart center must be a unit quaternion");
  const Quat u0 = prm.center;
  const Quat one{1.0, 0.0, 0.0, 0.0};
  Immersion imm;
  if (name == "4.1") {
    imm = Immersion::analytic(name, [u0, one]<class S>(const Arr3<S>& t) {
      return AmbientPoint<S>{sphere_chart(u0, t), lift<S>(one)};
    });
  } else if (name == "4.2") {
    imm = Immersion::analytic(name, [u0, one]<class S>(const Arr3<S>& t) {
      return AmbientPoint<S>{lift<S>(one), sphere_chart(u0, t)};
    });
  } else if (name == "4.3") {
    imm = Immersion::analytic(name, [u0]<class S>(const Arr3<S>& t) {
      auto u = sphere_chart(u0, t);
      return AmbientPoint<S>{u, u};
    });
  } else if (name == "4.4") {
    detail::require_unit_imaginary(prm.b, "b");
    Quat b = prm.b;
    imm = Immersion::analytic(name, [u0, b]<class S>(const Arr3<S>& t) {
      auto u = sphere_chart(u0, t);
      return AmbientPoint<S>{u, u * lift<S>(b)};
    });
  } else if (name == "4.5") {
    detail::require_unit_imaginary(prm.b, "b");
    Quat b = prm.b;
    imm = Immersion::analytic(name, [u0, b]<class S>(const Arr3<S>& t) {
      auto u = sphere_chart(u0, t);
      return AmbientPoint<S>{qinv(u), conj_by(u, b)};
    });
  } else if (name == "4.7") {
    detail::require_unit_imaginary(prm.b, "b");
    Quat b = prm.b;
    imm = Immersion::analytic(name, [u0, b]<class S>(const Arr3<S>& t) {
      auto u = sphere_chart(u0, t);
      return AmbientPoint<S>{conj_by(u, b), qinv(u)};
    });
  } else if (name == "4.6") {
    Quat a = prm.a, b = prm.b;
    ExampleParams def;
    if (b == def.b && a == def.a) b = Quat{0.0, 0.0, 1.0, 0.0};
    detail::require_unit_imaginary(a, "a");
    detail::require_unit_imaginary(b, "b");
    if (std::abs(dot(a, b)) > 1e-12) throw std::invalid_argument("a and b must be orthogonal");
    imm = Immersion::analytic(name, [u0, a, b]<class S>(const Arr3<S>& t) {
      auto u = sphere_chart(u0, t);
      return AmbientPoint<S>{conj_by(u, a), conj_by(u, b)};
    });
  } else if (name == "4.8" || name == "4.8-proof") {
    const bool proof = name == "4.8-proof";
    imm = Immersion::analytic(name, [proof]<class S>(const Arr3<S>& x) {
      using std::cos;
      using std::sin;
      const double h = kSqrt3 / 2.0;
      S u = h * x[0], v = h * x[1], w = h * x[2];
      S cu = cos(u), su = sin(u), cv = cos(v), sv = sin(v), cw = cos(w), sw = sin(w);
      Quaternion<S> p{cu * cw, cu * sw, su * cw, su * sw};
      if (proof) {
        // q0(u, v) = (cos u cos v, cos u sin v, sin u cos v, sin u sin v), rotated by d
        Quaternion<S> q0{cu * cv, cu * sv, su * cv, su * sv};
        const double r = 1.0 / std::numbers::sqrt2;
        return AmbientPoint<S>{p, q0 * lift<S>(Quat{r, 0.0, -r, 0.0})};
      }
      const double r = 1.0 / std::numbers::sqrt2;
      Quaternion<S> q{r * cv * (su + cu), r * sv * (su + cu), r * cv * (su - cu), r * sv * (su - cu)};
      return AmbientPoint<S>{p, q};
    });
  } else {
    throw UnknownExample("unknown example '" + name + "'");
  }
  if (prm.isometry) imm = imm.transformed(*prm.isometry);
  return imm;
}

inline ExpectedRecord expected_properties(const std::string& name) {
  constexpr double pi = std::numbers::pi;
  ExpectedRecord r;
  r.name = name;
  const double tau_berger = 1.0 / (2.0 * std::sqrt(3.0));
  if (name == "4.1") {
    r.angles = {4 * pi / 3, 4 * pi / 3, 4 * pi / 3};
    r.totally_geodesic = true;
    r.h123 = 0.0;
    r.K = 0.75;
    r.description = "first factor, round sphere";
  } else if (name == "4.2") {
    r.angles = {2 * pi / 3, 2 * pi / 3, 2 * pi / 3};
    r.totally_geodesic = true;
    r.h123 = 0.0;
    r.K = 0.75;
    r.description = "second factor, round sphere";
  } else if (name == "4.3") {
    r.angles = {0.0, 0.0, 0.0};
    r.totally_geodesic = true;
    r.h123 = 0.0;
    r.K = 0.75;
    r.description = "diagonal, round sphere";
  } else if (name == "4.4") {
    r.angles = {0.0, pi, pi};
    r.totally_geodesic = true;
    r.h123 = 0.0;
    r.tau = tau_berger;
    r.kappa = 1.0;
    r.description = "(u, u b), Berger sphere";
  } else if (name == "4.5") {
    r.angles = {pi / 3, pi / 3, 4 * pi / 3};
    r.totally_geodesic = true;
    r.h123 = 0.0;
    r.tau = tau_berger;
    r.kappa = 1.0;
    r.description = "(u^-1, u b u^-1), Berger sphere";
  } else if (name == "4.7") {
    r.angles = {2 * pi / 3, 5 * pi / 3, 5 * pi / 3};
    r.totally_geodesic = true;
    r.h123 = 0.0;
    r.tau = tau_berger;
    r.kappa = 1.0;
    r.description = "(u b u^-1, u^-1), Berger sphere";
  } else if (name == "4.6") {
    r.angles = {0.0, 2 * pi / 3, 4 * pi / 3};
    r.h123 = 0.25;
    r.K = 3.0 / 16.0;
    r.tau = std::sqrt(3.0) / 4.0;
    r.kappa = 0.75;
    r.description = "(u a u^-1, u b u^-1), round sphere of curvature 3/16";
  } else if (name == "4.8" || name == "4.8-proof") {
    r.angles = {0.0, 2 * pi / 3, 4 * pi / 3};
    r.h123 = 0.5;
    r.K = 0.0;
    r.description = "flat Lagrangian torus";
  } else {
    throw UnknownExample("unknown example '" + name + "'");
  }
  return r;
}

}  // namespace nkl
