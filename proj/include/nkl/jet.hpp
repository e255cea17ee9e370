#pragma once

// Immersions R^3 -> S^3 x S^3 and their jets up to third order, either exact
// (nested dual numbers on a closed form) or by finite differences on a
// regular sample grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkl/ambient.hpp"

namespace nkl {

using ChartPoint = std::array<double, 3>;

template <class T>
using Arr3 = std::array<T, 3>;

/// Raw partial derivatives of x -> (p(x), q(x)) in R^8.
struct Jet {
  Point x;
  int order = 0;
  Arr3<R8<double>> d1{};
  Arr3<Arr3<R8<double>>> d2{};
  Arr3<Arr3<Arr3<R8<double>>>> d3{};
};

/// Second-order jet with scalar S; with S = Dual1 the dual parts carry one
/// more derivative along a fixed chart direction.
template <Scalar S>
struct Jet2 {
  AmbientPoint<S> x;
  Arr3<R8<S>> d1{};
  Arr3<Arr3<R8<S>>> d2{};
};

inline Jet2<double> truncate(const Jet& j) {
  Jet2<double> r;
  r.x = j.x;
  r.d1 = j.d1;
  r.d2 = j.d2;
  return r;
}

namespace detail {

inline Quaternion<Dual1> pair(const Quat& v, const Quat& d) {
  return {Dual1{v.w, d.w}, Dual1{v.x, d.x}, Dual1{v.y, d.y}, Dual1{v.z, d.z}};
}

inline R8<Dual1> pair(const R8<double>& v, const R8<double>& d) { return {pair(v.u, d.u), pair(v.v, d.v)}; }

}  // namespace detail

/// The second-order jet differentiated once more along chart direction v.
inline Jet2<Dual1> jet_along(const Jet& j, const Arr3<double>& v) {
  if (j.order < 3) throw std::logic_error("jet_along needs a third-order jet");
  Jet2<Dual1> r;
  R8<double> dx{};
  for (int c = 0; c < 3; ++c) dx = dx + v[c] * j.d1[c];
  r.x = {detail::pair(j.x.p, dx.u), detail::pair(j.x.q, dx.v)};
  for (int a = 0; a < 3; ++a) {
    R8<double> da{};
    for (int c = 0; c < 3; ++c) da = da + v[c] * j.d2[a][c];
    r.d1[a] = detail::pair(j.d1[a], da);
    for (int b = 0; b < 3; ++b) {
      R8<double> dab{};
      for (int c = 0; c < 3; ++c) dab = dab + v[c] * j.d3[a][b][c];
      r.d2[a][b] = detail::pair(j.d2[a][b], dab);
    }
  }
  return r;
}

/// Finite-difference weights for the m-th derivative at 0 on the given
/// offsets (Fornberg's recursion).
inline std::vector<double> fd_weights(const std::vector<double>& offsets, int m) {
  const int n = static_cast<int>(offsets.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = offsets[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = offsets[i];
    for (int j = 0; j < i; ++j) {
      double c3 = offsets[i] - offsets[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

/// Immersion values on a dense regular grid.
struct SampledGrid {
  Arr3<double> origin{};
  Arr3<double> step{1.0, 1.0, 1.0};
  Arr3<int> counts{1, 1, 1};
  std::vector<Point> values;  // lexicographic, last index fastest

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * counts[1] + j) * counts[2] + k;
  }
  const Point& at(int i, int j, int k) const { return values[index(i, j, k)]; }
  ChartPoint node(int i, int j, int k) const {
    return {origin[0] + i * step[0], origin[1] + j * step[1], origin[2] + k * step[2]};
  }
  std::size_t size() const { return static_cast<std::size_t>(counts[0]) * counts[1] * counts[2]; }

  /// Grid index of a chart point that sits on a node; throws otherwise.
  Arr3<int> locate(const ChartPoint& x) const {
    Arr3<int> idx;
    for (int a = 0; a < 3; ++a) {
      double t = (x[a] - origin[a]) / step[a];
      long r = std::lround(t);
      if (std::abs(t - r) > 1e-6 || r < 0 || r >= counts[a])
        throw std::domain_error("chart point is not a node of the sample grid");
      idx[a] = static_cast<int>(r);
    }
    return idx;
  }

  void validate() const {
    for (int a = 0; a < 3; ++a) {
      if (counts[a] < 1) throw std::invalid_argument("grid counts must be >= 1");
      if (!(step[a] > 0.0)) throw std::invalid_argument("grid steps must be positive");
    }
    if (values.size() != size()) throw std::invalid_argument("sample grid is incomplete");
    for (const auto& v : values)
      if (!is_unit(v.p, 1e-9) || !is_unit(v.q, 1e-9))
        throw std::invalid_argument("sample is not on S^3 x S^3 (unit-norm tolerance 1e-9)");
  }
};

namespace detail {

// Stencil for derivative order m at index i of n nodes: central of order 4
// where it fits, otherwise a one-sided window of order 3.
inline std::pair<int, std::vector<double>> stencil(int i, int n, int m) {
  if (m == 0) return {i, {1.0}};
  int half = (m + 1) / 2 + 1;  // m=1,2 -> 2; m=3 -> 3
  int len;
  int start;
  if (i - half >= 0 && i + half < n) {
    len = 2 * half + 1;
    start = i - half;
  } else {
    len = m + 3;
    if (len > n) throw std::domain_error("sample grid too small for finite-difference jets");
    start = std::clamp(i - len / 2, 0, n - len);
  }
  std::vector<double> off(len);
  for (int k = 0; k < len; ++k) off[k] = start + k - i;
  return {start, fd_weights(off, m)};
}

}  // namespace detail

/// Chart map R^3 -> S^3 x S^3 with jets up to order three.
class Immersion {
 public:
  using Eval0 = std::function<Point(const Arr3<double>&)>;
  using Eval1 = std::function<AmbientPoint<Dual1>(const Arr3<Dual1>&)>;
  using Eval3 = std::function<AmbientPoint<Dual3>(const Arr3<Dual3>&)>;

  Immersion() = default;

  template <class F>
  static Immersion analytic(std::string label, F f) {
    Immersion m;
    m.label_ = std::move(label);
    m.e0_ = [f](const Arr3<double>& x) { return f(x); };
    m.e1_ = [f](const Arr3<Dual1>& x) { return f(x); };
    m.e3_ = [f](const Arr3<Dual3>& x) { return f(x); };
    return m;
  }

  static Immersion sampled(std::string label, SampledGrid grid) {
    grid.validate();
    Immersion m;
    m.label_ = std::move(label);
    m.grid_ = std::make_shared<const SampledGrid>(std::move(grid));
    return m;
  }

  const std::string& label() const { return label_; }
  bool is_sampled() const { return grid_ != nullptr; }
  const SampledGrid* grid() const { return grid_.get(); }

  Point eval(const ChartPoint& x) const {
    if (grid_) {
      auto idx = grid_->locate(x);
      return grid_->at(idx[0], idx[1], idx[2]);
    }
    return e0_(x);
  }

  /// Differential applied to chart direction v (raw R^8 vector).
  Vector pushforward(const ChartPoint& x, const Arr3<double>& v) const {
    Jet j = jet(x, 1);
    R8<double> w{};
    for (int a = 0; a < 3; ++a) w = w + v[a] * j.d1[a];
    return {j.x, w.u, w.v};
  }

  Jet jet(const ChartPoint& x, int order = 3) const {
    if (order < 0 || order > 3) throw std::invalid_argument("jet order must be 0..3");
    return grid_ ? grid_jet(x, order) : analytic_jet(x, order);
  }

  /// Post-composition with an ambient isometry.
  Immersion transformed(const Isometry& F, std::string label = {}) const {
    Immersion m;
    m.label_ = label.empty() ? label_ : std::move(label);
    if (grid_) {
      SampledGrid g = *grid_;
      for (auto& v : g.values) v = F.apply(v);
      m.grid_ = std::make_shared<const SampledGrid>(std::move(g));
      return m;
    }
    auto e0 = e0_;
    auto e1 = e1_;
    auto e3 = e3_;
    m.e0_ = [e0, F](const Arr3<double>& x) { return F.apply(e0(x)); };
    m.e1_ = [e1, F](const Arr3<Dual1>& x) { return F.apply(e1(x)); };
    m.e3_ = [e3, F](const Arr3<Dual3>& x) { return F.apply(e3(x)); };
    return m;
  }

  /// Sample the immersion on a regular grid.
  SampledGrid sample(const Arr3<double>& origin, const Arr3<double>& step, const Arr3<int>& counts) const {
    SampledGrid g;
    g.origin = origin;
    g.step = step;
    g.counts = counts;
    g.values.reserve(g.size());
    for (int i = 0; i < counts[0]; ++i)
      for (int j = 0; j < counts[1]; ++j)
        for (int k = 0; k < counts[2]; ++k) g.values.push_back(eval(g.node(i, j, k)));
    return g;
  }

 private:
  static R8<double> raw_part(const AmbientPoint<Dual1>& y) {
    auto d = [](const Quaternion<Dual1>& q) { return Quat{q.w.d, q.x.d, q.y.d, q.z.d}; };
    return {d(y.p), d(y.q)};
  }

  Jet analytic_jet(const ChartPoint& x, int order) const {
    Jet j;
    j.order = order;
    if (order <= 1) {
      j.x = e0_(x);
      if (order == 1)
        for (int a = 0; a < 3; ++a) {
          Arr3<Dual1> xs;
          for (int c = 0; c < 3; ++c) xs[c] = seed1(x[c], c == a);
          j.d1[a] = raw_part(e1_(xs));
        }
      return j;
    }
    // Each ordered triple a <= b <= c gives f, its first partials along a,
    // b, c, the three mixed second partials and the third partial.
    using Q3 = Quaternion<Dual3>;
    auto comp = [](const Q3& q, auto pick) { return Quat{pick(q.w), pick(q.x), pick(q.y), pick(q.z)}; };
    auto r8 = [&](const AmbientPoint<Dual3>& y, auto pick) { return R8<double>{comp(y.p, pick), comp(y.q, pick)}; };
    bool have_value = false;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b)
        for (int c = b; c < 3; ++c) {
          if (order == 2 && c != b) continue;  // second order needs only (a, b, b)
          Arr3<Dual3> xs;
          for (int k = 0; k < 3; ++k) xs[k] = seed3(x[k], k == a, k == b, k == c);
          AmbientPoint<Dual3> y = e3_(xs);
          if (!have_value) {
            j.x = {comp(y.p, [](const Dual3& s) { return s.v.v.v; }),
                   comp(y.q, [](const Dual3& s) { return s.v.v.v; })};
            have_value = true;
          }
          j.d1[a] = r8(y, [](const Dual3& s) { return s.v.v.d; });
          j.d1[b] = r8(y, [](const Dual3& s) { return s.v.d.v; });
          j.d1[c] = r8(y, [](const Dual3& s) { return s.d.v.v; });
          auto ab = r8(y, [](const Dual3& s) { return s.v.d.d; });
          auto ac = r8(y, [](const Dual3& s) { return s.d.v.d; });
          auto bc = r8(y, [](const Dual3& s) { return s.d.d.v; });
          j.d2[a][b] = j.d2[b][a] = ab;
          j.d2[a][c] = j.d2[c][a] = ac;
          j.d2[b][c] = j.d2[c][b] = bc;
          if (order == 3) {
            auto abc = r8(y, [](const Dual3& s) { return s.d.d.d; });
            int idx[3] = {a, b, c};
            std::sort(idx, idx + 3);
            do {
              j.d3[idx[0]][idx[1]][idx[2]] = abc;
            } while (std::next_permutation(idx, idx + 3));
          }
        }
    return j;
  }

  Jet grid_jet(const ChartPoint& x, int order) const {
    const SampledGrid& g = *grid_;
    auto idx = g.locate(x);
    Jet j;
    j.order = order;
    j.x = g.at(idx[0], idx[1], idx[2]);
    // Tensor-product stencil for the multi-index (m0, m1, m2).
    auto partial = [&](int m0, int m1, int m2) {
      auto s0 = detail::stencil(idx[0], g.counts[0], m0);
      auto s1 = detail::stencil(idx[1], g.counts[1], m1);
      auto s2 = detail::stencil(idx[2], g.counts[2], m2);
      double scale = std::pow(g.step[0], m0) * std::pow(g.step[1], m1) * std::pow(g.step[2], m2);
      R8<double> acc{};
      for (std::size_t a = 0; a < s0.second.size(); ++a)
        for (std::size_t b = 0; b < s1.second.size(); ++b)
          for (std::size_t c = 0; c < s2.second.size(); ++c) {
            double w = s0.second[a] * s1.second[b] * s2.second[c];
            if (w == 0.0) continue;
            const Point& v = g.at(s0.first + int(a), s1.first + int(b), s2.first + int(c));
            acc = acc + w * R8<double>{v.p, v.q};
          }
      return (1.0 / scale) * acc;
    };
    auto multi = [](std::initializer_list<int> dirs) {
      Arr3<int> m{0, 0, 0};
      for (int d : dirs) ++m[d];
      return m;
    };
    auto eval_multi = [&](Arr3<int> m) { return partial(m[0], m[1], m[2]); };
    if (order >= 1)
      for (int a = 0; a < 3; ++a) j.d1[a] = eval_multi(multi({a}));
    if (order >= 2)
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) j.d2[a][b] = j.d2[b][a] = eval_multi(multi({a, b}));
    if (order >= 3)
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b)
          for (int c = b; c < 3; ++c) {
            auto v = eval_multi(multi({a, b, c}));
            int id[3] = {a, b, c};
            do {
              j.d3[id[0]][id[1]][id[2]] = v;
            } while (std::next_permutation(id, id + 3));
          }
    return j;
  }

  std::string label_;
  Eval0 e0_;
  Eval1 e1_;
  Eval3 e3_;
  std::shared_ptr<const SampledGrid> grid_;
};

}  // namespace nkl
