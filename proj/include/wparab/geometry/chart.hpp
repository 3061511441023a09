#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "wparab/expr/dual.hpp"
#include "wparab/expr/expr.hpp"
#include "wparab/linalg.hpp"

namespace wparab {

// Position, first and second parameter derivatives of a chart X: U -> coordinates.
struct ChartJet {
  Vec x;
  Mat J;  // m x n, J(:, i) = d_i X
  std::array<std::array<Vec, kMaxDim>, kMaxDim> H;  // H[i][j] = d_i d_j X

  int n() const { return static_cast<int>(J.cols()); }
  int m() const { return static_cast<int>(J.rows()); }
};

class Chart {
 public:
  using Evaluator = std::function<ChartJet(const Vec&)>;
  enum class Tier { closed_form, dual, finite_difference };

  Chart() = default;
  Chart(int n, int m, Evaluator eval, Tier tier) : n_(n), m_(m), eval_(std::move(eval)), tier_(tier) {}

  int n() const { return n_; }
  int m() const { return m_; }
  Tier tier() const { return tier_; }
  ChartJet jet(const Vec& u) const { return eval_(u); }
  Vec position(const Vec& u) const { return eval_(u).x; }

 private:
  int n_ = 0, m_ = 0;
  Evaluator eval_;
  Tier tier_ = Tier::dual;
};

// Chart from a generic callable f(const T* u, T* x), differentiated exactly
// with nested duals.
template <class F>
Chart dual_chart(int n, int m, F f) {
  auto eval = [n, m, f](const Vec& u) {
    ChartJet j;
    j.x = Vec::Zero(m);
    j.J = Mat::Zero(m, n);
    D2 in[kMaxDim], out[kMaxDim];
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        for (int k = 0; k < n; ++k) in[k] = seed2(u(k), k == a ? 1.0 : 0.0, k == b ? 1.0 : 0.0);
        f(static_cast<const D2*>(in), static_cast<D2*>(out));
        Vec h(m);
        for (int k = 0; k < m; ++k) {
          j.x(k) = out[k].v.v;
          j.J(k, a) = out[k].d.v;
          j.J(k, b) = out[k].v.d;
          h(k) = out[k].d.d;
        }
        j.H[a][b] = h;
        j.H[b][a] = h;
      }
    return j;
  };
  return Chart(n, m, eval, Chart::Tier::dual);
}

// Chart whose coordinates are expressions in u1..un.
inline Chart expression_chart(const std::vector<Expression>& coords) {
  if (coords.empty()) throw InvalidArgument("chart needs at least one coordinate");
  int n = static_cast<int>(coords.front().arity());
  int m = static_cast<int>(coords.size());
  return dual_chart(n, m, [coords, n, m](const auto* u, auto* x) {
    using T = std::remove_cvref_t<decltype(*u)>;
    for (int k = 0; k < m; ++k) x[k] = coords[k].template eval<T>(std::span<const T>(u, n));
  });
}

// Chart from a plain function, differentiated by central differences with
// steps eps^(1/3)(1+|u|) and eps^(1/4)(1+|u|).
inline Chart fd_chart(int n, int m, std::function<void(const double*, double*)> f) {
  auto eval = [n, m, f](const Vec& u) {
    auto X = [&](const Vec& p) {
      Vec x(m);
      f(p.data(), x.data());
      return x;
    };
    const double eps = std::numeric_limits<double>::epsilon();
    double scale = 1.0 + u.norm();
    double h1 = std::cbrt(eps) * scale, h2 = std::pow(eps, 0.25) * scale;
    ChartJet j;
    j.x = X(u);
    j.J = Mat::Zero(m, n);
    for (int a = 0; a < n; ++a) {
      Vec e = Vec::Zero(n);
      e(a) = h1;
      j.J.col(a) = (X(u + e) - X(u - e)) / (2.0 * h1);
    }
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Vec ea = Vec::Zero(n), eb = Vec::Zero(n);
        ea(a) = h2;
        eb(b) = h2;
        Vec h;
        if (a == b) h = (X(u + ea) - 2.0 * j.x + X(u - ea)) / (h2 * h2);
        else h = (X(u + ea + eb) - X(u + ea - eb) - X(u - ea + eb) + X(u - ea - eb)) / (4.0 * h2 * h2);
        j.H[a][b] = h;
        j.H[b][a] = h;
      }
    return j;
  };
  return Chart(n, m, eval, Chart::Tier::finite_difference);
}

// Cartesian -> hyperspherical coordinates (t, theta_1..theta_{m-1}).
template <class T>
void to_polar(const T* x, int m, T* y) {
  using std::acos;
  using std::atan2;
  using std::sqrt;
  T tail = x[m - 1] * x[m - 1];
  T r2[kMaxDim];
  r2[m - 1] = tail;
  for (int k = m - 2; k >= 0; --k) r2[k] = r2[k + 1] + x[k] * x[k];
  y[0] = sqrt(r2[0]);
  for (int k = 0; k + 2 < m; ++k) y[k + 1] = acos(x[k] / sqrt(r2[k]));
  y[m - 1] = atan2(x[m - 1], x[m - 2]);
}

template <class T>
void from_polar(const T* y, int m, T* x) {
  using std::cos;
  using std::sin;
  T s = y[0];
  for (int k = 0; k + 1 < m; ++k) {
    x[k] = s * cos(y[k + 1]);
    s = s * sin(y[k + 1]);
  }
  x[m - 1] = s;
}

// Axis-aligned parameter box.
struct ParamBox {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& u) const {
    for (int i = 0; i < dim(); ++i)
      if (!(u(i) >= lo(i) && u(i) <= hi(i))) return false;
    return true;
  }
  bool interior(const Vec& u) const {
    for (int i = 0; i < dim(); ++i)
      if (!(u(i) > lo(i) && u(i) < hi(i))) return false;
    return true;
  }
  bool same(const ParamBox& o) const { return lo == o.lo && hi == o.hi; }
};

inline ParamBox box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  ParamBox b{Vec(static_cast<int>(lo.size())), Vec(static_cast<int>(hi.size()))};
  int i = 0;
  for (double v : lo) b.lo(i++) = v;
  i = 0;
  for (double v : hi) b.hi(i++) = v;
  return b;
}

inline ParamBox cube(int n, double lo, double hi) { return ParamBox{Vec::Constant(n, lo), Vec::Constant(n, hi)}; }

}  // namespace wparab
