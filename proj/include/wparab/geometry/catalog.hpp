#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "wparab/geometry/submanifold.hpp"

namespace wparab::catalog {

namespace detail {

// Chart of a Euclidean-shaped map f(u) -> x; on a model ambient the same
// map is read in polar coordinates.
template <class F>
Chart place(const Ambient& A, int n, F f, bool finite_difference) {
  int m = A.dim();
  if (A.is_euclidean()) {
    if (finite_difference)
      return fd_chart(n, m, [f](const double* u, double* x) { f(u, x); });
    return dual_chart(n, m, f);
  }
  auto polar = [f, m](const auto* u, auto* y) {
    using T = std::remove_cvref_t<decltype(*u)>;
    T x[kMaxDim];
    f(u, x);
    to_polar(static_cast<const T*>(x), m, y);
  };
  if (finite_difference) return fd_chart(n, m, [polar](const double* u, double* y) { polar(u, y); });
  return dual_chart(n, m, polar);
}

inline Vec big(int n) { return Vec::Constant(n, 1e3); }

// Orthonormal basis of the complement of span(cols) (axis-seeded Gram-Schmidt).
inline Mat complement(const Mat& cols, int m) {
  Mat B(m, m);
  int k = 0;
  for (int c = 0; c < cols.cols(); ++c) {
    Vec v = cols.col(c);
    for (int j = 0; j < k; ++j) v -= B.col(j).dot(v) * B.col(j);
    B.col(k++) = v.normalized();
  }
  int start = k;
  for (int a = 0; a < m && k < m; ++a) {
    Vec v = axis(m, a);
    for (int j = 0; j < k; ++j) v -= B.col(j).dot(v) * B.col(j);
    if (v.norm() < 1e-8) continue;
    B.col(k++) = v.normalized();
  }
  return B.middleCols(start, m - start);
}

}  // namespace detail

// Metric sphere of radius a about the pole.
inline ImmersedSubmanifold sphere(const Ambient& A, double a, bool finite_difference = false) {
  const int m = A.dim(), n = m - 1;
  if (!(a > 0)) throw InvalidArgument("sphere radius must be positive");
  ImmersedSubmanifold P{A};
  if (A.is_euclidean()) {
    P.chart = detail::place(A, n, [a, m](const auto* u, auto* x) {
      using T = std::remove_cvref_t<decltype(*u)>;
      T y[kMaxDim];
      y[0] = T(a);
      for (int k = 0; k < m - 1; ++k) y[k + 1] = u[k];
      from_polar(static_cast<const T*>(y), m, x);
    }, finite_difference);
    P.normal_seed = [](const ChartJet& c) { return Vec(-c.x); };
  } else {
    auto f = [a, m](const auto* u, auto* y) {
      using T = std::remove_cvref_t<decltype(*u)>;
      y[0] = T(a);
      for (int k = 0; k < m - 1; ++k) y[k + 1] = u[k];
    };
    P.chart = finite_difference ? fd_chart(n, m, [f](const double* u, double* y) { f(u, y); }) : dual_chart(n, m, f);
    P.normal_seed = [m](const ChartJet&) { return Vec(-axis(m, 0)); };
  }
  const double pi = std::numbers::pi;
  P.domain = ParamBox{Vec::Constant(n, 0.0), Vec::Constant(n, pi)};
  P.domain.lo(n - 1) = -pi;
  P.sample_box = ParamBox{Vec::Constant(n, 0.3), Vec::Constant(n, pi - 0.3)};
  P.sample_box.lo(n - 1) = -pi + 0.3;
  P.compact = true;
  P.label = "sphere(" + ast::format_number(a) + ")";
  return P;
}

// Affine n-plane p + span(basis columns), basis orthonormal in R^m.
inline ImmersedSubmanifold affine_plane(const Ambient& A, const Mat& basis, const Vec& p, bool finite_difference = false) {
  const int m = A.dim(), n = static_cast<int>(basis.cols());
  ImmersedSubmanifold P{A};
  P.chart = detail::place(A, n, [basis, p, m, n](const auto* u, auto* x) {
    for (int k = 0; k < m; ++k) {
      x[k] = u[0] * basis(k, 0) + p(k);
      for (int i = 1; i < n; ++i) x[k] = x[k] + u[i] * basis(k, i);
    }
  }, finite_difference);
  if (n == m - 1 && A.is_euclidean()) {
    Vec N = detail::complement(basis, m).col(0);
    P.normal_seed = [N](const ChartJet&) { return N; };
  }
  P.domain = ParamBox{-detail::big(n), detail::big(n)};
  P.sample_box = cube(n, -2.0, 2.0);
  P.label = "plane(dim=" + std::to_string(n) + ")";
  return P;
}

// Hyperplane {<x, a> = t0}, a unit.
inline ImmersedSubmanifold hyperplane(const Ambient& A, const Vec& a, double t0, bool finite_difference = false) {
  const int m = A.dim();
  Mat N(m, 1);
  N.col(0) = a.normalized();
  ImmersedSubmanifold P = affine_plane(A, detail::complement(N, m), t0 * N.col(0), finite_difference);
  if (A.is_euclidean()) {
    Vec n0 = N.col(0);
    P.normal_seed = [n0](const ChartJet&) { return n0; };
  }
  P.label = "hyperplane(t=" + ast::format_number(t0) + ")";
  return P;
}

// Span of the first n coordinate axes.
inline ImmersedSubmanifold coordinate_plane(const Ambient& A, int n, bool finite_difference = false) {
  const int m = A.dim();
  if (n < 1 || n >= m) throw InvalidArgument("coordinate plane dimension out of range");
  Mat B = Mat::Zero(m, n);
  for (int i = 0; i < n; ++i) B(i, i) = 1.0;
  ImmersedSubmanifold P = affine_plane(A, B, Vec::Zero(m), finite_difference);
  P.label = "coordinate_plane(" + std::to_string(n) + ")";
  return P;
}

// S^{k-1}_a x R^{m-k}, parametrized by k-1 angles then m-k axial coordinates.
inline ImmersedSubmanifold cylinder(const Ambient& A, double a, int k, bool finite_difference = false) {
  const int m = A.dim(), n = m - 1;
  if (k < 2 || k > m - 1) throw InvalidArgument("cylinder needs 2 <= k <= m-1");
  ImmersedSubmanifold P{A};
  P.chart = detail::place(A, n, [a, k, m](const auto* u, auto* x) {
    using T = std::remove_cvref_t<decltype(*u)>;
    T y[kMaxDim];
    y[0] = T(a);
    for (int i = 0; i < k - 1; ++i) y[i + 1] = u[i];
    from_polar(static_cast<const T*>(y), k, x);
    for (int i = k; i < m; ++i) x[i] = u[i - 1];
  }, finite_difference);
  if (A.is_euclidean())
    P.normal_seed = [k, m](const ChartJet& c) {
      Vec N = Vec::Zero(m);
      N.head(k) = -c.x.head(k);
      return N;
    };
  const double pi = std::numbers::pi;
  P.domain = ParamBox{Vec::Constant(n, 0.0), Vec::Constant(n, pi)};
  P.domain.lo(k - 2) = -pi;
  P.sample_box = ParamBox{Vec::Constant(n, 0.3), Vec::Constant(n, pi - 0.3)};
  P.sample_box.lo(k - 2) = -pi + 0.3;
  for (int i = k - 1; i < n; ++i) {
    P.domain.lo(i) = -1e3;
    P.domain.hi(i) = 1e3;
    P.sample_box.lo(i) = -2.0;
    P.sample_box.hi(i) = 2.0;
  }
  P.label = "cylinder(" + ast::format_number(a) + "," + std::to_string(k) + ")";
  return P;
}

// Graph x_m = phi(x_1..x_{m-1}) with upward-pointing (theta < 0) normal (grad phi, -1).
inline ImmersedSubmanifold graph(const Ambient& A, const Expression& phi, bool finite_difference = false) {
  const int m = A.dim(), n = m - 1;
  if (static_cast<int>(phi.arity()) != n) throw InvalidArgument("graph function must have m-1 variables");
  ImmersedSubmanifold P{A};
  P.chart = detail::place(A, n, [phi, n](const auto* u, auto* x) {
    using T = std::remove_cvref_t<decltype(*u)>;
    for (int i = 0; i < n; ++i) x[i] = u[i];
    x[n] = phi.template eval<T>(std::span<const T>(u, n));
  }, finite_difference);
  if (A.is_euclidean())
    P.normal_seed = [n](const ChartJet& c) {
      Vec N(n + 1);
      for (int i = 0; i < n; ++i) N(i) = c.J(n, i);
      N(n) = -1.0;
      return N;
    };
  P.domain = ParamBox{-detail::big(n), detail::big(n)};
  P.sample_box = cube(n, -2.0, 2.0);
  P.label = "graph(" + phi.source() + ")";
  return P;
}

inline ImmersedSubmanifold paraboloid(const Ambient& A, double c, bool finite_difference = false) {
  const int n = A.dim() - 1;
  std::vector<std::string> vars;
  std::string src;
  for (int i = 0; i < n; ++i) {
    vars.push_back("x" + std::to_string(i + 1));
    src += (i ? "+" : "") + vars.back() + "^2";
  }
  ImmersedSubmanifold P = graph(A, Expression(ast::format_number(c) + "*(" + src + ")", vars), finite_difference);
  P.label = "paraboloid(" + ast::format_number(c) + ")";
  return P;
}

// (s cos v, s sin v, pitch v) in 3-space.
inline ImmersedSubmanifold helicoid(const Ambient& A, double pitch, bool finite_difference = false) {
  if (A.dim() != 3) throw InvalidArgument("helicoid lives in 3-space");
  ImmersedSubmanifold P{A};
  P.chart = detail::place(A, 2, [pitch](const auto* u, auto* x) {
    using std::cos;
    using std::sin;
    x[0] = u[0] * cos(u[1]);
    x[1] = u[0] * sin(u[1]);
    x[2] = pitch * u[1];
  }, finite_difference);
  P.domain = box({-1e3, -1e3}, {1e3, 1e3});
  P.sample_box = box({0.3, -2.5}, {2.0, 2.5});
  P.label = "helicoid(" + ast::format_number(pitch) + ")";
  return P;
}

// Translating curve t = -log cos x in the plane.
inline ImmersedSubmanifold grim_curve(const Ambient& A, bool finite_difference = false) {
  if (A.dim() != 2) throw InvalidArgument("grim curve lives in the plane");
  ImmersedSubmanifold P{A};
  P.chart = detail::place(A, 1, [](const auto* u, auto* x) {
    using std::cos;
    using std::log;
    x[0] = u[0];
    x[1] = -log(cos(u[0]));
  }, finite_difference);
  if (A.is_euclidean())
    P.normal_seed = [](const ChartJet& c) {
      Vec N(2);
      N << c.J(1, 0), -1.0;
      return N;
    };
  const double h = 0.5 * std::numbers::pi;
  P.domain = box({-h}, {h});
  P.sample_box = box({-h + 0.2}, {h - 0.2});
  P.label = "grim_curve";
  return P;
}

// The ambient itself (n = m).
inline ImmersedSubmanifold identity(const Ambient& A) {
  const int m = A.dim();
  ImmersedSubmanifold P{A};
  if (A.is_euclidean()) {
    P.chart = dual_chart(m, m, [m](const auto* u, auto* x) {
      for (int k = 0; k < m; ++k) x[k] = u[k];
    });
    P.domain = ParamBox{-detail::big(m), detail::big(m)};
    P.sample_box = cube(m, -2.0, 2.0);
  } else {
    P.chart = dual_chart(m, m, [m](const auto* u, auto* x) {
      for (int k = 0; k < m; ++k) x[k] = u[k];
    });
    const double pi = std::numbers::pi;
    P.domain = ParamBox{Vec::Constant(m, 0.0), Vec::Constant(m, pi)};
    P.domain.hi(0) = 1e3;
    P.domain.lo(m - 1) = -pi;
    P.sample_box = ParamBox{Vec::Constant(m, 0.3), Vec::Constant(m, pi - 0.3)};
    P.sample_box.hi(0) = 3.0;
    P.sample_box.lo(m - 1) = -pi + 0.3;
  }
  P.label = "identity";
  return P;
}

}  // namespace wparab::catalog
