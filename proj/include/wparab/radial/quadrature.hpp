#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "wparab/error.hpp"
#include "wparab/expr/expr.hpp"

namespace wparab {

struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-8;
  int max_intervals = 10000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = true;  // false: tolerance not met within max_intervals
};

namespace detail {

inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double checked(F& f, double x) {
  double y = f(x);
  if (!std::isfinite(y)) throw EvaluationError("non-finite integrand value " + ast::format_number(y) + " at t=" + ast::format_number(x), x);
  return y;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One Gauss-Kronrod (7,15) panel with the QUADPACK error heuristic.
template <class F>
Panel gk15(F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = checked(f, c);
  double resg = fc * kWg[3], resk = fc * kWgk[7], resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    fv1[j] = checked(f, c - dx);
    fv2[j] = checked(f, c + dx);
    double s = fv1[j] + fv2[j];
    resk += kWgk[j] * s;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * s;
  }
  double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  double result = resk * h;
  resabs *= std::abs(h);
  resasc *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = 2.220446049250313e-16, uflow = 2.2250738585072014e-308;
  if (resabs > uflow / (50.0 * eps)) err = std::max(eps * 50.0 * resabs, err);
  return {a, b, result, err};
}

}  // namespace detail

// Single 15-point Kronrod panel; smooth in both endpoints, used where a
// quadrature must vary smoothly with its limits.
template <class F>
double kronrod15(F&& f, double a, double b) {
  return detail::gk15(f, a, b).value;
}

// Globally adaptive Gauss-Kronrod quadrature: the panel with the largest error
// estimate is bisected until the summed estimate meets the tolerance.
template <class F>
QuadResult integrate(F&& f, double a, double b, Tolerance tol = {}) {
  if (!(a <= b)) throw InvalidArgument("integrate: need a <= b");
  if (a == b) return {};
  std::priority_queue<detail::Panel> heap;
  detail::Panel first = detail::gk15(f, a, b);
  heap.push(first);
  double value = first.value, error = first.error;
  int intervals = 1;
  while (error > std::max(tol.abs, tol.rel * std::abs(value))) {
    if (intervals >= tol.max_intervals) return {value, error, intervals, false};
    detail::Panel p = heap.top();
    double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) return {value, error, intervals, false};
    heap.pop();
    detail::Panel l = detail::gk15(f, p.a, m), r = detail::gk15(f, m, p.b);
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++intervals;
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  return {v, e, intervals, true};
}

}  // namespace wparab
