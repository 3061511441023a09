#pragma once

#include <cmath>
#include <utility>

#include "wparab/error.hpp"
#include "wparab/expr/expr.hpp"

namespace wparab {

// Brent's method: bisection safeguarding inverse quadratic / secant steps.
template <class F>
double find_root(F&& f, double lo, double hi, double tol = 1e-14) {
  double a = lo, b = hi, fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(std::isfinite(fa) && std::isfinite(fb)) || (fa > 0) == (fb > 0))
    throw BracketError("no sign change on [" + ast::format_number(lo) + ", " + ast::format_number(hi) + "]");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 500; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a; fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double xtol = 2.0 * 2.220446049250313e-16 * std::abs(b) + 0.5 * tol;
    double m = 0.5 * (c - b);
    if (std::abs(m) <= xtol || fb == 0.0) return b;
    if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        double r = fb / fc;
        q = fa / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(xtol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > xtol ? d : (m > 0 ? xtol : -xtol);
    fb = f(b);
  }
  return b;
}

// Grows hi geometrically until f changes sign on [lo, hi] or hi exceeds cap.
template <class F>
std::pair<double, double> expand_bracket(F&& f, double lo, double hi, double cap, double factor = 2.0) {
  double flo = f(lo);
  while (true) {
    double fhi = f(hi);
    if (flo == 0.0 || fhi == 0.0 || (flo > 0) != (fhi > 0)) return {lo, hi};
    if (hi >= cap) throw BracketError("no sign change up to " + ast::format_number(cap));
    lo = hi;
    flo = fhi;
    hi = std::min(hi * factor, cap);
  }
}

}  // namespace wparab
