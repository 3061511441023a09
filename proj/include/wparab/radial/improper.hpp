#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wparab/error.hpp"
#include "wparab/radial/profile.hpp"
#include "wparab/radial/quadrature.hpp"

namespace wparab {

struct IntegralVerdict {
  enum class Kind { convergent, divergent, inconclusive };
  Kind kind = Kind::inconclusive;
  double value = 0.0;        // limit estimate when convergent, last partial otherwise
  double error_bound = 0.0;  // convergent only
  std::vector<double> cutoffs;
  std::vector<double> partials;
  std::string hint_used = "none";
  std::string reason;

  bool convergent() const { return kind == Kind::convergent; }
  bool divergent() const { return kind == Kind::divergent; }
  bool decisive() const { return kind != Kind::inconclusive; }
};

inline const char* to_string(IntegralVerdict::Kind k) {
  switch (k) {
    case IntegralVerdict::Kind::convergent: return "convergent";
    case IntegralVerdict::Kind::divergent: return "divergent";
    default: return "inconclusive";
  }
}

struct ImproperOptions {
  Tolerance tol{};
  double divergence_threshold = 1e12;
  int max_doublings = 40;
  int nondecay_run = 6;
};

// Decides whether int_a^inf f converges, using the partial integrals over the
// doubling cutoffs a*2^j.
template <class F>
IntegralVerdict classify_improper(F&& f, double a, AsymptoticHint hint = {}, ImproperOptions opt = {}) {
  if (!(a > 0)) throw InvalidArgument("classify_improper: lower limit must be positive");
  IntegralVerdict out;
  auto g = [&](double t) {
    double y = f(t);
    if (y < 0) throw DomainError("integrand negative (" + ast::format_number(y) + ") at t=" + ast::format_number(t));
    return y;
  };
  auto finish = [&](IntegralVerdict::Kind k, std::string reason) {
    out.kind = k;
    out.reason = std::move(reason);
    return out;
  };

  double total = 0.0, quad_err = 0.0, prev_inc = -1.0;
  int run = 0;
  std::vector<double> ratios;
  double lo = a;
  for (int j = 1; j <= opt.max_doublings; ++j) {
    double hi = std::ldexp(a, j);
    QuadResult q;
    try {
      q = integrate(g, lo, hi, opt.tol);
    } catch (const EvaluationError& e) {
      out.value = total;
      if (std::isinf(f(e.location())))
        return finish(IntegralVerdict::Kind::divergent, "integrand overflows at t=" + ast::format_number(e.location()));
      throw;
    }
    double inc = q.value;
    total += inc;
    quad_err += q.error;
    out.cutoffs.push_back(hi);
    out.partials.push_back(total);
    out.value = total;

    if (!std::isfinite(total) || total > opt.divergence_threshold)
      return finish(IntegralVerdict::Kind::divergent, "partial integral exceeds " + ast::format_number(opt.divergence_threshold));

    if (prev_inc >= 0.0) {
      run = (inc > 0.0 && inc >= prev_inc * (1.0 - 1e-9)) ? run + 1 : 0;
      if (run >= opt.nondecay_run)
        return finish(IntegralVerdict::Kind::divergent,
                      "increments non-decreasing over " + std::to_string(opt.nondecay_run) + " doublings");
      ratios.push_back(prev_inc > 0.0 ? inc / prev_inc : (inc > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
    }
    prev_inc = inc;

    double target = std::max(opt.tol.abs, opt.tol.rel * std::abs(total));
    if (ratios.size() >= 3) {
      double rmax = std::max({ratios[ratios.size() - 1], ratios[ratios.size() - 2], ratios[ratios.size() - 3]});
      if (rmax < 1.0) {
        double tail = inc * rmax / (1.0 - rmax);
        if (tail <= target) {
          out.value = total + tail;
          out.error_bound = tail + quad_err;
          return finish(IntegralVerdict::Kind::convergent, "geometric decay of increments");
        }
      }
    }

    if (j >= 3 && hint.kind != AsymptoticHint::Kind::none) {
      double fhi = g(hi);
      switch (hint.kind) {
        case AsymptoticHint::Kind::eventually_monotone: {
          double f1 = g(std::ldexp(a, j - 1)), f2 = g(std::ldexp(a, j - 2));
          if (fhi > 0 && fhi >= f1 && f1 >= f2) {
            out.hint_used = to_string(hint);
            return finish(IntegralVerdict::Kind::divergent, "integrand nondecreasing over the last 3 cutoffs");
          }
          break;
        }
        case AsymptoticHint::Kind::power_order:
          out.hint_used = to_string(hint);
          if (hint.param >= -1.0) return finish(IntegralVerdict::Kind::divergent, "power order >= -1");
          if (double tail = fhi * hi / (-hint.param - 1.0); tail <= target) {
            out.value = total + tail;
            out.error_bound = tail + quad_err;
            return finish(IntegralVerdict::Kind::convergent, "power-order tail bound");
          }
          break;
        case AsymptoticHint::Kind::exponential_order:
          out.hint_used = to_string(hint);
          if (hint.param >= 0.0) return finish(IntegralVerdict::Kind::divergent, "exponential order >= 0");
          if (double tail = fhi / -hint.param; tail <= target) {
            out.value = total + tail;
            out.error_bound = tail + quad_err;
            return finish(IntegralVerdict::Kind::convergent, "exponential-order tail bound");
          }
          break;
        default: break;
      }
    }
    lo = hi;
  }
  if (hint.kind == AsymptoticHint::Kind::power_order || hint.kind == AsymptoticHint::Kind::exponential_order) {
    double T = out.cutoffs.back(), fT = g(T);
    double tail = hint.kind == AsymptoticHint::Kind::power_order ? fT * T / (-hint.param - 1.0) : fT / -hint.param;
    out.value += tail;
    out.error_bound = tail + quad_err;
    return finish(IntegralVerdict::Kind::convergent, "order hint; tail bound above tolerance");
  }
  return finish(IntegralVerdict::Kind::inconclusive, "no decision within " + std::to_string(opt.max_doublings) + " doublings");
}

}  // namespace wparab
