#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "wparab/error.hpp"
#include "wparab/expr/dual.hpp"
#include "wparab/expr/expr.hpp"

namespace wparab {

struct RadialSample {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct AsymptoticHint {
  enum class Kind { none, eventually_monotone, exponential_order, power_order };
  Kind kind = Kind::none;
  double param = 0.0;

  static AsymptoticHint none() { return {}; }
  static AsymptoticHint eventually_monotone() { return {Kind::eventually_monotone, 0.0}; }
  static AsymptoticHint exponential_order(double c) { return {Kind::exponential_order, c}; }
  static AsymptoticHint power_order(double k) { return {Kind::power_order, k}; }
};

inline std::string to_string(const AsymptoticHint& h) {
  switch (h.kind) {
    case AsymptoticHint::Kind::none: return "none";
    case AsymptoticHint::Kind::eventually_monotone: return "eventually_monotone";
    case AsymptoticHint::Kind::exponential_order: return "exponential_order(" + ast::format_number(h.param) + ")";
    case AsymptoticHint::Kind::power_order: return "power_order(" + ast::format_number(h.param) + ")";
  }
  return "none";
}

// A scalar function of t on (t_min, inf) with first and second derivatives.
// `pole_singular` marks profiles whose natural domain is (0, inf) but which
// blow up at the pole (e.g. k log w); such profiles are anchored away from 0.
class RadialProfile {
 public:
  using Evaluator = std::function<RadialSample(double)>;

  RadialProfile() = default;
  RadialProfile(Evaluator eval, std::string label, double t_min = 0.0, bool pole_singular = false,
                AsymptoticHint hint = {})
      : eval_(std::make_shared<Evaluator>(std::move(eval))),
        label_(std::move(label)),
        t_min_(t_min),
        pole_singular_(pole_singular),
        hint_(hint) {}

  RadialSample sample(double t) const {
    if (!(t > t_min_)) throw DomainError(label_ + ": t=" + ast::format_number(t) + " outside (t_min=" + ast::format_number(t_min_) + ", inf)");
    return (*eval_)(t);
  }
  double operator()(double t) const { return sample(t).value; }
  double d1(double t) const { return sample(t).d1; }
  double d2(double t) const { return sample(t).d2; }

  double t_min() const { return t_min_; }
  bool pole_singular() const { return pole_singular_; }
  const AsymptoticHint& hint() const { return hint_; }
  const std::string& label() const { return label_; }
  bool valid() const { return static_cast<bool>(eval_); }

  RadialProfile with_hint(AsymptoticHint h) const {
    RadialProfile p = *this;
    p.hint_ = h;
    return p;
  }
  RadialProfile with_domain(double t_min, bool pole_singular) const {
    RadialProfile p = *this;
    p.t_min_ = t_min;
    p.pole_singular_ = pole_singular;
    return p;
  }

 private:
  std::shared_ptr<const Evaluator> eval_;
  std::string label_;
  double t_min_ = 0.0;
  bool pole_singular_ = false;
  AsymptoticHint hint_;
};

namespace profiles {

inline RadialProfile from_expression(const Expression& e, double t_min = 0.0, bool pole_singular = false) {
  if (e.arity() != 1) throw InvalidArgument("radial expression must have exactly one variable");
  return RadialProfile(
      [e](double t) {
        D2 x = seed2(t, 1.0, 1.0);
        D2 y = e.eval<D2>(std::span<const D2>(&x, 1));
        return RadialSample{y.v.v, y.v.d, y.d.d};
      },
      e.source(), t_min, pole_singular);
}

inline RadialProfile from_expression(const std::string& source, double t_min = 0.0, bool pole_singular = false) {
  return from_expression(Expression(source, {"t"}), t_min, pole_singular);
}

inline RadialProfile linear() {
  return RadialProfile([](double t) { return RadialSample{t, 1.0, 0.0}; }, "t");
}

// Warping function of the space form of curvature kappa < 0.
inline RadialProfile hyperbolic(double kappa = -1.0) {
  if (!(kappa < 0)) throw InvalidArgument("hyperbolic warping needs kappa < 0");
  double s = std::sqrt(-kappa);
  return RadialProfile(
      [s](double t) { return RadialSample{std::sinh(s * t) / s, std::cosh(s * t), s * std::sinh(s * t)}; },
      "sinh(" + ast::format_number(s) + "*t)/" + ast::format_number(s));
}

// Distance to the axis of the paraboloid z = a*rho^2 as a function of arclength.
inline RadialProfile paraboloid_warp(double a) {
  if (!(a > 0)) throw InvalidArgument("paraboloid parameter must be positive");
  auto arclength = [a](double rho) {
    double q = 2.0 * a * rho;
    return 0.5 * rho * std::sqrt(1.0 + q * q) + std::asinh(q) / (4.0 * a);
  };
  return RadialProfile(
      [a, arclength](double s) {
        double rho = s;
        for (int it = 0; it < 100; ++it) {
          double q = 2.0 * a * rho;
          double step = (arclength(rho) - s) / std::sqrt(1.0 + q * q);
          rho -= step;
          if (rho < 0) rho = 0.5 * (rho + step);
          if (std::abs(step) <= 1e-16 * (1.0 + rho)) break;
        }
        double q = 2.0 * a * rho;
        double w1 = 1.0 / std::sqrt(1.0 + q * q);
        double w2 = -4.0 * a * a * rho * w1 * w1 * w1 * w1;
        return RadialSample{rho, w1, w2};
      },
      "paraboloid(" + ast::format_number(a) + ")");
}

inline RadialProfile zero() {
  return RadialProfile([](double) { return RadialSample{}; }, "0");
}

inline RadialProfile constant(double c) {
  return RadialProfile([c](double) { return RadialSample{c, 0.0, 0.0}; }, ast::format_number(c));
}

inline RadialProfile gaussian() {
  return RadialProfile([](double t) { return RadialSample{-0.5 * t * t, -t, -1.0}; }, "-t^2/2");
}

inline RadialProfile antigaussian() {
  return RadialProfile([](double t) { return RadialSample{0.5 * t * t, t, 1.0}; }, "t^2/2");
}

// a*t^k
inline RadialProfile power(double a, double k) {
  return RadialProfile(
      [a, k](double t) {
        return RadialSample{a * std::pow(t, k), a * k * std::pow(t, k - 1.0), a * k * (k - 1.0) * std::pow(t, k - 2.0)};
      },
      ast::format_number(a) + "*t^" + ast::format_number(k));
}

// k*log w(t): the log-density of the weight w(r)^k, singular at the pole.
inline RadialProfile log_power(double k, const RadialProfile& w) {
  return RadialProfile(
      [k, w](double t) {
        RadialSample s = w.sample(t);
        double h = s.d1 / s.value;
        return RadialSample{k * std::log(s.value), k * h, k * (s.d2 / s.value - h * h)};
      },
      ast::format_number(k) + "*log(" + w.label() + ")", 0.0, true);
}

inline RadialProfile sum(const RadialProfile& p, const RadialProfile& q) {
  return RadialProfile(
      [p, q](double t) {
        RadialSample a = p.sample(t), b = q.sample(t);
        return RadialSample{a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
      },
      "(" + p.label() + ")+(" + q.label() + ")", std::max(p.t_min(), q.t_min()), p.pole_singular() || q.pole_singular());
}

inline RadialProfile scaled(const RadialProfile& p, double c) {
  return RadialProfile(
      [p, c](double t) {
        RadialSample a = p.sample(t);
        return RadialSample{c * a.value, c * a.d1, c * a.d2};
      },
      ast::format_number(c) + "*(" + p.label() + ")", p.t_min(), p.pole_singular());
}

// The derivative of p as a profile (second derivative of the result is a
// central difference of p'').
inline RadialProfile derivative(const RadialProfile& p) {
  return RadialProfile(
      [p](double t) {
        RadialSample a = p.sample(t);
        double h = 1e-5 * std::max(1.0, t);
        if (t - h <= p.t_min()) h = 0.5 * (t - p.t_min());
        double d3 = (p.d2(t + h) - p.d2(t - h)) / (2.0 * h);
        return RadialSample{a.d1, a.d2, d3};
      },
      "d/dt(" + p.label() + ")", p.t_min(), p.pole_singular());
}

}  // namespace profiles

// Largest relative mismatch between supplied derivatives and central
// differences over the sample points.
template <class Points>
double derivative_mismatch(const RadialProfile& p, const Points& ts) {
  double worst = 0.0;
  for (double t : ts) {
    double h = 1e-5 * std::max(1.0, std::abs(t));
    RadialSample s = p.sample(t);
    double fd1 = (p(t + h) - p(t - h)) / (2.0 * h);
    double fd2 = (p.d1(t + h) - p.d1(t - h)) / (2.0 * h);
    double e1 = std::abs(fd1 - s.d1) / std::max(1.0, std::abs(s.d1));
    double e2 = std::abs(fd2 - s.d2) / std::max(1.0, std::abs(s.d2));
    worst = std::max({worst, e1, e2});
  }
  return worst;
}

// A profile satisfying the pole conditions w > 0, w(t)/t -> 1.
class WarpingFunction {
 public:
  explicit WarpingFunction(RadialProfile w) : w_(std::move(w)) {
    if (w_.t_min() != 0.0 || w_.pole_singular()) throw InvalidArgument("warping function must be defined down to the pole");
    for (double t : {1e-6, 1e-8}) {
      double v = w_(t);
      if (!(v > 0) || std::abs(v / t - 1.0) > 1e-3)
        throw InvalidArgument("warping function " + w_.label() + " violates w(t)/t -> 1 at t=" + ast::format_number(t));
    }
  }
  const RadialProfile& profile() const { return w_; }
  RadialSample sample(double t) const {
    RadialSample s = w_.sample(t);
    if (!(s.value > 0)) throw DomainError("warping function non-positive at t=" + ast::format_number(t));
    return s;
  }
  double operator()(double t) const { return sample(t).value; }

 private:
  RadialProfile w_;
};

}  // namespace wparab
