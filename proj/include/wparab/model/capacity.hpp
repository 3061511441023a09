#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "wparab/model/model.hpp"
#include "wparab/radial/improper.hpp"
#include "wparab/radial/roots.hpp"
#include "wparab/verdict.hpp"

namespace wparab {

// Capacity of (B_rho, B_R) in a weighted model together with its potential
// phi(s) = (int_s^R dt/A) / (int_rho^R dt/A).
class CapacityReport {
 public:
  static constexpr int kNodes = 512;

  double rho = 0.0;
  double R = 0.0;
  double capacity = 0.0;
  double quadrature_error = 0.0;
  double ode_residual = 0.0;

  double potential(double s) const {
    if (!(s >= rho && s <= R)) throw DomainError("potential evaluated outside [rho, R] at s=" + ast::format_number(s));
    if (s == rho) return 1.0;
    if (s == R) return 0.0;
    return raw(s);
  }
  double operator()(double s) const { return potential(s); }

  // Unclamped evaluation; extends smoothly a little beyond [rho, R].
  double raw(double s) const {
    const Table& tb = *table_;
    int i = static_cast<int>(std::floor(kNodes * std::log(s / rho) / tb.log_ratio));
    i = std::clamp(i, 0, kNodes - 1);
    auto inv = [&tb](double t) { return tb.model->inverse_sphere_area(t); };
    double partial = s >= tb.nodes[i] ? kronrod15(inv, tb.nodes[i], s) : -kronrod15(inv, s, tb.nodes[i]);
    return (tb.suffix[i] - partial) / tb.suffix[0];
  }

  const WeightedModel& model() const { return *table_->model; }

 private:
  struct Table {
    std::shared_ptr<const WeightedModel> model;
    std::vector<double> nodes;   // geometric grid rho..R
    std::vector<double> suffix;  // int_{nodes[i]}^R dt/A
    double log_ratio = 0.0;
  };
  std::shared_ptr<const Table> table_;

  friend CapacityReport capacity_potential(const WeightedModel&, double, double, Tolerance);
};

// Largest |phi'' + ((m-1)H + f') phi'| over a uniform grid, with derivatives of
// the evaluated potential taken by Richardson-extrapolated central differences.
inline double potential_ode_residual(const CapacityReport& rep, int grid = 256) {
  const WeightedModel& M = rep.model();
  double worst = 0.0;
  for (int k = 0; k < grid; ++k) {
    double s = rep.rho + (rep.R - rep.rho) * k / (grid - 1);
    double h = 1e-3 * std::min(s, rep.R - rep.rho);
    if (M.domain_start() > 0) h = std::min(h, 0.25 * (s - M.domain_start()));
    auto d1 = [&](double hh) { return (rep.raw(s + hh) - rep.raw(s - hh)) / (2.0 * hh); };
    auto d2 = [&](double hh) { return (rep.raw(s + hh) - 2.0 * rep.raw(s) + rep.raw(s - hh)) / (hh * hh); };
    double p1 = (4.0 * d1(0.5 * h) - d1(h)) / 3.0;
    double p2 = (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
    double coef = (M.dim() - 1) * M.mean_curvature(s) + M.f().d1(s);
    worst = std::max(worst, std::abs(p2 + coef * p1));
  }
  return worst;
}

inline CapacityReport capacity_potential(const WeightedModel& model, double rho, double R, Tolerance tol = {}) {
  model.require_domain(rho);
  if (!(R > rho) || !std::isfinite(R)) throw InvalidArgument("capacity_potential: need rho < R < inf");
  auto tb = std::make_shared<CapacityReport::Table>();
  tb->model = std::make_shared<const WeightedModel>(model);
  tb->log_ratio = std::log(R / rho);
  const int N = CapacityReport::kNodes;
  tb->nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) tb->nodes[i] = rho * std::exp(tb->log_ratio * i / N);
  tb->nodes[N] = R;
  tb->suffix.assign(N + 1, 0.0);
  auto inv = [&model](double t) { return model.inverse_sphere_area(t); };
  Tolerance seg{1e-300, 1e-13, tol.max_intervals};
  double err = 0.0;
  for (int i = N - 1; i >= 0; --i) {
    QuadResult q = integrate(inv, tb->nodes[i], tb->nodes[i + 1], seg);
    tb->suffix[i] = tb->suffix[i + 1] + q.value;
    err += q.error;
  }
  CapacityReport rep;
  rep.rho = rho;
  rep.R = R;
  rep.capacity = 1.0 / tb->suffix[0];
  rep.quadrature_error = err * rep.capacity * rep.capacity;
  rep.table_ = tb;
  rep.ode_residual = potential_ode_residual(rep);
  return rep;
}

struct CapacityAtInfinity {
  std::optional<double> capacity;  // empty when the integral is inconclusive
  IntegralVerdict verdict;
};

// Cap^h(B_rho) = (int_rho^inf dt/A_h(S_t))^{-1}
inline CapacityAtInfinity capacity_to_infinity(const WeightedModel& model, double rho, AsymptoticHint hint = {},
                                               ImproperOptions opt = {}) {
  model.require_domain(rho);
  CapacityAtInfinity out;
  out.verdict = classify_improper([&model](double t) { return model.inverse_sphere_area(t); }, rho, hint, opt);
  if (out.verdict.divergent()) out.capacity = 0.0;
  else if (out.verdict.convergent()) out.capacity = 1.0 / out.verdict.value;
  return out;
}

// Ahlfors-type test: parabolic iff int_{t0}^inf dt/A_h(S_t) diverges.
inline Verdict ahlfors_classify(const WeightedModel& model, double t0, AsymptoticHint hint = {}, ImproperOptions opt = {}) {
  Verdict v;
  v.criterion = Criterion::ahlfors_direct;
  v.t0 = t0;
  CapacityAtInfinity c = capacity_to_infinity(model, t0, hint, opt);
  v.integral_evidence = c.verdict;
  v.outcome = c.verdict.divergent() ? Outcome::parabolic : c.verdict.convergent() ? Outcome::hyperbolic : Outcome::inconclusive;
  return v;
}

enum class RadiusMode { first_below, last_above };

struct CriticalRadius {
  double t0 = 0.0;
  double scan_lo = 0.0, scan_hi = 0.0;  // window of the monotonicity scan
  int scan_samples = 64;
};

// first_below: root of H^h_n + lambda0 after which H^h_n <= -lambda0;
// last_above: root of H^h_n - lambda0 before which H^h_n >= lambda0.
inline CriticalRadius critical_sphere_radius(const WeightedModel& model, int n, double lambda0, RadiusMode mode,
                                             double cap = 1e6) {
  if (lambda0 < 0) throw InvalidArgument("lambda0 must be >= 0");
  double sign = mode == RadiusMode::first_below ? 1.0 : -1.0;
  auto g = [&](double t) { return model.weighted_mean_curvature(n, t) + sign * lambda0; };
  // The "past the root" side: g <= 0 for first_below, g < 0 for last_above.
  auto crossed = [&](double t) { return mode == RadiusMode::first_below ? g(t) <= 0.0 : g(t) < 0.0; };

  double start = std::max(1e-6, 2.0 * model.domain_start());
  if (crossed(start)) {
    if (mode == RadiusMode::last_above)
      throw NotAttainedError("H^h_n < lambda0 already at t=" + ast::format_number(start));
    throw NotAttainedError("H^h_n <= -lambda0 already at t=" + ast::format_number(start) + "; no first crossing");
  }
  double lo = start, hi = start;
  while (!crossed(hi)) {
    lo = hi;
    if (hi >= cap) throw NotAttainedError("H^h_n does not reach the target level up to t=" + ast::format_number(cap));
    hi = std::min(2.0 * hi, cap);
  }
  CriticalRadius out;
  out.t0 = g(hi) == 0.0 ? hi : find_root(g, lo, hi, 1e-15);

  const double tol = 1e-10;
  if (mode == RadiusMode::first_below) {
    out.scan_lo = out.t0;
    out.scan_hi = 32.0 * out.t0;
  } else {
    out.scan_lo = out.t0 / 32.0;
    if (out.scan_lo <= model.domain_start()) out.scan_lo = 0.5 * (out.t0 + model.domain_start());
    out.scan_hi = out.t0;
  }
  for (int i = 0; i < out.scan_samples; ++i) {
    double t = out.scan_lo * std::pow(out.scan_hi / out.scan_lo, double(i) / (out.scan_samples - 1));
    double v = g(t);
    if (mode == RadiusMode::first_below ? v > tol * (1.0 + std::abs(lambda0)) : v < -tol * (1.0 + std::abs(lambda0)))
      throw NonMonotoneTailError("critical radius " + ast::format_number(out.t0) + " violates the tail condition at t=" +
                                     ast::format_number(t),
                                 t);
  }
  return out;
}

}  // namespace wparab
