#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wparab/criteria/comparison.hpp"
#include "wparab/stochastic/diffusion.hpp"

namespace wparab {

struct ComparisonReport {
  Criterion theorem = Criterion::thm32;
  HitEstimate hit;
  double r_start = 0.0;
  double phi = 0.0;
  // Slack of the predicted inequality at 3 standard errors; pass iff >= 0.
  double margin = 0.0;
  bool pass = false;
  // Distance |p - phi| in standard errors; small values mean the test has little power.
  double separation = 0.0;
  Verdict verdict;
  HypothesisCheck annulus_balance;
};

namespace detail {

// Along the annulus [rho, t0) the comparison needs
// sign * (nH + alpha)(1 - |grad_P r|^2) >= 0 rather than the plain balance.
inline HypothesisCheck annulus_balance(const Diffusion& D, const ComparisonSetup& S, const ParamBox& window, double rho,
                                       double R, double sign) {
  HypothesisCheck c;
  c.name = "B";
  c.note = "annulus [rho, t0): (nH + alpha)(1 - |grad_P r|^2)";
  c.window_lo.assign(window.lo.data(), window.lo.data() + window.dim());
  c.window_hi.assign(window.hi.data(), window.hi.data() + window.dim());
  c.worst_margin = std::numeric_limits<double>::infinity();
  double top = std::min(R, S.t0());
  for (const Vec& u : grid_points(window)) {
    LocalCoefficients k = D.coefficients(u);
    if (k.r < rho || k.r >= top) continue;
    double v = sign * (S.n() * S.base().mean_curvature(k.r) + S.alpha()(k.r)) * (1.0 - k.grad_P_r_sq);
    ++c.samples;
    if (v < c.worst_margin) {
      c.worst_margin = v;
      if (v < -1e-8) {
        c.status = HypothesisCheck::Status::fails;
        c.witness_t = k.r;
        c.witness_point.assign(u.data(), u.data() + u.size());
      }
    }
  }
  if (c.samples == 0) c.worst_margin = 0.0;
  return c;
}

}  // namespace detail

// Monte Carlo check of u <= phi(r) (thm32) or u >= phi(r) (thm33) at `start`,
// where u is the capacity potential of P and phi the comparison potential.
inline ComparisonReport comparison_check(const Diffusion& D, const ComparisonSetup& S, Criterion theorem, const Vec& start,
                                         double rho, double R, long N, std::optional<ParamBox> window = std::nullopt,
                                         const ClassifyOptions& opt = {}) {
  if (theorem != Criterion::thm32 && theorem != Criterion::thm33) throw InvalidArgument("comparison needs thm32 or thm33");
  bool parabolic = theorem == Criterion::thm32;
  ParamBox win = window.value_or(D.P().sample_box);
  ComparisonReport rep;
  rep.theorem = theorem;
  SubmanifoldEvidence ev{&D.P(), win, true};
  rep.verdict = parabolic ? classify_thm32(S, ev, opt) : classify_thm33(S, ev, opt);
  rep.annulus_balance = detail::annulus_balance(D, S, win, rho, R, parabolic ? -1.0 : 1.0);
  std::string why;
  for (const auto& c : rep.verdict.checks)
    if (!c.holds()) why += " " + c.name + " " + to_string(c.status) + (c.note.empty() ? "" : " (" + c.note + ")") + ";";
  if (!rep.annulus_balance.holds()) why += " annulus balance fails;";
  if (rep.verdict.outcome == Outcome::inconclusive && why.empty())
    why = std::string(" comparison integral ") + to_string(rep.verdict.integral_evidence->kind);
  if (!why.empty()) throw ComparisonRefused(std::string(to_string(theorem)) + " does not apply:" + why);

  rep.r_start = D.radius(start);
  CapacityReport cap = capacity_potential(S.comparison(), rho, R);
  rep.phi = cap.potential(rep.r_start);
  rep.hit = hit_probability(D, start, rho, R, N);
  double se = rep.hit.se;
  rep.margin = parabolic ? rep.phi + 3.0 * se - rep.hit.p : rep.hit.p - (rep.phi - 3.0 * se);
  rep.pass = rep.margin >= 0.0;
  rep.separation = se > 0 ? std::abs(rep.hit.p - rep.phi) / se : std::numeric_limits<double>::infinity();
  return rep;
}

struct RecurrenceReport {
  std::vector<double> R;
  std::vector<HitEstimate> estimates;
  bool nondecreasing = true;  // within two standard errors between neighbours
  // Limit of p as R -> inf from p = L - b / R through the last two radii.
  double limit = 0.0, limit_se = 0.0;
};

inline RecurrenceReport recurrence_probe(const Diffusion& D, const Vec& start, double rho, const std::vector<double>& schedule,
                                         long N) {
  if (schedule.size() < 2) throw InvalidArgument("recurrence probe needs at least two outer radii");
  RecurrenceReport rep;
  rep.R = schedule;
  for (double R : schedule) rep.estimates.push_back(hit_probability(D, start, rho, R, N));
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    const HitEstimate &a = rep.estimates[i - 1], &b = rep.estimates[i];
    if (b.p < a.p - 2.0 * std::hypot(a.se, b.se)) rep.nondecreasing = false;
  }
  std::size_t k = schedule.size() - 1;
  double R1 = schedule[k - 1], R2 = schedule[k];
  const HitEstimate &e1 = rep.estimates[k - 1], &e2 = rep.estimates[k];
  rep.limit = (R2 * e2.p - R1 * e1.p) / (R2 - R1);
  rep.limit_se = std::hypot(R2 * e2.se, R1 * e1.se) / (R2 - R1);
  return rep;
}

}  // namespace wparab
