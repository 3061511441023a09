#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wparab/criteria/comparison.hpp"

namespace wparab {

enum class Direction { parabolic, hyperbolic };

struct CorollaryRequest {
  Criterion which = Criterion::cor_useful;
  int n = 2;
  Direction direction = Direction::parabolic;
  double c = 0.0;        // bound on |Hh| of P
  RadialProfile beta;    // cor_useful: <grad h, grad r> bounded by beta(r)
  double k = 0.0;        // cor_radial2: weight w^k
  double offset = 0.0;   // cor_translating: P inside {x_m >= offset}
  bool moreover = false; // cor_radialcase: w -> L > 0 and int e^{ct-f} < inf instead of w in L^1
  std::optional<double> t0;
  std::optional<SubmanifoldEvidence> submanifold;
  ClassifyOptions options;
};

namespace detail {

inline std::vector<double> doubling_probes(double t0, int count = 21) {
  std::vector<double> ts;
  for (int j = 0; j < count; ++j) ts.push_back(std::ldexp(t0, j));
  return ts;
}

inline HypothesisCheck check_w_integrability(const WeightedModel& M, double t0, bool want_L1, const ImproperOptions& io) {
  HypothesisCheck c;
  c.name = want_L1 ? "w_L1" : "w_not_L1";
  c.window_lo = {t0};
  const WarpingFunction& w = M.w();
  IntegralVerdict iv = classify_improper([&w](double t) { return w(t); }, t0, w.profile().hint(), io);
  c.samples = static_cast<int>(iv.cutoffs.size());
  c.note = std::string("int w ") + to_string(iv.kind) + " (" + iv.reason + ")";
  if (!iv.decisive()) {
    c.status = HypothesisCheck::Status::window_only;
  } else if (iv.convergent() != want_L1) {
    c.status = HypothesisCheck::Status::fails;
    c.witness_t = iv.cutoffs.empty() ? t0 : iv.cutoffs.back();
  }
  if (!iv.cutoffs.empty()) c.window_hi = {iv.cutoffs.back()};
  return c;
}

// sup |H| over [T, 2T] at T = t0 2^j; holds when the sups stop growing.
inline HypothesisCheck check_H_bounded(const WeightedModel& M, double t0) {
  HypothesisCheck c;
  c.name = "H_bounded_infinity";
  std::vector<double> sups, where;
  for (double T : doubling_probes(t0)) {
    double s;
    try {
      s = M.mean_curvature_sup(T);
    } catch (const Error&) {
      continue;
    }
    if (!std::isfinite(s)) continue;
    sups.push_back(s);
    where.push_back(T);
  }
  c.samples = static_cast<int>(sups.size());
  c.window_lo = {t0};
  c.window_hi = {where.empty() ? t0 : 2.0 * where.back()};
  if (sups.size() < 7) {
    c.status = HypothesisCheck::Status::window_only;
    c.note = "too few finite probes";
    return c;
  }
  c.worst_margin = sups.back();
  for (std::size_t i = sups.size() - 6; i < sups.size(); ++i)
    if (sups[i] > sups[i - 1] * (1.0 + 1e-6) + 1e-12) {
      c.status = HypothesisCheck::Status::fails;
      c.witness_t = where[i];
      break;
    }
  c.note = "sup|H| on [T,2T], T=t0*2^j; last sup " + ast::format_number(sups.back());
  return c;
}

// beta(t0 2^j) monotone over the last six doublings and past 1e3 in the required direction.
inline HypothesisCheck check_limit(const RadialProfile& beta, double t0, double sign) {
  HypothesisCheck c;
  c.name = "fprime_limit";
  std::vector<double> v, where;
  for (double T : doubling_probes(t0)) {
    double b;
    try {
      b = sign * beta(T);
    } catch (const Error&) {
      continue;
    }
    if (!std::isfinite(b)) continue;
    v.push_back(b);
    where.push_back(T);
  }
  c.samples = static_cast<int>(v.size());
  c.window_lo = {t0};
  c.window_hi = {where.empty() ? t0 : where.back()};
  c.note = std::string(sign < 0 ? "-> -inf" : "-> +inf") + " probe over doublings";
  if (v.size() < 7) {
    c.status = HypothesisCheck::Status::window_only;
    return c;
  }
  c.worst_margin = v.back() - 1e3;
  for (std::size_t i = v.size() - 6; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) {
      c.status = HypothesisCheck::Status::fails;
      c.witness_t = where[i];
      return c;
    }
  if (v.back() < 1e3) {
    c.status = HypothesisCheck::Status::fails;
    c.witness_t = where.back();
  }
  return c;
}

inline HypothesisCheck check_exp_integral(const RadialProfile& f, double c0, double t0, const ImproperOptions& io) {
  HypothesisCheck c;
  c.name = "exp_integral";
  c.window_lo = {t0};
  IntegralVerdict iv = classify_improper([&](double t) { return std::exp(c0 * t - f(t)); }, t0, f.hint(), io);
  c.samples = static_cast<int>(iv.cutoffs.size());
  if (!iv.cutoffs.empty()) c.window_hi = {iv.cutoffs.back()};
  c.note = std::string("int e^{ct-f} from t0 ") + to_string(iv.kind);
  if (!iv.decisive()) c.status = HypothesisCheck::Status::window_only;
  else if (!iv.convergent()) {
    c.status = HypothesisCheck::Status::fails;
    c.witness_t = iv.cutoffs.back();
  }
  return c;
}

// w bounded below by a positive constant along the doubling probes, non-decreasing at the end.
inline HypothesisCheck check_w_limit(const WeightedModel& M, double t0) {
  HypothesisCheck c;
  c.name = "w_L1";
  c.note = "moreover variant: w -> L in (0, inf]";
  std::vector<double> v, where;
  for (double T : doubling_probes(t0)) {
    double x = M.w()(T);
    if (!std::isfinite(x)) {
      v.push_back(std::numeric_limits<double>::infinity());
      where.push_back(T);
      continue;
    }
    v.push_back(x);
    where.push_back(T);
  }
  c.samples = static_cast<int>(v.size());
  c.window_lo = {t0};
  c.window_hi = {where.back()};
  for (std::size_t i = v.size() - 6; i < v.size(); ++i)
    if (!(v[i] > 0) || v[i] < v[i - 1] * (1.0 - 1e-9)) {
      c.status = HypothesisCheck::Status::fails;
      c.witness_t = where[i];
      break;
    }
  c.worst_margin = v.back();
  return c;
}

inline Verdict assemble(Criterion which, std::vector<HypothesisCheck> side, Verdict thm) {
  Verdict v = std::move(thm);
  v.criterion = which;
  side.insert(side.end(), v.checks.begin(), v.checks.end());
  v.checks = std::move(side);
  bool ok = std::all_of(v.checks.begin(), v.checks.end(), [](const HypothesisCheck& c) { return c.holds(); });
  if (!ok) v.outcome = Outcome::inconclusive;
  return v;
}

inline WeightedModel unweighted(const WeightedModel& M) { return WeightedModel(M.dim(), M.w().profile(), profiles::zero()); }

}  // namespace detail

// Runs one of the corollaries: assembles alpha and t0, checks the side
// conditions and hands over to the matching theorem.
inline Verdict corollary_shortcut(const WeightedModel& model, const CorollaryRequest& q) {
  const int n = q.n;
  WeightedModel base = detail::unweighted(model);
  ClassifyOptions opt = q.options;
  if (!q.submanifold) opt.assert_A = true;
  std::vector<HypothesisCheck> side;
  auto run = [&](RadialProfile alpha, double t0, bool parabolic) {
    ComparisonSetup S(base, n, t0, std::move(alpha));
    return parabolic ? classify_thm32(S, q.submanifold, opt) : classify_thm33(S, q.submanifold, opt);
  };
  auto anchor = [&](const RadialProfile& alpha, bool parabolic) {
    if (q.t0) return *q.t0;
    return balance_anchor(base, n, alpha, parabolic ? -1.0 : 1.0);
  };

  switch (q.which) {
    case Criterion::cor_useful:
    case Criterion::cor_radialcase: {
      bool parabolic = q.direction == Direction::parabolic;
      if (q.c < 0) throw InvalidArgument("bound c must be >= 0");
      RadialProfile beta = q.which == Criterion::cor_useful ? q.beta : profiles::derivative(model.f());
      if (!beta.valid()) throw InvalidArgument("cor_useful needs a bound beta");
      if (q.moreover && (parabolic || q.which != Criterion::cor_radialcase))
        throw InvalidArgument("the moreover variant is a hyperbolicity statement for radial weights");
      RadialProfile alpha = profiles::sum(beta, profiles::constant(parabolic ? q.c : -q.c));
      double t0 = anchor(alpha, parabolic);
      if (q.moreover) {
        side.push_back(detail::check_w_limit(base, t0));
        side.push_back(detail::check_exp_integral(model.f(), q.c, t0, opt.improper));
      } else {
        side.push_back(detail::check_w_integrability(base, t0, !parabolic, opt.improper));
      }
      side.push_back(detail::check_H_bounded(base, t0));
      side.push_back(detail::check_limit(beta, t0, parabolic ? -1.0 : 1.0));
      return detail::assemble(q.which, std::move(side), run(alpha, t0, parabolic));
    }
    case Criterion::cor_radial2: {
      double t0 = q.t0.value_or(1.0);
      bool parabolic = q.k <= -n;
      RadialProfile H(
          [w = base.w(), k = q.k](double t) {
            RadialSample s = w.sample(t);
            double h = s.d1 / s.value;
            return RadialSample{k * h, k * (s.d2 / s.value - h * h), 0.0};
          },
          ast::format_number(q.k) + "*H", 0.0, false);
      return detail::assemble(q.which, std::move(side), run(H, t0, parabolic));
    }
    case Criterion::cor_translating: {
      double t0 = q.t0.value_or(1.0);
      RadialProfile alpha(
          [a = q.offset](double t) { return RadialSample{a / t, -a / (t * t), 2.0 * a / (t * t * t)}; },
          ast::format_number(q.offset) + "/t", 0.0, true);
      double order = 1.0 - n - q.offset;
      if (opt.hint.kind == AsymptoticHint::Kind::none && order < -1.0 && base.w().profile().label() == profiles::linear().label())
        opt.hint = AsymptoticHint::power_order(order);
      side.push_back(detail::check_balance(base, n, t0, alpha, 1.0, opt, "alpha_floor"));
      return detail::assemble(q.which, std::move(side), run(alpha, t0, false));
    }
    default:
      throw InvalidArgument(std::string("unknown corollary id ") + to_string(q.which));
  }
}

}  // namespace wparab
