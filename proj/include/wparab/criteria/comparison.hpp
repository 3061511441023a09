#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wparab/geometry/identities.hpp"
#include "wparab/model/capacity.hpp"
#include "wparab/verdict.hpp"

namespace wparab {

// Comparison weight f(t) = int_{t0}^t alpha on the n-dimensional model M^n_w.
class ComparisonSetup {
 public:
  static constexpr int kNodes = 512;
  static constexpr int kSpanDoublings = 40;

  ComparisonSetup(WeightedModel base, int n, double t0, RadialProfile alpha)
      : base_(std::move(base)), n_(n), t0_(t0), alpha_(std::move(alpha)) {
    if (!(t0 > 0)) throw InvalidArgument("anchor radius t0 must be positive");
    if (n < 2 || n > base_.dim()) throw InvalidArgument("comparison needs 2 <= n <= m");
    auto tb = std::make_shared<Table>();
    tb->alpha = alpha_;
    tb->t0 = t0;
    tb->nodes.resize(kNodes);
    tb->cumulative.assign(kNodes, 0.0);
    for (int i = 0; i < kNodes; ++i) tb->nodes[i] = t0 * std::exp2(double(kSpanDoublings) * i / (kNodes - 1));
    auto a = [this](double t) { return alpha_(t); };
    Tolerance seg{1e-300, 1e-13, 10000};
    for (int i = 1; i < kNodes; ++i) tb->cumulative[i] = tb->cumulative[i - 1] + integrate(a, tb->nodes[i - 1], tb->nodes[i], seg).value;
    table_ = tb;
    RadialProfile f(
        [tb](double t) {
          RadialSample s = tb->alpha.sample(t);
          return RadialSample{tb->value(t), s.value, s.d1};
        },
        "int_{" + ast::format_number(t0) + "}^t (" + alpha_.label() + ")", 0.0, true, alpha_.hint());
    comparison_.emplace(n, base_.w().profile(), f);
  }

  const WeightedModel& base() const { return base_; }
  int n() const { return n_; }
  double t0() const { return t0_; }
  const RadialProfile& alpha() const { return alpha_; }
  const WeightedModel& comparison() const { return *comparison_; }
  double f(double t) const { return table_->value(t); }

 private:
  struct Table {
    RadialProfile alpha;
    double t0 = 0.0;
    std::vector<double> nodes, cumulative;

    double value(double t) const {
      auto a = [this](double s) { return alpha(s); };
      if (t == t0) return 0.0;
      if (t < t0) return -integrate(a, t, t0).value;
      if (t >= nodes.back()) return cumulative.back() + integrate(a, nodes.back(), t).value;
      int i = static_cast<int>(std::floor(std::log2(t / t0) * (kNodes - 1) / kSpanDoublings));
      i = std::clamp(i, 0, kNodes - 2);
      while (i > 0 && nodes[i] > t) --i;
      while (i + 1 < kNodes - 1 && nodes[i + 1] <= t) ++i;
      return cumulative[i] + wparab::detail::gk15(a, nodes[i], t).value;
    }
  };

  WeightedModel base_;
  int n_;
  double t0_;
  RadialProfile alpha_;
  std::shared_ptr<const Table> table_;
  std::optional<WeightedModel> comparison_;
};

// The (A) input to the theorems: either a concrete submanifold sampled over a
// window, or an asserted bound.
struct SubmanifoldEvidence {
  const ImmersedSubmanifold* P = nullptr;
  ParamBox window;
  // Accept a bound that was only verified on the window for all of P.
  bool assert_beyond_window = false;
};

struct ClassifyOptions {
  bool assert_A = false;  // used when no submanifold is supplied
  AsymptoticHint hint;    // for the comparison integral
  ImproperOptions improper;
  int balance_samples = 512;
  double balance_window = 32.0;  // (B) sampled on [t0, balance_window * t0]
  int tail_doublings = 20;       // extra probes at t0 * 2^j beyond the window
};

namespace detail {

inline HypothesisCheck check_A(const ComparisonSetup& S, const std::optional<SubmanifoldEvidence>& ev, Sense sense,
                               const ClassifyOptions& opt) {
  if (!ev || !ev->P) {
    HypothesisCheck c;
    c.name = "A";
    c.source = HypothesisCheck::Source::asserted;
    if (opt.assert_A) {
      c.status = HypothesisCheck::Status::holds;
      c.note = "bound asserted by the caller";
    } else {
      c.status = HypothesisCheck::Status::window_only;
      c.note = "no submanifold supplied and the bound was not asserted";
    }
    return c;
  }
  HypothesisCheck c = radial_hypothesis_profile(*ev->P, ev->window, S.alpha(), sense);
  bool whole = ev->P->compact && ev->window.same(ev->P->domain);
  if (c.holds() && !whole) {
    c.status = ev->assert_beyond_window ? HypothesisCheck::Status::holds : HypothesisCheck::Status::window_only;
    c.note = ev->assert_beyond_window ? "verified on the window; asserted beyond it" : "verified on the window only";
  }
  return c;
}

// Samples sign * (n H + alpha) >= 0 on the balance window and at doubling probes.
inline HypothesisCheck check_balance(const WeightedModel& M, int n, double t0, const RadialProfile& alpha, double sign,
                                     const ClassifyOptions& opt, const char* name = "B") {
  HypothesisCheck c;
  c.name = name;
  double hi = opt.balance_window * t0;
  c.window_lo = {t0};
  c.window_hi = {hi};
  c.worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> ts;
  for (int i = 0; i < opt.balance_samples; ++i) ts.push_back(t0 * std::pow(opt.balance_window, double(i) / (opt.balance_samples - 1)));
  for (int j = 6; j <= opt.tail_doublings; ++j) ts.push_back(std::ldexp(t0, j));
  int skipped = 0;
  for (double t : ts) {
    double nh = n * M.mean_curvature(t), a = alpha(t);
    double v = sign * (nh + a);
    if (!std::isfinite(v)) {
      ++skipped;
      continue;
    }
    ++c.samples;
    double margin = v + 1e-9 * (1.0 + std::abs(nh) + std::abs(a));
    if (v < c.worst_margin) c.worst_margin = v;
    if (margin < 0 && c.status != HypothesisCheck::Status::fails) {
      c.status = HypothesisCheck::Status::fails;
      c.witness_t = t;
    }
  }
  c.note = "sampled on [t0, " + ast::format_number(opt.balance_window) + " t0] and at t0*2^j, j<=" +
           std::to_string(opt.tail_doublings);
  if (skipped) c.note += "; " + std::to_string(skipped) + " non-finite probes skipped";
  if (alpha.hint().kind != AsymptoticHint::Kind::none) c.note += "; hint " + to_string(alpha.hint());
  return c;
}

inline Verdict classify(const ComparisonSetup& S, const std::optional<SubmanifoldEvidence>& ev, const ClassifyOptions& opt,
                        bool parabolic) {
  Verdict v;
  v.criterion = parabolic ? Criterion::thm32 : Criterion::thm33;
  v.t0 = S.t0();
  v.checks.push_back(check_A(S, ev, parabolic ? Sense::upper : Sense::lower, opt));
  v.checks.push_back(check_balance(S.base(), S.n(), S.t0(), S.alpha(), parabolic ? -1.0 : 1.0, opt));
  const WeightedModel& C = S.comparison();
  AsymptoticHint hint = opt.hint;
  v.integral_evidence = classify_improper([&C](double t) { return C.inverse_sphere_area(t); }, S.t0(), hint, opt.improper);
  bool checks_hold = std::all_of(v.checks.begin(), v.checks.end(), [](const HypothesisCheck& c) { return c.holds(); });
  bool fires = parabolic ? v.integral_evidence->divergent() : v.integral_evidence->convergent();
  if (checks_hold && fires) v.outcome = parabolic ? Outcome::parabolic : Outcome::hyperbolic;
  auto Cptr = std::make_shared<WeightedModel>(C);
  AsymptoticHint h = hint;
  ImproperOptions io = opt.improper;
  v.capacity_bound = [Cptr, h, io](double rho) {
    CapacityAtInfinity cap = capacity_to_infinity(*Cptr, rho, h, io);
    if (!cap.capacity) return std::numeric_limits<double>::quiet_NaN();
    return *cap.capacity / Cptr->sphere_area(rho);
  };
  return v;
}

}  // namespace detail

// Parabolicity from (A) <= alpha, (B) nH + alpha <= 0 and a divergent comparison integral.
inline Verdict classify_thm32(const ComparisonSetup& S, const std::optional<SubmanifoldEvidence>& ev = std::nullopt,
                              const ClassifyOptions& opt = {}) {
  return detail::classify(S, ev, opt, true);
}

// Hyperbolicity from (A) >= alpha, (B) nH + alpha >= 0 and a convergent comparison integral.
inline Verdict classify_thm33(const ComparisonSetup& S, const std::optional<SubmanifoldEvidence>& ev = std::nullopt,
                              const ClassifyOptions& opt = {}) {
  return detail::classify(S, ev, opt, false);
}

// Smallest anchor t0 >= start past which sign*(nH + alpha) >= 0, found from
// the last sign change of the balance function before the doubling where it settles.
inline double balance_anchor(const WeightedModel& M, int n, const RadialProfile& alpha, double sign, double start = 1.0,
                             double cap = 1e6) {
  auto g = [&](double t) { return sign * (n * M.mean_curvature(t) + alpha(t)); };
  auto ok = [&](double t) { return g(t) >= -1e-12 * (1.0 + std::abs(n * M.mean_curvature(t)) + std::abs(alpha(t))); };
  if (ok(start)) return start;
  double lo = start, hi = start;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) throw NotAttainedError("balance condition not reached up to t=" + ast::format_number(cap));
  }
  double t0 = find_root(g, lo, hi, 1e-15);
  return ok(t0) ? t0 : std::nextafter(t0, hi) + 1e-12 * t0;
}

}  // namespace wparab
