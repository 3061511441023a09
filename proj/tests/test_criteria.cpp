#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wparab/criteria/comparison.hpp"
#include "wparab/criteria/corollaries.hpp"
#include "wparab/criteria/critical.hpp"
#include "wparab/geometry/catalog.hpp"

using namespace wparab;
using std::numbers::pi;

namespace {

RadialProfile expr(const char* s) { return profiles::from_expression(s); }

const HypothesisCheck* find(const Verdict& v, const std::string& name) {
  for (const auto& c : v.checks)
    if (c.name == name) return &c;
  return nullptr;
}

ClassifyOptions asserted() {
  ClassifyOptions o;
  o.assert_A = true;
  return o;
}

}  // namespace

TEST(ComparisonSetup, WeightVanishesAtAnchorAndMatchesClosedForm) {
  ComparisonSetup S(models::euclidean(3), 2, 1.5, expr("-t"));
  EXPECT_EQ(S.f(1.5), 0.0);
  for (double t : {0.7, 1.5001, 2.0, 10.0, 333.3, 1e5})
    EXPECT_NEAR(S.f(t), -(t * t - 2.25) / 2.0, 1e-10 * (1.0 + t * t)) << t;
}

TEST(ComparisonSetup, DerivativeIsAlpha) {
  ComparisonSetup S(models::hyperbolic(3), 2, 1.0, expr("sin(t)/t - t"));
  for (double t : {1.3, 4.0, 17.0, 250.0}) {
    double h = 1e-4 * t;
    double fd = (S.f(t + h) - S.f(t - h)) / (2.0 * h);
    EXPECT_NEAR(fd, std::sin(t) / t - t, 1e-6 * (1.0 + t)) << t;
  }
  EXPECT_NEAR(S.comparison().f().d1(3.0), std::sin(3.0) / 3.0 - 3.0, 1e-12);
}

TEST(ComparisonSetup, RejectsBadInputs) {
  EXPECT_THROW(ComparisonSetup(models::euclidean(3), 2, 0.0, profiles::zero()), InvalidArgument);
  EXPECT_THROW(ComparisonSetup(models::euclidean(3), 4, 1.0, profiles::zero()), InvalidArgument);
}

TEST(Thm32, GaussianSelfShrinkers) {
  for (int m : {3, 4})
    for (double c : {0.0, 1.0}) {
      WeightedModel base = models::euclidean(m);
      RadialProfile alpha = profiles::sum(expr("-t"), profiles::constant(c));
      int n = m - 1;
      double t0 = balance_anchor(base, n, alpha, -1.0);
      EXPECT_NEAR(t0, (c + std::sqrt(c * c + 4.0 * n)) / 2.0, 1e-9);
      Verdict v = classify_thm32(ComparisonSetup(base, n, t0, alpha), std::nullopt, asserted());
      EXPECT_EQ(v.outcome, Outcome::parabolic) << m << " " << c;
      EXPECT_TRUE(v.sound());
      EXPECT_TRUE(v.integral_evidence->divergent());
    }
}

TEST(Thm32, EuclideanMinimalNotCaptured) {
  Verdict v = classify_thm32(ComparisonSetup(models::euclidean(4), 3, 1.0, profiles::zero()), std::nullopt, asserted());
  EXPECT_EQ(v.outcome, Outcome::inconclusive);
  const HypothesisCheck* b = find(v, "B");
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->status, HypothesisCheck::Status::fails);
  ASSERT_TRUE(b->witness_t.has_value());
  EXPECT_GT(3.0 / *b->witness_t, 0.0);
  EXPECT_TRUE(v.sound());
}

TEST(Thm32, HyperbolicSpaceWithConcaveWeight) {
  WeightedModel base = models::hyperbolic(3);
  RadialProfile alpha = expr("-2*t");
  double t0 = balance_anchor(base, 2, alpha, -1.0);
  // 2 coth t = 2t
  EXPECT_NEAR(t0, 1.19967864025773, 1e-9);
  Verdict v = classify_thm32(ComparisonSetup(base, 2, t0, alpha), std::nullopt, asserted());
  EXPECT_EQ(v.outcome, Outcome::parabolic);
  // c_2^{-1} w^{1-n} e^{-f} with f = t0^2 - t^2 is increasing: divergence is certain.
  auto oracle = [t0](double t) { return std::exp(t * t - t0 * t0) / (2.0 * pi * std::sinh(t)); };
  EXPECT_GT(oracle(10.0), oracle(5.0));
}

TEST(Thm32, UnassertedBoundIsNotEnough) {
  Verdict v = classify_thm32(ComparisonSetup(models::euclidean(3), 2, std::sqrt(2.0), expr("-t")));
  EXPECT_EQ(v.outcome, Outcome::inconclusive);
  EXPECT_EQ(find(v, "A")->status, HypothesisCheck::Status::window_only);
  EXPECT_TRUE(v.sound());
}

TEST(Thm33, AntiGaussianSelfExpanders) {
  for (double c : {0.0, 1.0}) {
    WeightedModel base = models::euclidean(3);
    RadialProfile alpha = profiles::sum(expr("t"), profiles::constant(-c));
    double t0 = balance_anchor(base, 2, alpha, 1.0);
    Verdict v = classify_thm33(ComparisonSetup(base, 2, t0, alpha), std::nullopt, asserted());
    EXPECT_EQ(v.outcome, Outcome::hyperbolic) << c;
    EXPECT_TRUE(v.sound());
  }
}

TEST(Thm33, EuclideanMinimalDimensionThree) {
  Verdict v = classify_thm33(ComparisonSetup(models::euclidean(4), 3, 1.0, profiles::zero()), std::nullopt, asserted());
  EXPECT_EQ(v.outcome, Outcome::hyperbolic);
  // int_1^inf dt / (4 pi t^2) = 1 / (4 pi)
  EXPECT_NEAR(v.integral_evidence->value, 1.0 / (4.0 * pi), 1e-7);
  // Cap(B_rho) / A(S_rho) = 4 pi rho / (4 pi rho^2)
  for (double rho : {1.0, 2.0, 5.0}) EXPECT_NEAR(v.capacity_bound(rho), 1.0 / rho, 1e-6);
}

TEST(Thm33, PlaneCannotFire) {
  Verdict v = classify_thm33(ComparisonSetup(models::euclidean(3), 2, 1.0, profiles::zero()), std::nullopt, asserted());
  EXPECT_EQ(v.outcome, Outcome::inconclusive);
  EXPECT_TRUE(v.integral_evidence->divergent());
  EXPECT_TRUE(find(v, "B")->holds());
}

TEST(Thm32, SubmanifoldWindowPolicy) {
  Ambient A = Ambient::euclidean(3, weights::gaussian(3));
  ImmersedSubmanifold P = catalog::coordinate_plane(A, 2);
  ParamBox window = box({0.9, 0.9}, {3.0, 3.0});
  double t0 = std::sqrt(2.0);
  ComparisonSetup S(models::euclidean(3), 2, t0, expr("-t"));

  Verdict v = classify_thm32(S, SubmanifoldEvidence{&P, window, false});
  EXPECT_EQ(find(v, "A")->status, HypothesisCheck::Status::window_only);
  EXPECT_EQ(v.outcome, Outcome::inconclusive);

  Verdict w = classify_thm32(S, SubmanifoldEvidence{&P, window, true});
  EXPECT_EQ(w.outcome, Outcome::parabolic);
  EXPECT_EQ(find(w, "A")->samples, 1024);

  ComparisonSetup tight(models::euclidean(3), 2, t0, expr("-t-1"));
  Verdict x = classify_thm32(tight, SubmanifoldEvidence{&P, window, true});
  const HypothesisCheck* a = find(x, "A");
  EXPECT_EQ(a->status, HypothesisCheck::Status::fails);
  EXPECT_EQ(a->witness_point.size(), 2u);
  EXPECT_EQ(x.outcome, Outcome::inconclusive);
}

TEST(Thm33, CompactWholeDomainNeedsNoAssertion) {
  Ambient A = Ambient::euclidean(3, weights::radial(3, profiles::antigaussian()));
  ImmersedSubmanifold P = catalog::sphere(A, 2.0);
  // On the sphere <grad h, grad r> + <Hh, grad r> = r - 2/r - r.
  ComparisonSetup S(models::euclidean(3), 2, 1.0, expr("-2/t"));
  ParamBox inner = P.domain;
  inner.lo(0) += 1e-3;
  inner.hi(0) -= 1e-3;
  Verdict v = classify_thm33(S, SubmanifoldEvidence{&P, P.domain, false});
  EXPECT_TRUE(find(v, "A")->holds());
  Verdict w = classify_thm33(S, SubmanifoldEvidence{&P, inner, false});
  EXPECT_EQ(find(w, "A")->status, HypothesisCheck::Status::window_only);
}

TEST(Corollary, PowerWeights) {
  WeightedModel M = models::euclidean(3);
  CorollaryRequest q;
  q.which = Criterion::cor_radial2;
  q.n = 2;
  q.k = -2.0;
  Verdict v = corollary_shortcut(M, q);
  EXPECT_EQ(v.outcome, Outcome::parabolic);
  EXPECT_EQ(v.criterion, Criterion::cor_radial2);
  q.k = 1.0;
  Verdict w = corollary_shortcut(M, q);
  EXPECT_EQ(w.outcome, Outcome::hyperbolic);
  // w^{1-n-k} = t^{-2} / c_2, normalised at t0 = 1 by w(t0)^k = 1
  EXPECT_NEAR(w.integral_evidence->value, 1.0 / (2.0 * pi), 1e-7);
  q.k = -1.0;
  EXPECT_EQ(corollary_shortcut(M, q).outcome, Outcome::inconclusive);
}

TEST(Corollary, TranslatingHalfSpace) {
  CorollaryRequest q;
  q.which = Criterion::cor_translating;
  q.n = 3;
  for (double off : {-0.5, 0.0, 2.0}) {
    q.offset = off;
    Verdict v = corollary_shortcut(models::euclidean(4), q);
    EXPECT_EQ(v.outcome, Outcome::hyperbolic) << off;
    EXPECT_TRUE(find(v, "alpha_floor")->holds());
    // int_1^inf t^{-2-off} dt / c_3
    EXPECT_NEAR(v.integral_evidence->value, 1.0 / ((1.0 + off) * 4.0 * pi), 1e-6) << off;
  }
  q.offset = -1.5;
  Verdict v = corollary_shortcut(models::euclidean(4), q);
  EXPECT_EQ(v.outcome, Outcome::inconclusive);
  EXPECT_TRUE(v.integral_evidence->divergent());
  q.offset = -4.0;
  Verdict w = corollary_shortcut(models::euclidean(4), q);
  EXPECT_EQ(find(w, "alpha_floor")->status, HypothesisCheck::Status::fails);
  EXPECT_EQ(w.outcome, Outcome::inconclusive);
}

TEST(Corollary, RadialCaseGaussian) {
  for (int m : {3, 4})
    for (double c : {0.0, 1.0}) {
      CorollaryRequest q;
      q.which = Criterion::cor_radialcase;
      q.n = m - 1;
      q.c = c;
      Verdict v = corollary_shortcut(models::gaussian(m), q);
      EXPECT_EQ(v.outcome, Outcome::parabolic) << m << " " << c;
      for (const char* name : {"w_not_L1", "H_bounded_infinity", "fprime_limit", "A", "B"})
        EXPECT_TRUE(find(v, name) && find(v, name)->holds()) << name;
      EXPECT_NEAR(v.t0, (c + std::sqrt(c * c + 4.0 * (m - 1))) / 2.0, 1e-9);
    }
}

TEST(Corollary, RadialCaseExpandersNeedMoreover) {
  CorollaryRequest q;
  q.which = Criterion::cor_radialcase;
  q.direction = Direction::hyperbolic;
  q.n = 2;
  q.c = 1.0;
  Verdict plain = corollary_shortcut(models::antigaussian(3), q);
  EXPECT_EQ(find(plain, "w_L1")->status, HypothesisCheck::Status::fails);
  EXPECT_EQ(plain.outcome, Outcome::inconclusive);
  q.moreover = true;
  Verdict v = corollary_shortcut(models::antigaussian(3), q);
  EXPECT_TRUE(find(v, "exp_integral")->holds());
  EXPECT_EQ(v.outcome, Outcome::hyperbolic);
  EXPECT_TRUE(v.sound());
}

TEST(Corollary, UsefulOnHyperbolicSpace) {
  CorollaryRequest q;
  q.which = Criterion::cor_useful;
  q.n = 2;
  q.c = 1.0;
  q.beta = expr("-t^2");
  Verdict v = corollary_shortcut(models::hyperbolic(3), q);
  EXPECT_EQ(v.outcome, Outcome::parabolic);
  q.beta = expr("-log(1+t)");
  Verdict w = corollary_shortcut(models::hyperbolic(3), q);
  EXPECT_EQ(find(w, "fprime_limit")->status, HypothesisCheck::Status::fails);
  EXPECT_EQ(w.outcome, Outcome::inconclusive);
  q.direction = Direction::hyperbolic;
  q.beta = expr("t^2");
  Verdict x = corollary_shortcut(models::hyperbolic(3), q);
  EXPECT_EQ(find(x, "w_L1")->status, HypothesisCheck::Status::fails);
  EXPECT_EQ(x.outcome, Outcome::inconclusive);
  EXPECT_TRUE(v.sound() && w.sound() && x.sound());
}

TEST(Corollary, UnknownId) {
  CorollaryRequest q;
  q.which = Criterion::thm32;
  EXPECT_THROW(corollary_shortcut(models::euclidean(3), q), InvalidArgument);
  q.which = Criterion::cor_useful;
  EXPECT_THROW(corollary_shortcut(models::euclidean(3), q), InvalidArgument);
}

TEST(Criteria, AgreeWithAhlforsOnModels) {
  std::vector<WeightedModel> cat = {models::euclidean(2), models::euclidean(3), models::gaussian(2), models::gaussian(3),
                                    models::antigaussian(3), models::hyperbolic(2), models::hyperbolic(3),
                                    WeightedModel(3, profiles::linear(), expr("-t^2/(1+t)"))};
  for (const auto& M : cat) {
    WeightedModel base(M.dim(), M.w().profile(), profiles::zero());
    Verdict a = ahlfors_classify(M, 1.0);
    RadialProfile alpha = profiles::derivative(M.f());
    for (bool parabolic : {true, false}) {
      ComparisonSetup S(base, M.dim(), 1.0, alpha);
      Verdict v = parabolic ? classify_thm32(S, std::nullopt, asserted()) : classify_thm33(S, std::nullopt, asserted());
      EXPECT_EQ(v.integral_evidence->kind, a.integral_evidence->kind) << M.label();
      if (v.outcome != Outcome::inconclusive) EXPECT_EQ(v.outcome, a.outcome) << M.label();
      EXPECT_TRUE(v.sound());
    }
  }
}

TEST(Criteria, CapacityBoundMonotone) {
  Verdict v = classify_thm32(ComparisonSetup(models::euclidean(3), 2, std::sqrt(2.0), expr("-t")), std::nullopt, asserted());
  double prev = v.capacity_bound(1.5);
  EXPECT_GE(prev, 0.0);
  for (double rho : {2.0, 3.0, 5.0}) {
    double b = v.capacity_bound(rho);
    EXPECT_LE(b, prev + 1e-15);
    prev = b;
  }
  Verdict h = classify_thm33(ComparisonSetup(models::euclidean(4), 3, 1.0, profiles::zero()), std::nullopt, asserted());
  EXPECT_GT(h.capacity_bound(1.0), h.capacity_bound(2.0));
}

TEST(Criteria, Deterministic) {
  auto run = [] {
    CorollaryRequest q;
    q.which = Criterion::cor_radialcase;
    q.n = 2;
    q.c = 1.0;
    return corollary_shortcut(models::gaussian(3), q);
  };
  Verdict a = run(), b = run();
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.t0, b.t0);
  EXPECT_EQ(a.integral_evidence->partials, b.integral_evidence->partials);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].worst_margin, b.checks[i].worst_margin);
    EXPECT_EQ(a.checks[i].samples, b.checks[i].samples);
  }
}

TEST(Cylinder, WeightedMeanCurvature) {
  EXPECT_NEAR(cylinder_weighted_mc(4, profiles::zero(), std::sqrt(3.0)), 0.0, 1e-15);
  EXPECT_NEAR(cylinder_weighted_mc(4, profiles::zero(), 1.0), 2.0, 1e-15);
  EXPECT_NEAR(cylinder_weighted_mc(2, expr("t^2/2"), 5.0), 0.2, 1e-15);
  EXPECT_THROW(cylinder_weighted_mc(2, profiles::zero(), 0.0), DomainError);
}

TEST(Cylinder, CriticalRadius) {
  for (int k : {2, 3, 4}) EXPECT_NEAR(critical_cylinder_radius(k, profiles::zero()), std::sqrt(k - 1.0), 1e-10);
  EXPECT_NEAR(critical_cylinder_radius(3, profiles::zero(), 0.0, 4), 2.0, 1e-10);
  // (k-1)/t - t = lambda
  EXPECT_NEAR(critical_cylinder_radius(3, profiles::zero(), 1.0), (-1.0 + std::sqrt(9.0)) / 2.0, 1e-10);
  EXPECT_THROW(critical_cylinder_radius(2, expr("t^2/2"), 0.0), BracketError);
}

TEST(Cylinder, MatchesGeometry) {
  Ambient A = Ambient::euclidean(5, weights::gaussian(5));
  ImmersedSubmanifold P = catalog::cylinder(A, std::sqrt(3.0), 4);
  GeometrySample s = geometry_at(P, P.sample_box.lo + 0.3 * (P.sample_box.hi - P.sample_box.lo));
  EXPECT_LT(weighted_mean_curvature_norm(s), 1e-7);
}

TEST(Hyperplane, GaussianIsConstant) {
  Vec a(3);
  a << 1.0, 2.0, 2.0;
  a /= 3.0;
  for (double t : {-1.5, 0.7, 4.0}) {
    Vec p = t * a;
    p(0) += 0.4;
    p -= (p.dot(a) - t) * a;
    HyperplaneCurvature hc = hyperplane_weighted_mc(profiles::gaussian(), std::nullopt, a, t, p);
    EXPECT_NEAR(hc.value, t, 1e-12);
    EXPECT_LE(hc.spread, 1e-10);
    EXPECT_EQ(hc.samples, 64);

    Ambient A = Ambient::euclidean(3, weights::gaussian(3));
    ImmersedSubmanifold P = catalog::hyperplane(A, a, t);
    GeometrySample s = geometry_at(P, Vec::Constant(2, 0.3));
    EXPECT_NEAR(s.Hh.dot(a), hc.value, 1e-9);
  }
}

TEST(Hyperplane, LinearAndHorizontal) {
  Vec a = axis(3, 0);
  EXPECT_NEAR(hyperplane_weighted_mc(expr("-t^4"), std::nullopt, a, 0.0, axis(3, 1)).value, 0.0, 1e-15);
  Vec e = axis(3, 2);
  AmbientWeight g = weights::coordinate(3, 2, expr("sin(t)"));
  Vec p(3);
  p << 0.3, -1.0, 0.8;
  HyperplaneCurvature hc = hyperplane_weighted_mc(profiles::zero(), g, e, 0.8, p);
  EXPECT_NEAR(hc.value, -std::cos(0.8), 1e-14);
  EXPECT_LE(hc.spread, 1e-14);
  EXPECT_THROW(hyperplane_weighted_mc(profiles::zero(), g, e, 0.5, p), InvalidArgument);
}
