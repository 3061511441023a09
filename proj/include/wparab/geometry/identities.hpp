#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "wparab/geometry/submanifold.hpp"
#include "wparab/verdict.hpp"

namespace wparab {

// A closed-form identity evaluated two ways.
struct IdentityCheck {
  double formula = 0.0;
  double direct = 0.0;
  double residual = 0.0;
};

inline IdentityCheck make_check(double formula, double direct) { return {formula, direct, std::abs(formula - direct)}; }

// Delta^h_P psi(r) against
// (psi'' - H psi') |grad_P r|^2 + (n H + <grad h, grad r> + <Hh, grad r>) psi'.
inline IdentityCheck lemma31_residual(const ImmersedSubmanifold& P, const Vec& u, const RadialProfile& psi,
                                      IntrinsicChristoffel mode = IntrinsicChristoffel::finite_difference) {
  GeometrySample s = geometry_at(P, u);
  if (!(s.r > 0)) throw DomainError("radial identity needs a point away from the pole");
  double direct = weighted_laplacian(P, s, radial_field_jet(P, s, psi), mode);
  RadialSample q = psi.sample(s.r);
  double H = P.ambient.sphere_mean_curvature(s.r);
  double drift = P.n() * H + s.inner(s.grad_h, s.grad_r) + s.inner(s.Hh, s.grad_r);
  double formula = (q.d2 - H * q.d1) * s.grad_P_r_sq + drift * q.d1;
  return make_check(formula, direct);
}

enum class Sense { upper, lower };

inline std::vector<Vec> grid_points(const ParamBox& window, int cap = 4096, int per_axis = 32) {
  const int n = window.dim();
  int k = per_axis;
  while (k > 2 && std::pow(double(k), n) > cap) --k;
  std::vector<Vec> pts;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec u(n);
    for (int i = 0; i < n; ++i) u(i) = window.lo(i) + (window.hi(i) - window.lo(i)) * (idx[i] + 0.5) / k;
    pts.push_back(u);
    int i = 0;
    while (i < n && ++idx[i] == k) idx[i++] = 0;
    if (i == n) break;
  }
  return pts;
}

// Samples <grad h, grad r> + <Hh, grad r> against alpha(r) over a parameter window.
inline HypothesisCheck radial_hypothesis_profile(const ImmersedSubmanifold& P, const ParamBox& window,
                                                 const RadialProfile& alpha, Sense sense, double tol = 1e-8) {
  HypothesisCheck c;
  c.name = "A";
  c.window_lo.assign(window.lo.data(), window.lo.data() + window.dim());
  c.window_hi.assign(window.hi.data(), window.hi.data() + window.dim());
  c.worst_margin = std::numeric_limits<double>::infinity();
  for (const Vec& u : grid_points(window)) {
    GeometrySample s = geometry_at(P, u);
    double lhs = s.inner(s.grad_h, s.grad_r) + s.inner(s.Hh, s.grad_r);
    double a = alpha(s.r);
    double margin = sense == Sense::upper ? a - lhs : lhs - a;
    ++c.samples;
    if (margin < c.worst_margin) {
      c.worst_margin = margin;
      c.witness_t = s.r;
      c.witness_point.assign(u.data(), u.data() + u.size());
    }
  }
  c.status = c.worst_margin >= -tol * (1.0 + std::abs(c.worst_margin)) ? HypothesisCheck::Status::holds
                                                                        : HypothesisCheck::Status::fails;
  if (c.holds()) {
    c.witness_t.reset();
    c.witness_point.clear();
  }
  return c;
}

inline void require_euclidean(const ImmersedSubmanifold& P, const char* what) {
  if (!P.ambient.is_euclidean()) throw InvalidArgument(std::string(what) + " needs a Euclidean ambient");
}

// Delta^h_P <X, a> = <Hh, a> + <grad h, a>.
inline IdentityCheck height_laplacian(const ImmersedSubmanifold& P, const Vec& u, const Vec& a) {
  require_euclidean(P, "height_laplacian");
  GeometrySample s = geometry_at(P, u);
  ScalarJet F{s.x.dot(a), a, Mat::Zero(P.m(), P.m())};
  double direct = weighted_laplacian(P, s, pullback(s.jet, F));
  return make_check(s.Hh.dot(a) + s.grad_h.dot(a), direct);
}

// With R^m = R^k x R^{m-k} and v = |x|^2/2 on the first factor:
// Delta^h_P v = sum_i |e_i^l|^2 + <grad h, X> + <Hh, X>, X = (x, 0).
inline IdentityCheck cylinder_distance_laplacian(const ImmersedSubmanifold& P, const Vec& u, int k) {
  require_euclidean(P, "cylinder_distance_laplacian");
  const int m = P.m();
  if (k < 1 || k > m) throw InvalidArgument("splitting dimension out of range");
  GeometrySample s = geometry_at(P, u);
  Vec X = Vec::Zero(m);
  X.head(k) = s.x.head(k);
  Mat Pk = Mat::Zero(m, m);
  Pk.topLeftCorner(k, k).setIdentity();
  Mat Jl = Pk * s.jet.J;
  double horizontal = (s.ginv * (Jl.transpose() * Jl)).trace();
  double direct = weighted_laplacian(P, s, pullback(s.jet, ScalarJet{0.5 * X.squaredNorm(), X, Pk}));
  return make_check(horizontal + s.grad_h.dot(X) + s.Hh.dot(X), direct);
}

struct AngleCheck : IdentityCheck {
  double constant_mc_formula = 0.0;  // {Hess eta(n,n) + mu''(theta^2-1) - |sigma|^2} theta
  double transport = 0.0;            // -<grad_P H^h, grad_P pi>
  double theta = 0.0;
};

// Weighted Laplacian of theta = <N, d_t> on a hypersurface of R^{m-1} x R
// with weight eta(x) + mu(t). The constant-mean-curvature formula is completed
// by the transport term, which vanishes when H^h is constant.
inline AngleCheck angle_function_laplacian(const ImmersedSubmanifold& P, const Vec& u) {
  require_euclidean(P, "angle_function_laplacian");
  const int m = P.m();
  if (P.n() != m - 1) throw InvalidArgument("angle function needs a hypersurface");
  GeometrySample s = geometry_at(P, u);
  for (int i = 0; i + 1 < m; ++i)
    if (std::abs(s.hess_h(i, m - 1)) > 1e-12) throw InvalidArgument("weight is not of the form eta(x) + mu(t)");
  const Vec& N = s.normals[0];
  double theta = N(m - 1);
  Vec hor = N;
  hor(m - 1) = 0.0;
  double hess_eta = hor.dot(s.hess_h * hor);
  double mu2 = s.hess_h(m - 1, m - 1);

  auto theta_at = [&P, m](const Vec& v) { return geometry_at(P, v).normals[0](m - 1); };
  auto Hh_at = [&P](const Vec& v) {
    GeometrySample q = geometry_at(P, v);
    return q.Hh.dot(q.normals[0]);
  };
  double direct = weighted_laplacian(P, s, fd_jet(theta_at, u));
  ParamJet Hj = fd_jet(Hh_at, u, 1e-3);
  Vec dpi = s.jet.J.row(m - 1).transpose();
  AngleCheck out;
  out.theta = theta;
  out.constant_mc_formula = (hess_eta + mu2 * (theta * theta - 1.0) - s.sigma_sq) * theta;
  out.transport = -Hj.grad.dot(s.ginv * dpi);
  out.formula = out.constant_mc_formula + out.transport;
  out.direct = direct;
  out.residual = std::abs(out.formula - out.direct);
  return out;
}

// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(int k, std::vector<double>& x, std::vector<double>& w) {
  x.assign(k, 0.0);
  w.assign(k, 0.0);
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= k; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = k * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[k - 1 - i] = z;
    w[i] = w[k - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

struct TestFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // optional; central differences otherwise

  Vec grad(const Vec& u) const {
    if (gradient) return gradient(u);
    int n = static_cast<int>(u.size());
    Vec g(n);
    double h = 1e-5 * (1.0 + u.norm());
    for (int i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n);
      e(i) = h;
      g(i) = (-value(u + 2 * e) + 8 * value(u + e) - 8 * value(u - e) + value(u - 2 * e)) / (12 * h);
    }
    return g;
  }
};

// Q_h(u,u) = int_P { |grad_P u|^2 - (Ric_h(N,N) + |sigma|^2) u^2 } da_h with
// Ric_h = -Hess h, by tensor Gauss-Legendre quadrature over the box.
inline double index_form(const ImmersedSubmanifold& P, const TestFunction& test, const ParamBox& support, int nodes = 48) {
  require_euclidean(P, "index_form");
  const int n = P.n();
  if (n != P.m() - 1) throw InvalidArgument("index form needs a two-sided hypersurface");
  bool whole = P.compact && support.same(P.domain);
  if (!whole)
    for (const Vec& u : grid_points(support, 4096, 9))
      for (int i = 0; i < n; ++i)
        for (double edge : {support.lo(i), support.hi(i)}) {
          Vec v = u;
          v(i) = edge;
          double t = test.value(v);
          if (std::abs(t) > 1e-10)
            throw SupportError("test function is " + ast::format_number(t) + " on the boundary of its support box");
        }
  std::vector<double> gx, gw;
  gauss_legendre(nodes, gx, gw);
  std::vector<int> idx(n, 0);
  double total = 0.0;
  while (true) {
    Vec u(n);
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      double half = 0.5 * (support.hi(i) - support.lo(i));
      u(i) = support.lo(i) + half * (gx[idx[i]] + 1.0);
      weight *= half * gw[idx[i]];
    }
    double v = test.value(u);
    Vec dv = test.grad(u);
    GeometrySample s = geometry_at(P, u);
    const Vec& N = s.normals[0];
    double ric = -N.dot(s.hess_h * N);
    double integrand = dv.dot(s.ginv * dv) - (ric + s.sigma_sq) * v * v;
    total += weight * integrand * std::exp(s.h) * std::sqrt(s.g.determinant());
    int i = 0;
    while (i < n && ++idx[i] == nodes) idx[i++] = 0;
    if (i == n) break;
  }
  return total;
}

// |Hh| in the ambient metric.
inline double weighted_mean_curvature_norm(const GeometrySample& s) { return std::sqrt(s.inner(s.Hh, s.Hh)); }

}  // namespace wparab
