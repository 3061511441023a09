#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "wparab/geometry/ambient.hpp"
#include "wparab/geometry/chart.hpp"

namespace wparab {

// Parametric immersion P^n -> ambient.
struct ImmersedSubmanifold {
  Ambient ambient;
  Chart chart;
  ParamBox domain;       // full parameter domain U
  ParamBox sample_box;   // away from chart singularities, used for random sampling
  bool compact = false;  // the chart covers a compact P up to a null set
  std::function<Vec(const ChartJet&)> normal_seed;  // optional preferred normal direction
  std::string label;

  int n() const { return chart.n(); }
  int m() const { return chart.m(); }
};

struct GeometrySample {
  Vec u;
  Vec x;
  ChartJet jet;
  Mat G;                    // ambient metric at x
  Mat g, ginv;              // induced metric
  double condition = 1.0;
  std::vector<Vec> normals;  // orthonormal normal frame
  std::array<std::array<Vec, kMaxDim>, kMaxDim> sigma;  // second fundamental form (normal-valued)
  double sigma_sq = 0.0;
  Vec nH;         // n * mean curvature vector
  Vec Hh;         // weighted mean curvature vector nH - (grad h)^perp
  double h = 0.0;
  Vec grad_h;     // ambient gradient of h (vector)
  Vec dh;         // covector
  Mat hess_h;     // coordinate second derivatives of h
  double r = 0.0;
  Vec grad_r;     // ambient gradient of r (vector)
  double grad_P_r_sq = 0.0;

  double inner(const Vec& a, const Vec& b) const { return a.dot(G * b); }
  Vec tangent_part(const Vec& v) const { return jet.J * (ginv * (jet.J.transpose() * (G * v))); }
  Vec normal_part(const Vec& v) const { return v - tangent_part(v); }
};

namespace detail {

inline double condition_number(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace detail

struct FrameOptions {
  bool use_declared_normal = true;
  bool reverse_axes = false;  // seed axes in reverse index order
};

inline GeometrySample geometry_at(const ImmersedSubmanifold& P, const Vec& u, FrameOptions fo = {}) {
  const Ambient& A = P.ambient;
  const int n = P.n(), m = P.m();
  GeometrySample s;
  s.u = u;
  s.jet = P.chart.jet(u);
  s.x = s.jet.x;
  const Mat& J = s.jet.J;
  s.G = A.metric(s.x);
  s.g = J.transpose() * s.G * J;
  s.condition = detail::condition_number(s.g);
  if (!(s.condition <= 1e12))
    throw DegenerateMetricError("induced metric degenerate (condition " + ast::format_number(s.condition) + ")",
                                std::vector<double>(u.data(), u.data() + n));
  s.ginv = s.g.inverse();

  // Orthonormal normal frame by Gram-Schmidt against the tangent space.
  std::vector<Vec> seeds;
  if (fo.use_declared_normal && P.normal_seed) seeds.push_back(P.normal_seed(s.jet));
  for (int k = 0; k < m; ++k) seeds.push_back(axis(m, fo.reverse_axes ? m - 1 - k : k));
  for (const Vec& seed : seeds) {
    if (static_cast<int>(s.normals.size()) == m - n) break;
    double n0 = std::sqrt(s.inner(seed, seed));
    if (!(n0 > 0)) continue;
    Vec v = seed / n0;
    for (int pass = 0; pass < 2; ++pass) {
      v = s.normal_part(v);
      for (const Vec& N : s.normals) v -= s.inner(v, N) * N;
    }
    double nv = std::sqrt(s.inner(v, v));
    if (nv < 1e-8) continue;
    s.normals.push_back(v / nv);
  }
  if (static_cast<int>(s.normals.size()) != m - n)
    throw DegenerateMetricError("could not complete the normal frame", std::vector<double>(u.data(), u.data() + n));

  // Second fundamental form from ambient-covariant second derivatives.
  s.nH = Vec::Zero(m);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec a = s.jet.H[i][j] + A.christoffel(s.x, J.col(i), J.col(j));
      Vec nv = Vec::Zero(m);
      for (const Vec& N : s.normals) nv += s.inner(a, N) * N;
      s.sigma[i][j] = nv;
      s.sigma[j][i] = nv;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.nH += s.ginv(i, j) * s.sigma[i][j];
  double sq = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) sq += s.ginv(i, k) * s.ginv(j, l) * s.inner(s.sigma[i][j], s.sigma[k][l]);
  s.sigma_sq = sq;

  ScalarJet h = A.weight_jet(s.x);
  s.h = h.value;
  s.dh = h.grad;
  s.hess_h = h.hess;
  s.grad_h = A.raise(s.x, h.grad);
  Vec perp = Vec::Zero(m);
  for (const Vec& N : s.normals) perp += s.inner(s.grad_h, N) * N;
  s.Hh = s.nH - perp;

  ScalarJet r = A.radius_jet(s.x);
  s.r = r.value;
  s.grad_r = A.raise(s.x, r.grad);
  Vec dr = r.grad;
  Vec Jdr = J.transpose() * dr;
  s.grad_P_r_sq = Jdr.dot(s.ginv * Jdr);
  return s;
}

// Value, gradient and Hessian of a function on the parameter domain.
struct ParamJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

// Pull back an ambient scalar jet through the chart.
inline ParamJet pullback(const ChartJet& c, const ScalarJet& F) {
  int n = c.n();
  ParamJet p{F.value, c.J.transpose() * F.grad, Mat::Zero(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = c.J.col(i).dot(F.hess * c.J.col(j)) + F.grad.dot(c.H[i][j]);
      p.hess(i, j) = p.hess(j, i) = v;
    }
  return p;
}

// Jet of a function of u by central differences (five-point gradient,
// Richardson-extrapolated Hessian).
inline ParamJet fd_jet(const std::function<double(const Vec&)>& f, const Vec& u, double step = 2e-3) {
  int n = static_cast<int>(u.size());
  double h = step * (1.0 + u.norm());
  ParamJet p{f(u), Vec::Zero(n), Mat::Zero(n, n)};
  auto e = [n](int i, double t) {
    Vec v = Vec::Zero(n);
    v(i) = t;
    return v;
  };
  for (int i = 0; i < n; ++i) {
    double f1 = f(u + e(i, h)), fm1 = f(u - e(i, h)), f2 = f(u + e(i, 2 * h)), fm2 = f(u - e(i, 2 * h));
    p.grad(i) = (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
    p.hess(i, i) = (-f2 + 16 * f1 - 30 * p.value + 16 * fm1 - fm2) / (12 * h * h);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto cross = [&](double t) {
        return (f(u + e(i, t) + e(j, t)) - f(u + e(i, t) - e(j, t)) - f(u - e(i, t) + e(j, t)) + f(u - e(i, t) - e(j, t))) /
               (4 * t * t);
      };
      double v = (4.0 * cross(0.5 * h) - cross(h)) / 3.0;
      p.hess(i, j) = p.hess(j, i) = v;
    }
  return p;
}

enum class IntrinsicChristoffel { finite_difference, gauss_formula };

// Gamma^k_ij of the induced metric; result[k](i, j).
inline std::vector<Mat> intrinsic_christoffel(const ImmersedSubmanifold& P, const GeometrySample& s,
                                              IntrinsicChristoffel mode) {
  const int n = P.n();
  std::vector<Mat> gam(n, Mat::Zero(n, n));
  if (mode == IntrinsicChristoffel::gauss_formula) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec a = s.jet.H[i][j] + P.ambient.christoffel(s.x, s.jet.J.col(i), s.jet.J.col(j));
        Vec low(n);
        for (int l = 0; l < n; ++l) low(l) = s.inner(a, s.jet.J.col(l));
        Vec up = s.ginv * low;
        for (int k = 0; k < n; ++k) gam[k](i, j) = up(k);
      }
    return gam;
  }
  auto metric = [&](const Vec& v) {
    ChartJet c = P.chart.jet(v);
    return Mat(c.J.transpose() * P.ambient.metric(c.x) * c.J);
  };
  double h = 2e-3 * (1.0 + s.u.norm());
  std::vector<Mat> dg(n);  // dg[l] = d_l g
  for (int l = 0; l < n; ++l) {
    Vec e = Vec::Zero(n);
    e(l) = h;
    dg[l] = (-metric(s.u + 2 * e) + 8 * metric(s.u + e) - 8 * metric(s.u - e) + metric(s.u - 2 * e)) / (12 * h);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec low(n);
      for (int l = 0; l < n; ++l) low(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      Vec up = s.ginv * low;
      for (int k = 0; k < n; ++k) gam[k](i, j) = up(k);
    }
  return gam;
}

// Delta^h_P u = g^ij (d_ij u - Gamma^k_ij d_k u) + g^ij d_i(h o X) d_j u.
inline double weighted_laplacian(const ImmersedSubmanifold& P, const GeometrySample& s, const ParamJet& field,
                                 IntrinsicChristoffel mode = IntrinsicChristoffel::finite_difference) {
  const int n = P.n();
  std::vector<Mat> gam = intrinsic_christoffel(P, s, mode);
  Vec dhu = s.jet.J.transpose() * s.dh;
  double lap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double t = field.hess(i, j);
      for (int k = 0; k < n; ++k) t -= gam[k](i, j) * field.grad(k);
      lap += s.ginv(i, j) * (t + dhu(i) * field.grad(j));
    }
  return lap;
}

inline double weighted_laplacian(const ImmersedSubmanifold& P, const Vec& u, const ParamJet& field,
                                 IntrinsicChristoffel mode = IntrinsicChristoffel::finite_difference) {
  return weighted_laplacian(P, geometry_at(P, u), field, mode);
}

// Jet of psi(r o X).
inline ParamJet radial_field_jet(const ImmersedSubmanifold& P, const GeometrySample& s, const RadialProfile& psi) {
  ScalarJet r = P.ambient.radius_jet(s.x);
  RadialSample q = psi.sample(r.value);
  ScalarJet F{q.value, q.d1 * r.grad, q.d2 * r.grad * r.grad.transpose() + q.d1 * r.hess};
  return pullback(s.jet, F);
}

}  // namespace wparab
