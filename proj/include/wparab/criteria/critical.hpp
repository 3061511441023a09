#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "wparab/geometry/ambient.hpp"
#include "wparab/radial/roots.hpp"

namespace wparab {

// H^h of S^{k-1}_t x R^{m-k} under h = -|x|^2/2 + xi(|x_horizontal|):
// (k-1)/t - t + xi'(t). `lead` overrides k-1 (the n-dimensional variant).
inline double cylinder_weighted_mc(int k, const RadialProfile& xi, double t, std::optional<int> lead = std::nullopt) {
  if (!(t > 0)) throw DomainError("cylinder radius must be positive");
  if (k < 2) throw InvalidArgument("cylinder needs k >= 2");
  double a = lead ? *lead : k - 1;
  return a / t - t + xi.d1(t);
}

// Radius where cylinder_weighted_mc equals lambda.
inline double critical_cylinder_radius(int k, const RadialProfile& xi, double lambda = 0.0, std::optional<int> lead = std::nullopt,
                                       double cap = 1e6) {
  auto g = [&](double t) { return cylinder_weighted_mc(k, xi, t, lead) - lambda; };
  double lo = std::max(1e-6, 2.0 * xi.t_min()), hi = 1.0;
  if (hi <= lo) hi = 2.0 * lo;
  auto br = expand_bracket(g, lo, hi, cap);
  return find_root(g, br.first, br.second, 1e-15);
}

struct HyperplaneCurvature {
  double value = 0.0;   // at the requested point
  double spread = 0.0;  // max - min over the constancy probe
  int samples = 0;
};

// H^h of L_t = {<x, a> = t} with respect to the normal a, for h = f(|x|) + g:
// -(f'(r)/r) t - dg/da.
inline HyperplaneCurvature hyperplane_weighted_mc(const RadialProfile& f, const std::optional<AmbientWeight>& g, const Vec& a,
                                                  double t, const Vec& p, int probe = 64, std::uint64_t seed = 7) {
  const int m = static_cast<int>(a.size());
  if (std::abs(a.norm() - 1.0) > 1e-12) throw InvalidArgument("hyperplane normal must be a unit vector");
  if (p.size() != m || std::abs(p.dot(a) - t) > 1e-9 * (1.0 + std::abs(t))) throw InvalidArgument("point is not on the hyperplane");
  auto at = [&](const Vec& x) {
    double v = 0.0;
    double r = x.norm();
    RadialSample s = f.sample(std::max(r, 1e-300));
    if (s.d1 != 0.0) {
      if (r == 0.0) throw DomainError("radial part is not differentiable at the origin");
      v -= s.d1 / r * t;
    }
    if (g) v -= g->jet(x).grad.dot(a);
    return v;
  };
  HyperplaneCurvature out;
  out.value = at(p);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double lo = out.value, hi = out.value;
  for (int i = 0; i < probe; ++i) {
    Vec x = Vec::Zero(m);
    for (int k = 0; k < m; ++k) x(k) = U(rng);
    x += (t - x.dot(a)) * a;
    double v = at(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++out.samples;
  }
  out.spread = hi - lo;
  return out;
}

}  // namespace wparab
