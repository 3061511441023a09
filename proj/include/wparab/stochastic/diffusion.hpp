#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "wparab/geometry/submanifold.hpp"

namespace wparab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-path generator derived from (master seed, path index) only.
inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

struct DiffusionSpec {
  ImmersedSubmanifold P;
  double dt = 0.0;  // 0: 1e-4 (R - rho)^2 per run
  std::uint64_t seed = 1;
  int workers = 1;
  double max_time = 0.0;  // 0: 50 R^2
};

// Drift and diffusion of the process generated by Delta^h_P in the chart:
// b^k = -g^ij Gamma^k_ij + g^kj d_j(h o X), sigma sigma^T = 2 g^{-1}.
struct LocalCoefficients {
  Vec x;
  double r = 0.0;
  Vec drift;
  Mat sigma;
  double grad_P_r_sq = 0.0;
};

class Diffusion {
 public:
  explicit Diffusion(DiffusionSpec spec) : spec_(std::move(spec)) { detect_affine(); }

  const DiffusionSpec& spec() const { return spec_; }
  const ImmersedSubmanifold& P() const { return spec_.P; }
  bool affine() const { return affine_; }

  Vec position(const Vec& u) const { return affine_ ? Vec(x0_ + J_ * (u - u0_)) : spec_.P.chart.position(u); }
  double radius(const Vec& u) const { return spec_.P.ambient.radius_jet(position(u)).value; }

  LocalCoefficients coefficients(const Vec& u) const {
    const Ambient& A = spec_.P.ambient;
    const int n = spec_.P.n();
    LocalCoefficients c;
    if (affine_) {
      c.x = x0_ + J_ * (u - u0_);
      c.sigma = sigma_;
      c.drift = zero_weight_ ? Vec(Vec::Zero(n)) : Vec(ginv_ * (J_.transpose() * A.weight().jet(c.x).grad));
      ScalarJet r = A.radius_jet(c.x);
      c.r = r.value;
      Vec dr = J_.transpose() * r.grad;
      c.grad_P_r_sq = dr.dot(ginv_ * dr);
      return c;
    }
    ChartJet jet = spec_.P.chart.jet(u);
    c.x = jet.x;
    Mat g = jet.J.transpose() * A.metric(jet.x) * jet.J;
    Mat ginv = g.inverse();
    Vec dh = jet.J.transpose() * A.weight_jet(jet.x).grad;
    c.drift = ginv * dh;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec a = jet.H[i][j] + A.christoffel(jet.x, jet.J.col(i), jet.J.col(j));
        Vec low(n);
        for (int l = 0; l < n; ++l) low(l) = A.inner(jet.x, a, jet.J.col(l));
        c.drift -= ginv(i, j) * (ginv * low);
      }
    c.sigma = factor(ginv);
    ScalarJet r = A.radius_jet(jet.x);
    c.r = r.value;
    Vec dr = jet.J.transpose() * r.grad;
    c.grad_P_r_sq = dr.dot(ginv * dr);
    return c;
  }

  // Symmetric square root of 2 g^{-1}.
  static Mat factor(const Mat& ginv) {
    Eigen::SelfAdjointEigenSolver<Mat> es(2.0 * ginv);
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  }

 private:
  DiffusionSpec spec_;
  bool affine_ = false, zero_weight_ = false;
  Vec u0_, x0_;
  Mat J_, ginv_, sigma_;

  void detect_affine() {
    const ImmersedSubmanifold& P = spec_.P;
    if (!P.ambient.is_euclidean()) return;
    const ParamBox& b = P.sample_box;
    std::vector<Vec> probes = {b.lo + 0.5 * (b.hi - b.lo), b.lo + 0.2 * (b.hi - b.lo), b.lo + 0.9 * (b.hi - b.lo)};
    probes[2](0) = b.lo(0) + 0.35 * (b.hi(0) - b.lo(0));
    ChartJet ref = P.chart.jet(probes[0]);
    for (const Vec& u : probes) {
      ChartJet j = P.chart.jet(u);
      if ((j.J - ref.J).cwiseAbs().maxCoeff() > 1e-14) return;
      for (int i = 0; i < P.n(); ++i)
        for (int k = 0; k < P.n(); ++k)
          if (j.H[i][k].cwiseAbs().maxCoeff() > 1e-14) return;
    }
    affine_ = true;
    u0_ = probes[0];
    x0_ = ref.x;
    J_ = ref.J;
    ginv_ = Mat(J_.transpose() * J_).inverse();
    sigma_ = factor(ginv_);
    zero_weight_ = P.ambient.weight().label() == "0";
  }
};

struct HitEstimate {
  double p = 0.0;
  long N = 0, hits = 0, misses = 0, censored = 0, chart_exits = 0;
  double ci_lo = 0.0, ci_hi = 1.0;  // Wilson 95%
  double se = 0.0;
  double mean_exit_time = 0.0;
  double dt = 0.0;
  double large_step_fraction = 0.0;
  bool resolution_warning = false;
  long bridge_crossings = 0;  // crossings detected between grid points
};

inline void wilson(long k, long N, double& lo, double& hi) {
  const double z = 1.959963984540054;
  if (N == 0) {
    lo = 0.0;
    hi = 1.0;
    return;
  }
  double p = double(k) / N, z2 = z * z / N;
  double centre = (p + z2 / 2.0) / (1.0 + z2);
  double half = z * std::sqrt(p * (1.0 - p) / N + z * z / (4.0 * double(N) * N)) / (1.0 + z2);
  lo = std::max(0.0, centre - half);
  hi = std::min(1.0, centre + half);
}

namespace detail {

enum class PathEnd : std::uint8_t { inner, outer, censored, chart_exit };

struct PathResult {
  PathEnd end = PathEnd::censored;
  bool bridge = false;
  double time = 0.0;
  long steps = 0, large_steps = 0;
};

inline PathResult run_path(const Diffusion& D, const Vec& start, double rho, double R, double dt, double max_time,
                           std::mt19937_64& rng) {
  PathResult out;
  const int n = D.P().n();
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  const double big = (R - rho) / 10.0, sq = std::sqrt(dt);
  Vec u = start;
  LocalCoefficients c = D.coefficients(u);
  if (c.r <= rho) {
    out.end = PathEnd::inner;
    return out;
  }
  if (c.r >= R) {
    out.end = PathEnd::outer;
    return out;
  }
  Vec xi(n);
  while (out.time < max_time) {
    for (int i = 0; i < n; ++i) xi(i) = normal(rng);
    Vec v = u + dt * c.drift + sq * (c.sigma * xi);
    ++out.steps;
    if (!D.P().domain.interior(v)) {
      out.end = PathEnd::chart_exit;
      return out;
    }
    LocalCoefficients d = D.coefficients(v);
    if (std::abs(d.r - c.r) > big) ++out.large_steps;
    if (d.r <= rho) {
      out.end = PathEnd::inner;
      out.time += dt * (c.r - rho) / (c.r - d.r);
      return out;
    }
    if (d.r >= R) {
      out.end = PathEnd::outer;
      out.time += dt * (R - c.r) / (d.r - c.r);
      return out;
    }
    // Brownian-bridge probability of an unseen excursion across either boundary.
    double q = 2.0 * c.grad_P_r_sq * dt;
    if (q > 0) {
      double p_in = std::exp(-2.0 * (c.r - rho) * (d.r - rho) / q);
      double p_out = std::exp(-2.0 * (R - c.r) * (R - d.r) / q);
      double w = uniform(rng);
      if (w < p_in) {
        out.end = PathEnd::inner;
        out.bridge = true;
        out.time += 0.5 * dt;
        return out;
      }
      if (w < p_in + p_out) {
        out.end = PathEnd::outer;
        out.bridge = true;
        out.time += 0.5 * dt;
        return out;
      }
    }
    out.time += dt;
    u = v;
    c = std::move(d);
  }
  out.end = PathEnd::censored;
  return out;
}

}  // namespace detail

// Fraction of paths from `start` reaching {r <= rho} before {r >= R}.
inline HitEstimate hit_probability(const Diffusion& D, const Vec& start, double rho, double R, long N) {
  if (!(rho > 0 && rho < R)) throw InvalidArgument("need 0 < rho < R");
  if (N <= 0) throw InvalidArgument("path count must be positive");
  const DiffusionSpec& s = D.spec();
  double dt = s.dt > 0 ? s.dt : 1e-4 * (R - rho) * (R - rho);
  double max_time = s.max_time > 0 ? s.max_time : 50.0 * R * R;
  std::vector<detail::PathResult> res(N);
  int workers = std::max(1, s.workers);
  auto work = [&](int w) {
    for (long i = w; i < N; i += workers) {
      std::mt19937_64 rng = path_rng(s.seed, static_cast<std::uint64_t>(i));
      res[i] = detail::run_path(D, start, rho, R, dt, max_time, rng);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  HitEstimate e;
  e.N = N;
  e.dt = dt;
  long steps = 0, large = 0;
  double sum = 0.0, comp = 0.0;
  for (const auto& r : res) {
    switch (r.end) {
      case detail::PathEnd::inner: ++e.hits; break;
      case detail::PathEnd::outer: ++e.misses; break;
      case detail::PathEnd::censored: ++e.censored; break;
      case detail::PathEnd::chart_exit: ++e.chart_exits; break;
    }
    e.bridge_crossings += r.bridge;
    steps += r.steps;
    large += r.large_steps;
    double y = r.time - comp, t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  e.p = double(e.hits) / N;
  e.se = std::sqrt(e.p * (1.0 - e.p) / N);
  wilson(e.hits, N, e.ci_lo, e.ci_hi);
  e.mean_exit_time = sum / N;
  e.large_step_fraction = steps ? double(large) / steps : 0.0;
  e.resolution_warning = e.large_step_fraction > 0.01;
  return e;
}

struct GeneratorCheck {
  double empirical = 0.0;
  double exact = 0.0;
  double se = 0.0;
  double dt = 0.0;
};

// Antithetic one-step estimate of (E psi(X_dt) - psi) / dt against Delta^h_P psi.
inline GeneratorCheck generator_check(const Diffusion& D, const Vec& u, const AmbientWeight& psi, long N, double dt,
                                      std::uint64_t seed = 1) {
  const ImmersedSubmanifold& P = D.P();
  GeometrySample s = geometry_at(P, u);
  GeneratorCheck out;
  out.dt = dt;
  out.exact = weighted_laplacian(P, s, pullback(s.jet, psi.jet(s.x)), IntrinsicChristoffel::gauss_formula);
  LocalCoefficients c = D.coefficients(u);
  double base = psi.jet(c.x).value;
  std::normal_distribution<double> normal;
  const int n = P.n();
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < N; ++i) {
    std::mt19937_64 rng = path_rng(seed, static_cast<std::uint64_t>(i));
    Vec xi(n);
    for (int k = 0; k < n; ++k) xi(k) = normal(rng);
    Vec step = std::sqrt(dt) * (c.sigma * xi);
    Vec mean = u + dt * c.drift;
    double a = psi.jet(D.position(mean + step)).value, b = psi.jet(D.position(mean - step)).value;
    double y = (0.5 * (a + b) - base) / dt;
    sum += y;
    sum2 += y * y;
  }
  out.empirical = sum / N;
  out.se = std::sqrt(std::max(0.0, sum2 / N - out.empirical * out.empirical) / N);
  return out;
}

}  // namespace wparab
