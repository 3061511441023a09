#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "wparab/error.hpp"
#include "wparab/radial/profile.hpp"
#include "wparab/radial/quadrature.hpp"

namespace wparab {

// Euclidean area of the unit sphere S^{m-1}.
inline double sphere_constant(int m) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

// Model space M^m_w with radial log-weight f: metric dt^2 + w(t)^2 dtheta^2,
// density e^{f(t)}.
class WeightedModel {
 public:
  WeightedModel(int m, RadialProfile w, RadialProfile f) : m_(m), w_(std::move(w)), f_(std::move(f)) {
    if (m < 2) throw InvalidArgument("model dimension must be >= 2");
    if (f_.t_min() == 0.0 && !f_.pole_singular()) {
      double fp = f_.d1(1e-6);
      if (std::abs(fp) > 1e-4)
        throw InvalidArgument("log-weight " + f_.label() + " has f'(0) != 0 (f'(1e-6)=" + ast::format_number(fp) +
                              "); mark it pole-singular or use t_min > 0");
    }
    c_m_ = sphere_constant(m);
  }

  int dim() const { return m_; }
  const WarpingFunction& w() const { return w_; }
  const RadialProfile& f() const { return f_; }
  double c_m() const { return c_m_; }

  // Infimum of radii where the weighted quantities are defined.
  double domain_start() const { return f_.t_min(); }
  bool pole_regular() const { return f_.t_min() == 0.0 && !f_.pole_singular(); }

  void require_domain(double t) const {
    if (!(t > f_.t_min()) || !(t > 0.0))
      throw DomainError("radius " + ast::format_number(t) + " outside the model domain (t_min=" + ast::format_number(f_.t_min()) + ")");
  }

  // A_h(S_t) = c_m w^{m-1} e^{f}
  double sphere_area(double t) const {
    require_domain(t);
    return c_m_ * std::pow(w_(t), m_ - 1) * std::exp(f_(t));
  }

  // log A_h(S_t); avoids overflow/underflow cancellation between w^{m-1} and e^f.
  double log_sphere_area(double t) const {
    require_domain(t);
    return std::log(c_m_) + (m_ - 1) * std::log(w_(t)) + f_(t);
  }
  double inverse_sphere_area(double t) const { return std::exp(-log_sphere_area(t)); }

  // V_h(B_t) = c_m int_0^t w^{m-1} e^f
  double ball_volume(double t, Tolerance tol = {}) const {
    if (!pole_regular()) throw DomainError("ball volume from the pole needs a weight regular at the pole (" + f_.label() + ")");
    if (!(t > 0)) throw DomainError("ball volume needs t > 0");
    auto g = [this](double s) { return std::pow(w_(s), m_ - 1) * std::exp(f_(s)); };
    return c_m_ * integrate(g, 0.0, t, tol).value;
  }

  // H(t) = w'/w, mean curvature of S_t.
  double mean_curvature(double t) const {
    if (!(t > 0)) throw DomainError("mean curvature needs t > 0");
    RadialSample s = w_.profile().sample(t);
    if (s.value == 0.0) throw DomainError("w vanishes at t=" + ast::format_number(t));
    return s.d1 / s.value;
  }

  // H^h_n(t) = n H(t) + f'(t)
  double weighted_mean_curvature(int n, double t) const {
    if (n < 1 || n > m_ - 1) throw InvalidArgument("weighted_mean_curvature: need 1 <= n <= m-1");
    require_domain(t);
    return n * mean_curvature(t) + f_.d1(t);
  }

  // sup |H| over 64 samples of [T, 2T].
  double mean_curvature_sup(double T, int samples = 64) const {
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) sup = std::max(sup, std::abs(mean_curvature(T * (1.0 + double(i) / (samples - 1)))));
    return sup;
  }

  std::string label() const {
    return "M^" + std::to_string(m_) + "(w=" + w_.profile().label() + ", f=" + f_.label() + ")";
  }

 private:
  int m_;
  WarpingFunction w_;
  RadialProfile f_;
  double c_m_ = 0.0;
};

namespace models {

inline WeightedModel euclidean(int m, RadialProfile f = profiles::zero()) { return {m, profiles::linear(), std::move(f)}; }
inline WeightedModel gaussian(int m) { return euclidean(m, profiles::gaussian()); }
inline WeightedModel antigaussian(int m) { return euclidean(m, profiles::antigaussian()); }
inline WeightedModel hyperbolic(int m, double kappa = -1.0, RadialProfile f = profiles::zero()) {
  return {m, profiles::hyperbolic(kappa), std::move(f)};
}

}  // namespace models

}  // namespace wparab
