#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "wparab/expr/expr.hpp"
#include "wparab/linalg.hpp"
#include "wparab/model/model.hpp"

namespace wparab {

// Value, coordinate gradient (covector) and coordinate second derivatives.
struct ScalarJet {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

// Log-density h on Euclidean space, as a function of Cartesian coordinates.
class AmbientWeight {
 public:
  using Evaluator = std::function<ScalarJet(const Vec&)>;

  AmbientWeight() = default;
  AmbientWeight(int m, Evaluator eval, std::string label, std::optional<RadialProfile> radial = std::nullopt)
      : m_(m), eval_(std::move(eval)), label_(std::move(label)), radial_(std::move(radial)) {}

  int dim() const { return m_; }
  ScalarJet jet(const Vec& x) const { return eval_(x); }
  const std::string& label() const { return label_; }
  // Set when h = f(|x|).
  const std::optional<RadialProfile>& radial() const { return radial_; }

 private:
  int m_ = 0;
  Evaluator eval_;
  std::string label_;
  std::optional<RadialProfile> radial_;
};

namespace weights {

inline AmbientWeight zero(int m) {
  return AmbientWeight(m, [m](const Vec&) { return ScalarJet{0.0, Vec::Zero(m), Mat::Zero(m, m)}; }, "0",
                       profiles::zero());
}

// h = f(|x|)
inline AmbientWeight radial(int m, RadialProfile f) {
  auto eval = [m, f](const Vec& x) {
    double r = x.norm();
    ScalarJet j{0.0, Vec::Zero(m), Mat::Zero(m, m)};
    if (r == 0.0) {
      double eps = std::max(1e-8, 2.0 * f.t_min());
      RadialSample s = f.sample(eps);
      j.value = s.value;
      j.hess = s.d2 * Mat::Identity(m, m);
      return j;
    }
    RadialSample s = f.sample(r);
    Vec e = x / r;
    j.value = s.value;
    j.grad = s.d1 * e;
    j.hess = s.d2 * e * e.transpose() + (s.d1 / r) * (Mat::Identity(m, m) - e * e.transpose());
    return j;
  };
  return AmbientWeight(m, eval, "radial(" + f.label() + ")", f);
}

inline AmbientWeight gaussian(int m) { return radial(m, profiles::gaussian()); }

// h = <a, x>
inline AmbientWeight linear(const Vec& a) {
  int m = static_cast<int>(a.size());
  return AmbientWeight(m, [a, m](const Vec& x) { return ScalarJet{a.dot(x), a, Mat::Zero(m, m)}; }, "linear");
}

// h = mu(x_k)
inline AmbientWeight coordinate(int m, int k, RadialProfile mu) {
  mu = mu.with_domain(-std::numeric_limits<double>::infinity(), false);
  auto eval = [m, k, mu](const Vec& x) {
    RadialSample s = mu.sample(x(k));
    ScalarJet j{s.value, Vec::Zero(m), Mat::Zero(m, m)};
    j.grad(k) = s.d1;
    j.hess(k, k) = s.d2;
    return j;
  };
  return AmbientWeight(m, eval, "x" + std::to_string(k + 1) + "->" + mu.label());
}

// h = xi(|(x_1..x_k)|)
inline AmbientWeight horizontal_radial(int m, int k, RadialProfile xi) {
  auto eval = [m, k, xi](const Vec& x) {
    Vec y = Vec::Zero(m);
    y.head(k) = x.head(k);
    double r = y.norm();
    RadialSample s = xi.sample(r);
    Mat Pk = Mat::Zero(m, m);
    Pk.topLeftCorner(k, k).setIdentity();
    Vec e = y / r;
    return ScalarJet{s.value, s.d1 * e, s.d2 * e * e.transpose() + (s.d1 / r) * (Pk - e * e.transpose())};
  };
  return AmbientWeight(m, eval, "horizontal(" + std::to_string(k) + "," + xi.label() + ")");
}

// h given by an expression in x1..xm.
inline AmbientWeight expression(const Expression& e) {
  int m = static_cast<int>(e.arity());
  auto eval = [e, m](const Vec& x) {
    ScalarJet j{0.0, Vec::Zero(m), Mat::Zero(m, m)};
    D2 in[kMaxDim];
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        for (int k = 0; k < m; ++k) in[k] = seed2(x(k), k == a ? 1.0 : 0.0, k == b ? 1.0 : 0.0);
        D2 y = e.eval<D2>(std::span<const D2>(in, m));
        j.value = y.v.v;
        j.grad(a) = y.d.v;
        j.grad(b) = y.v.d;
        j.hess(a, b) = j.hess(b, a) = y.d.d;
      }
    return j;
  };
  return AmbientWeight(m, eval, e.source());
}

inline AmbientWeight sum(const AmbientWeight& p, const AmbientWeight& q) {
  auto eval = [p, q](const Vec& x) {
    ScalarJet a = p.jet(x), b = q.jet(x);
    return ScalarJet{a.value + b.value, a.grad + b.grad, a.hess + b.hess};
  };
  return AmbientWeight(p.dim(), eval, "(" + p.label() + ")+(" + q.label() + ")");
}

}  // namespace weights

// Ambient manifold in coordinates: Euclidean space with a weight, or a
// weighted model in hyperspherical coordinates (t, theta_1..theta_{m-1}) with
// metric dt^2 + w^2 (dtheta_1^2 + sin^2 theta_1 dtheta_2^2 + ...).
class Ambient {
 public:
  static Ambient euclidean(int m, AmbientWeight h) {
    if (h.dim() != m) throw InvalidArgument("weight dimension mismatch");
    Ambient a;
    a.m_ = m;
    a.weight_ = std::move(h);
    return a;
  }
  static Ambient euclidean(int m) { return euclidean(m, weights::zero(m)); }
  static Ambient model_chart(const WeightedModel& M) {
    Ambient a;
    a.m_ = M.dim();
    a.model_ = M;
    return a;
  }

  int dim() const { return m_; }
  bool is_euclidean() const { return !model_.has_value(); }
  const WeightedModel* model() const { return model_ ? &*model_ : nullptr; }
  const AmbientWeight& weight() const { return weight_; }

  std::string label() const {
    return model_ ? "chart " + model_->label() : "R^" + std::to_string(m_) + "(h=" + weight_.label() + ")";
  }

  Mat metric(const Vec& x) const {
    if (!model_) return Mat::Identity(m_, m_);
    Vec d = diag(x);
    return d.asDiagonal();
  }

  double inner(const Vec& x, const Vec& a, const Vec& b) const {
    if (!model_) return a.dot(b);
    return (diag(x).array() * a.array() * b.array()).sum();
  }

  // Gamma(a, b)^k = Gamma^k_ij a^i b^j.
  Vec christoffel(const Vec& x, const Vec& a, const Vec& b) const {
    if (!model_) return Vec::Zero(m_);
    // With L_k = log g_kk the diagonal metric gives
    // Gamma(a,b)^k = 1/2 sum_i dL_k/dx_i (a_k b_i + a_i b_k) - 1/2 sum_i (g_ii/g_kk) dL_i/dx_k a_i b_i.
    Vec g = diag(x);
    Mat dL = log_metric_gradient(x);  // dL(k, i) = d L_k / d x_i
    Vec out = Vec::Zero(m_);
    for (int k = 0; k < m_; ++k) {
      double s = 0.0;
      for (int i = 0; i < m_; ++i) {
        s += 0.5 * dL(k, i) * (a(k) * b(i) + a(i) * b(k));
        s -= 0.5 * (g(i) / g(k)) * dL(i, k) * a(i) * b(i);
      }
      out(k) = s;
    }
    return out;
  }

  ScalarJet weight_jet(const Vec& x) const {
    if (!model_) return weight_.jet(x);
    RadialSample s = model_->f().sample(x(0));
    ScalarJet j{s.value, Vec::Zero(m_), Mat::Zero(m_, m_)};
    j.grad(0) = s.d1;
    j.hess(0, 0) = s.d2;
    return j;
  }

  // Distance to the pole, its coordinate gradient and coordinate second derivatives.
  ScalarJet radius_jet(const Vec& x) const {
    ScalarJet j{0.0, Vec::Zero(m_), Mat::Zero(m_, m_)};
    if (model_) {
      j.value = x(0);
      j.grad(0) = 1.0;
      return j;
    }
    double r = x.norm();
    if (r == 0.0) throw DomainError("radius is not differentiable at the pole");
    Vec e = x / r;
    j.value = r;
    j.grad = e;
    j.hess = (Mat::Identity(m_, m_) - e * e.transpose()) / r;
    return j;
  }

  // Mean curvature w'/w of the distance sphere of radius r.
  double sphere_mean_curvature(double r) const { return model_ ? model_->mean_curvature(r) : 1.0 / r; }

  // Vector field (raise index) of a covector.
  Vec raise(const Vec& x, const Vec& covector) const {
    if (!model_) return covector;
    return (covector.array() / diag(x).array()).matrix();
  }

 private:
  int m_ = 0;
  std::optional<WeightedModel> model_;
  AmbientWeight weight_;

  Vec diag(const Vec& x) const {
    Vec g = Vec::Ones(m_);
    double w = model_->w()(x(0));
    double s = w * w;
    for (int k = 1; k < m_; ++k) {
      g(k) = s;
      double sn = std::sin(x(k));
      s *= sn * sn;
    }
    return g;
  }

  Mat log_metric_gradient(const Vec& x) const {
    Mat dL = Mat::Zero(m_, m_);
    RadialSample w = model_->w().sample(x(0));
    for (int k = 1; k < m_; ++k) {
      dL(k, 0) = 2.0 * w.d1 / w.value;
      for (int j = 1; j < k; ++j) dL(k, j) = 2.0 * std::cos(x(j)) / std::sin(x(j));
    }
    return dL;
  }
};

}  // namespace wparab
