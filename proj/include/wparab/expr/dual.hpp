#pragma once

#include <cmath>
#include <type_traits>

namespace wparab {

// Forward-mode dual number carrying one directional derivative. Nesting
// Dual<Dual<double>> yields second derivatives.
template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}
  template <class U>
    requires std::is_arithmetic_v<U>
  constexpr Dual(U c) : v(T(c)), d(T(0)) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }
  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
};

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) { return primal(x.v); }

template <class T>
Dual<T> sin(const Dual<T>& x) { using std::sin; using std::cos; return {sin(x.v), cos(x.v) * x.d}; }
template <class T>
Dual<T> cos(const Dual<T>& x) { using std::sin; using std::cos; return {cos(x.v), -sin(x.v) * x.d}; }
template <class T>
Dual<T> sinh(const Dual<T>& x) { using std::sinh; using std::cosh; return {sinh(x.v), cosh(x.v) * x.d}; }
template <class T>
Dual<T> cosh(const Dual<T>& x) { using std::sinh; using std::cosh; return {cosh(x.v), sinh(x.v) * x.d}; }
template <class T>
Dual<T> tanh(const Dual<T>& x) {
  using std::tanh;
  T th = tanh(x.v);
  return {th, (T(1) - th * th) * x.d};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  return {e, e * x.d};
}
template <class T>
Dual<T> log(const Dual<T>& x) { using std::log; return {log(x.v), x.d / x.v}; }
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.v);
  return {s, x.d / (T(2) * s)};
}
template <class T>
Dual<T> abs(const Dual<T>& x) {
  double p = primal(x.v);
  if (p > 0) return x;
  if (p < 0) return -x;
  return {x.v, T(0)};
}
template <class T>
Dual<T> pow(const Dual<T>& x, double c) {
  using std::pow;
  if (c == 0.0) return Dual<T>(1.0);
  return {pow(x.v, c), T(c) * pow(x.v, c - 1.0) * x.d};
}
template <class T>
Dual<T> acos(const Dual<T>& x) {
  using std::acos;
  using std::sqrt;
  return {acos(x.v), -x.d / sqrt(T(1) - x.v * x.v)};
}
template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}

using D1 = Dual<double>;
using D2 = Dual<Dual<double>>;

// Seed for second derivatives along directions (i, j): value, d_j, d_i, d_i d_j.
inline D2 seed2(double x, double di, double dj) { return D2(D1(x, dj), D1(di, 0.0)); }

}  // namespace wparab
