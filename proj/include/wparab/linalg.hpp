#pragma once

#include <Eigen/Dense>

namespace wparab {

// Ambient and intrinsic dimensions stay small; fixed-capacity storage keeps
// the hot loops free of heap traffic.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline Vec zeros(int n) { return Vec::Zero(n); }

inline Vec axis(int n, int k) {
  Vec e = Vec::Zero(n);
  e(k) = 1.0;
  return e;
}

}  // namespace wparab
