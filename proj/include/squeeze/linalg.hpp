#pragma once

#include <Eigen/Dense>

namespace squeeze::linalg {

using Mat8 = Eigen::Matrix<double, 8, 8>;

// Scaling-and-squaring Pade exponential.
Eigen::Matrix4d expm(const Eigen::Matrix4d& m);
Mat8 expm(const Mat8& m);

template <typename M>
M symmetrized(const M& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace squeeze::linalg
