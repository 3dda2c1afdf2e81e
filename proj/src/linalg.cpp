#include "squeeze/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace squeeze::linalg {

Eigen::Matrix4d expm(const Eigen::Matrix4d& m) { return m.exp(); }

Mat8 expm(const Mat8& m) { return m.exp(); }

}  // namespace squeeze::linalg
