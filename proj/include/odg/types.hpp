#pragma once

#include <Eigen/Dense>

namespace odg {

// Points and small matrices in dimension 2 or 3. The fixed maximum size keeps
// them on the stack.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

}  // namespace odg
