#pragma once

#include <Eigen/Dense>

namespace dextra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace dextra
