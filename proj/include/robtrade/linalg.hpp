#pragma once

#include <Eigen/Dense>

namespace robtrade {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace robtrade
