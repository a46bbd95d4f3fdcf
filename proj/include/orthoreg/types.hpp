#pragma once

#include <Eigen/Dense>

namespace orthoreg {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace orthoreg
