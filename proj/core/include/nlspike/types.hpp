#pragma once

#include <Eigen/Dense>

namespace nlspike {

/// Dense row-major storage; every matrix in the library is built by rows.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace nlspike
