#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace fpreg {

using Complex = std::complex<double>;

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Operator on the four-dimensional two-qubit logical space, ordered |00>, |01>, |10>, |11>.
using LogicalMatrix = Eigen::Matrix4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace fpreg
