#pragma once

#include "fpreg/types.hpp"

#include <array>

namespace fpreg::tomography {

using Mat3 = Eigen::Matrix3cd;
using Choi = Eigen::Matrix<Complex, 9, 9>;

/// Global rotation exp(-i alpha n(theta, phi) . J) on the triplet {|1>, |0>, |-1>}.
struct TripletRotation {
  double theta = kPi / 2;
  double phi = 0.0;
  double alpha = 0.0;
};

/// J_x, J_y, J_z in the (b = 1, 0, -1) ordering.
const std::array<Mat3, 3>& spin1_generators();

/// n . J for the rotation axis.
Mat3 axis_generator(const TripletRotation& r);

/// exp(-i alpha K) = I - i sin(alpha) K + (cos(alpha) - 1) K^2, valid since K^3 = K.
Mat3 rotation_unitary(const TripletRotation& r);

/// Row index of outcome b in the (1, 0, -1) ordering, and back.
int outcome_index(int b);
int outcome_value(int index);

/// Two-qubit readout |00>, |01>, |10>, |11> (index 0..3) mapped to b.
int outcome_from_two_qubit(int two_qubit_index);

/// Columns |b=1>, |b=0>, |b=-1> as two-qubit vectors.
Eigen::Matrix<Complex, 4, 3> triplet_embedding();

/// Restriction of a two-qubit operator to the triplet subspace.
Mat3 restrict_to_triplet(const LogicalMatrix& u);

/// CZ restricted to the triplet: diag(1, 1, -1).
Mat3 cz_on_triplet();

}  // namespace fpreg::tomography
