#include "fpreg/spin1.hpp"

#include "fpreg/error.hpp"

#include <cmath>

namespace fpreg::tomography {

const std::array<Mat3, 3>& spin1_generators() {
  static const std::array<Mat3, 3> gens = [] {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i = kI;
    Mat3 jx;
    jx << 0, r, 0, r, 0, r, 0, r, 0;
    Mat3 jy;
    jy << 0, -i * r, 0, i * r, 0, -i * r, 0, i * r, 0;
    Mat3 jz;
    jz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
    return std::array<Mat3, 3>{jx, jy, jz};
  }();
  return gens;
}

Mat3 axis_generator(const TripletRotation& r) {
  const auto& j = spin1_generators();
  return std::sin(r.theta) * std::cos(r.phi) * j[0] + std::sin(r.theta) * std::sin(r.phi) * j[1] +
         std::cos(r.theta) * j[2];
}

Mat3 rotation_unitary(const TripletRotation& r) {
  const Mat3 k = axis_generator(r);
  return Mat3::Identity() - kI * std::sin(r.alpha) * k + (std::cos(r.alpha) - 1.0) * (k * k);
}

int outcome_index(int b) {
  if (b < -1 || b > 1) throw Error(ErrorKind::kInvalidArgument, "triplet outcome must be 1, 0 or -1");
  return 1 - b;
}

int outcome_value(int index) {
  if (index < 0 || index > 2) throw Error(ErrorKind::kInvalidArgument, "triplet index must be 0..2");
  return 1 - index;
}

int outcome_from_two_qubit(int two_qubit_index) {
  switch (two_qubit_index) {
    case 0: return 1;
    case 1:
    case 2: return 0;
    case 3: return -1;
    default: throw Error(ErrorKind::kInvalidArgument, "two-qubit outcome must be 0..3");
  }
}

Eigen::Matrix<Complex, 4, 3> triplet_embedding() {
  Eigen::Matrix<Complex, 4, 3> e = Eigen::Matrix<Complex, 4, 3>::Zero();
  e(0, 0) = 1.0;
  e(1, 1) = e(2, 1) = 1.0 / std::sqrt(2.0);
  e(3, 2) = 1.0;
  return e;
}

Mat3 restrict_to_triplet(const LogicalMatrix& u) {
  const auto e = triplet_embedding();
  return e.adjoint() * u * e;
}

Mat3 cz_on_triplet() {
  LogicalMatrix cz = LogicalMatrix::Identity();
  cz(3, 3) = -1.0;
  return restrict_to_triplet(cz);
}

}  // namespace fpreg::tomography
