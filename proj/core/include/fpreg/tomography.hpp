#pragma once

/**
 * @file tomography.hpp
 * @brief Classical-shadow process tomography on the triplet subspace.
 *
 * A Choi matrix is stored as Lambda(3a + j, 3b + l) = E(|a><b|)_{jl}, so that
 * E(rho) = Tr_1((rho^T (x) I) Lambda).
 */

#include "fpreg/spin1.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace fpreg::tomography {

using Channel = std::function<Mat3(const Mat3&)>;
using RotationSet = std::vector<TripletRotation>;
using Real9 = Eigen::Matrix<double, 9, 9>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

Choi choi_of_channel(const Channel& channel);
Choi choi_of_unitary(const Mat3& u);
Mat3 apply_choi(const Choi& choi, const Mat3& rho);

/// Coordinates of a Hermitian matrix in an orthonormal (Hilbert-Schmidt) Hermitian basis.
Vec9 hermitian_to_vec(const Mat3& h);
Mat3 vec_to_hermitian(const Vec9& v);

/// M_L and M_R as 9x9 real maps on Hermitian matrices, with inverses.
struct MChannels {
  Real9 left;
  Real9 left_inverse;
  Real9 right;
  Real9 right_inverse;
  double left_condition = 0.0;
  double right_condition = 0.0;

  Mat3 apply_left(const Mat3& rho) const;
  Mat3 apply_left_inverse(const Mat3& rho) const;
  Mat3 apply_right(const Mat3& rho) const;
  Mat3 apply_right_inverse(const Mat3& rho) const;
};

inline constexpr double kMaxCondition = 1e8;

/// kInformationallyIncomplete if either map has condition number above kMaxCondition.
MChannels build_m_channels(const RotationSet& left, const RotationSet& right);

/// Precomputed single-shot estimator for fixed sets.
class ShadowEstimator {
 public:
  ShadowEstimator(RotationSet left, RotationSet right);

  const RotationSet& left() const noexcept { return left_; }
  const RotationSet& right() const noexcept { return right_; }
  const MChannels& channels() const noexcept { return m_; }
  std::size_t pairs() const noexcept { return left_.size() * right_.size(); }

  /// M_L^{-1}((U_L|1><1|U_L^dag)^T)
  const Mat3& left_image(std::size_t i) const { return left_images_[i]; }
  /// M_R^{-1}(U_R^dag |b><b| U_R), b by row index
  const Mat3& right_image(std::size_t j, int b_index) const { return right_images_[3 * j + b_index]; }

  /// Lambda-hat(U_L^i, U_R^j, b).
  Choi single_shot(std::size_t i, std::size_t j, int b) const;

 private:
  RotationSet left_;
  RotationSet right_;
  MChannels m_;
  std::vector<Mat3> left_images_;
  std::vector<Mat3> right_images_;
};

/// Born probabilities of b = 1, 0, -1 after U_L, E, U_R on |b=1>.
Eigen::Vector3d outcome_probabilities(const Mat3& u_left, const Choi& channel, const Mat3& u_right);

/// Sum over (i, j, b) of P(b|i,j) Lambda-hat / (|S_L||S_R|): the infinite-sample estimate.
Choi expected_estimate(const ShadowEstimator& est, const Choi& channel);

double choi_distance(const Choi& a, const Choi& b);  ///< ||a - b||_F / 9

double upper_bound_A(const ShadowEstimator& est);
double bound_B(const ShadowEstimator& est, const Choi& channel);
/// Variance decomposition C = B - sum_ij ||sum_b P f_ij(b)||^2 / (81 |S_L||S_R|).
double sample_complexity(const ShadowEstimator& est, const Choi& channel);

enum class NoiseMode { kBiased, kUnbiased };

struct NoiseSpec {
  double sigma = 0.0;
  NoiseMode mode = NoiseMode::kUnbiased;
  std::uint64_t seed = 0;
};

/// Counter-based generator: a SplitMix64 hash of the key words.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                           std::uint64_t d = 0);
/// Uniform double in [0, 1) from a hash value.
double to_unit(std::uint64_t h);
/// Two independent standard normals for a key (Box-Muller).
std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                  std::uint64_t c = 0, std::uint64_t d = 0);

/// Adds sigma * (z_alpha, z_phi) to (alpha, phi). `key` names the draw: the rotation
/// for biased noise, the (rotation, shot) pair for unbiased noise.
TripletRotation apply_noise(const TripletRotation& r, const NoiseSpec& noise, std::uint64_t key);

/// Dephasing form of averaged alpha noise: rho' + sigma^2 (K rho' K - {K^2, rho'}/2),
/// rho' = U rho U^dag, K = n . J. Equals (1 - sigma^2) rho' + sigma^2 K rho' K when K^2 = I.
Mat3 dephased_rotation(const TripletRotation& r, double sigma, const Mat3& rho);

struct TomographyRun {
  Choi estimate;
  double delta = 0.0;
  std::uint64_t shots = 0;
};

/// Shadow tomography with `shots_per_pair` Born samples per setting pair.
TomographyRun run_tomography(const ShadowEstimator& est, const Choi& channel,
                             std::uint64_t shots_per_pair, std::uint64_t seed,
                             const std::optional<NoiseSpec>& noise = std::nullopt);

/// Infinite-sample delta under rotation noise. Unbiased noise is averaged
/// exactly over the Gaussian offsets with `nodes`-point Gauss-Hermite quadrature
/// per offset; biased noise uses the frozen offsets of `noise.seed`.
double noise_plateau(const ShadowEstimator& est, const Choi& channel, const NoiseSpec& noise,
                     int nodes = 5);

}  // namespace fpreg::tomography
