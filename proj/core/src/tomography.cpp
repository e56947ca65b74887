#include "fpreg/tomography.hpp"

#include "fpreg/error.hpp"
#include "gsl_guard.hpp"

#include <gsl/gsl_integration.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>

namespace fpreg::tomography {

Choi choi_of_channel(const Channel& channel) {
  Choi out = Choi::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Mat3 e = Mat3::Zero();
      e(a, b) = 1.0;
      out.block<3, 3>(3 * a, 3 * b) = channel(e);
    }
  return out;
}

Choi choi_of_unitary(const Mat3& u) {
  return choi_of_channel([&](const Mat3& rho) -> Mat3 { return u * rho * u.adjoint(); });
}

Mat3 apply_choi(const Choi& choi, const Mat3& rho) {
  // Tr_1((rho^T (x) I) Lambda) = sum_{a,b} rho_{ab} Lambda_{(a,.),(b,.)}
  Mat3 out = Mat3::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out += rho(a, b) * choi.block<3, 3>(3 * a, 3 * b);
  return out;
}

namespace {

const std::array<Mat3, 9>& hermitian_basis() {
  static const std::array<Mat3, 9> basis = [] {
    std::array<Mat3, 9> out;
    const double r = 1.0 / std::sqrt(2.0);
    int n = 0;
    for (int k = 0; k < 3; ++k) {
      out[n] = Mat3::Zero();
      out[n++](k, k) = 1.0;
    }
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k) {
        Mat3 s = Mat3::Zero();
        s(j, k) = s(k, j) = r;
        out[n++] = s;
        Mat3 a = Mat3::Zero();
        a(j, k) = Complex(0, -r);
        a(k, j) = Complex(0, r);
        out[n++] = a;
      }
    return out;
  }();
  return basis;
}

double condition_number(const Real9& m) {
  Eigen::SelfAdjointEigenSolver<Real9> eig(m, Eigen::EigenvaluesOnly);
  const double lo = std::abs(eig.eigenvalues()(0));
  const double hi = std::abs(eig.eigenvalues()(8));
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

Mat3 projector(const Mat3& u_dag_or_u, int b_index, bool conjugate_first) {
  // conjugate_first: U^dag |b><b| U, else U |b><b| U^dag
  const Eigen::Vector3cd col = conjugate_first ? Eigen::Vector3cd(u_dag_or_u.row(b_index).adjoint())
                                               : Eigen::Vector3cd(u_dag_or_u.col(b_index));
  return col * col.adjoint();
}

Mat3 left_state(const TripletRotation& r) { return projector(rotation_unitary(r), 0, false); }

Mat3 right_effect(const TripletRotation& r, int b_index) {
  return projector(rotation_unitary(r), b_index, true);
}

Mat3 apply_map(const Real9& m, const Mat3& rho) { return vec_to_hermitian(m * hermitian_to_vec(rho)); }

Choi kron(const Mat3& a, const Mat3& b) {
  Choi out;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) out.block<3, 3>(3 * i, 3 * k) = a(i, k) * b;
  return out;
}

Eigen::Vector3d probabilities_for_state(const Mat3& rho_in, const Choi& channel, const Mat3& u_right) {
  const Mat3 out = u_right * apply_choi(channel, rho_in) * u_right.adjoint();
  Eigen::Vector3d p;
  for (int b = 0; b < 3; ++b) p(b) = std::max(0.0, out(b, b).real());
  return p;
}

}  // namespace

Vec9 hermitian_to_vec(const Mat3& h) {
  const auto& basis = hermitian_basis();
  Vec9 v;
  for (int n = 0; n < 9; ++n) v(n) = (basis[n].adjoint() * h).trace().real();
  return v;
}

Mat3 vec_to_hermitian(const Vec9& v) {
  const auto& basis = hermitian_basis();
  Mat3 h = Mat3::Zero();
  for (int n = 0; n < 9; ++n) h += v(n) * basis[n];
  return h;
}

Mat3 MChannels::apply_left(const Mat3& rho) const { return apply_map(left, rho); }
Mat3 MChannels::apply_left_inverse(const Mat3& rho) const { return apply_map(left_inverse, rho); }
Mat3 MChannels::apply_right(const Mat3& rho) const { return apply_map(right, rho); }
Mat3 MChannels::apply_right_inverse(const Mat3& rho) const { return apply_map(right_inverse, rho); }

MChannels build_m_channels(const RotationSet& left, const RotationSet& right) {
  if (left.empty() || right.empty()) {
    throw Error(ErrorKind::kInformationallyIncomplete, "rotation sets must be non-empty");
  }
  MChannels m;
  m.left.setZero();
  for (const auto& r : left) {
    const Vec9 q = hermitian_to_vec(Mat3(left_state(r).transpose()));
    m.left += q * q.transpose();
  }
  m.left /= static_cast<double>(left.size());
  m.right.setZero();
  for (const auto& r : right) {
    for (int b = 0; b < 3; ++b) {
      const Vec9 q = hermitian_to_vec(right_effect(r, b));
      m.right += q * q.transpose();
    }
  }
  m.right /= static_cast<double>(right.size());
  m.left_condition = condition_number(m.left);
  m.right_condition = condition_number(m.right);
  if (!(m.left_condition <= kMaxCondition) || !(m.right_condition <= kMaxCondition)) {
    throw Error(ErrorKind::kInformationallyIncomplete,
                "rotation sets do not span the Hermitian operators (condition numbers " +
                    std::to_string(m.left_condition) + ", " + std::to_string(m.right_condition) + ")");
  }
  m.left_inverse = m.left.inverse();
  m.right_inverse = m.right.inverse();
  return m;
}

ShadowEstimator::ShadowEstimator(RotationSet left, RotationSet right)
    : left_(std::move(left)), right_(std::move(right)), m_(build_m_channels(left_, right_)) {
  for (const auto& r : left_) {
    left_images_.push_back(m_.apply_left_inverse(Mat3(left_state(r).transpose())));
  }
  for (const auto& r : right_) {
    for (int b = 0; b < 3; ++b) right_images_.push_back(m_.apply_right_inverse(right_effect(r, b)));
  }
}

Choi ShadowEstimator::single_shot(std::size_t i, std::size_t j, int b) const {
  return kron(left_image(i), right_image(j, outcome_index(b)));
}

Eigen::Vector3d outcome_probabilities(const Mat3& u_left, const Choi& channel, const Mat3& u_right) {
  const Eigen::Vector3cd psi = u_left.col(0);
  return probabilities_for_state(psi * psi.adjoint(), channel, u_right);
}

namespace {

template <class ProbFn>
Choi expected_with(const ShadowEstimator& est, ProbFn prob) {
  Choi sum = Choi::Zero();
  for (std::size_t i = 0; i < est.left().size(); ++i)
    for (std::size_t j = 0; j < est.right().size(); ++j) {
      const Eigen::Vector3d p = prob(i, j);
      Mat3 right = Mat3::Zero();
      for (int b = 0; b < 3; ++b) right += p(b) * est.right_image(j, b);
      sum += kron(est.left_image(i), right);
    }
  return sum / static_cast<double>(est.pairs());
}

}  // namespace

Choi expected_estimate(const ShadowEstimator& est, const Choi& channel) {
  return expected_with(est, [&](std::size_t i, std::size_t j) {
    return outcome_probabilities(rotation_unitary(est.left()[i]), channel,
                                 rotation_unitary(est.right()[j]));
  });
}

double choi_distance(const Choi& a, const Choi& b) { return (a - b).norm() / 9.0; }

double upper_bound_A(const ShadowEstimator& est) {
  double sum = 0.0;
  for (std::size_t i = 0; i < est.left().size(); ++i) {
    const double l = est.left_image(i).squaredNorm();
    for (std::size_t j = 0; j < est.right().size(); ++j) {
      double worst = 0.0;
      for (int b = 0; b < 3; ++b) worst = std::max(worst, est.right_image(j, b).squaredNorm());
      sum += l * worst;
    }
  }
  return sum / (81.0 * static_cast<double>(est.pairs()));
}

namespace {

struct Moments {
  double b = 0.0;
  double mean_sq = 0.0;
};

Moments setting_moments(const ShadowEstimator& est, const Choi& channel) {
  Moments m;
  for (std::size_t i = 0; i < est.left().size(); ++i) {
    const Mat3 ul = rotation_unitary(est.left()[i]);
    for (std::size_t j = 0; j < est.right().size(); ++j) {
      const Eigen::Vector3d p = outcome_probabilities(ul, channel, rotation_unitary(est.right()[j]));
      Choi mean = Choi::Zero();
      for (int b = 0; b < 3; ++b) {
        const Choi f = kron(est.left_image(i), est.right_image(j, b)) - channel;
        m.b += p(b) * f.squaredNorm();
        mean += p(b) * f;
      }
      m.mean_sq += mean.squaredNorm();
    }
  }
  const double norm = 81.0 * static_cast<double>(est.pairs());
  m.b /= norm;
  m.mean_sq /= norm;
  return m;
}

}  // namespace

double bound_B(const ShadowEstimator& est, const Choi& channel) { return setting_moments(est, channel).b; }

double sample_complexity(const ShadowEstimator& est, const Choi& channel) {
  const Moments m = setting_moments(est, channel);
  return m.b - m.mean_sq;
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           std::uint64_t d) {
  const auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (std::uint64_t w : {a, b, c, d}) h = mix(h ^ w);
  return h;
}

double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                  std::uint64_t d) {
  const std::uint64_t h1 = counter_hash(seed, a, b, c, d);
  const std::uint64_t h2 = counter_hash(h1, a, b, c, d);
  const double u1 = 1.0 - to_unit(h1);  // (0, 1]
  const double u2 = to_unit(h2);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

TripletRotation apply_noise(const TripletRotation& r, const NoiseSpec& noise, std::uint64_t key) {
  if (noise.sigma == 0.0) return r;
  const auto z = normal_pair(noise.seed, key, static_cast<std::uint64_t>(noise.mode));
  TripletRotation out = r;
  out.alpha += noise.sigma * z[0];
  out.phi += noise.sigma * z[1];
  return out;
}

Mat3 dephased_rotation(const TripletRotation& r, double sigma, const Mat3& rho) {
  const Mat3 u = rotation_unitary(r);
  const Mat3 k = axis_generator(r);
  const Mat3 k2 = k * k;
  const Mat3 rp = u * rho * u.adjoint();
  return rp + sigma * sigma * (k * rp * k - 0.5 * (k2 * rp + rp * k2));
}

namespace {

// Keys that keep left and right draws apart.
std::uint64_t biased_key(int role, std::size_t index) { return (static_cast<std::uint64_t>(role) << 32) | index; }

std::uint64_t unbiased_key(int role, std::size_t i, std::size_t j, std::uint64_t shot) {
  return counter_hash(static_cast<std::uint64_t>(role), i, j, shot);
}

}  // namespace

TomographyRun run_tomography(const ShadowEstimator& est, const Choi& channel,
                             std::uint64_t shots_per_pair, std::uint64_t seed,
                             const std::optional<NoiseSpec>& noise) {
  if (shots_per_pair == 0) throw Error(ErrorKind::kInvalidArgument, "need at least one shot per pair");
  const bool noisy = noise && noise->sigma != 0.0;
  const bool per_shot = noisy && noise->mode == NoiseMode::kUnbiased;

  std::vector<std::array<std::uint64_t, 3>> counts(est.pairs(), {0, 0, 0});
  for (std::size_t i = 0; i < est.left().size(); ++i) {
    for (std::size_t j = 0; j < est.right().size(); ++j) {
      auto& c = counts[i * est.right().size() + j];
      Eigen::Vector3d p;
      const auto probs = [&](const TripletRotation& l, const TripletRotation& r) {
        return outcome_probabilities(rotation_unitary(l), channel, rotation_unitary(r));
      };
      if (!per_shot) {
        const TripletRotation l = noisy ? apply_noise(est.left()[i], *noise, biased_key(0, i)) : est.left()[i];
        const TripletRotation r = noisy ? apply_noise(est.right()[j], *noise, biased_key(1, j)) : est.right()[j];
        p = probs(l, r);
      }
      for (std::uint64_t s = 0; s < shots_per_pair; ++s) {
        if (per_shot) {
          p = probs(apply_noise(est.left()[i], *noise, unbiased_key(0, i, j, s)),
                    apply_noise(est.right()[j], *noise, unbiased_key(1, i, j, s)));
        }
        // Readout of |00>, |01>, |10>, |11>; the b = 0 weight splits evenly.
        const double u = to_unit(counter_hash(seed, i, j, s)) * p.sum();
        const std::array<double, 4> two_qubit{p(0), 0.5 * p(1), 0.5 * p(1), p(2)};
        int k = 0;
        double acc = two_qubit[0];
        while (k < 3 && u >= acc) acc += two_qubit[static_cast<std::size_t>(++k)];
        ++c[static_cast<std::size_t>(outcome_index(outcome_from_two_qubit(k)))];
      }
    }
  }

  TomographyRun run;
  run.shots = shots_per_pair * est.pairs();
  run.estimate = Choi::Zero();
  for (std::size_t i = 0; i < est.left().size(); ++i)
    for (std::size_t j = 0; j < est.right().size(); ++j) {
      const auto& c = counts[i * est.right().size() + j];
      Mat3 right = Mat3::Zero();
      for (int b = 0; b < 3; ++b) right += static_cast<double>(c[static_cast<std::size_t>(b)]) * est.right_image(j, b);
      run.estimate += kron(est.left_image(i), right);
    }
  run.estimate /= static_cast<double>(run.shots);
  run.delta = choi_distance(run.estimate, channel);
  return run;
}

namespace {

struct FixedDeleter {
  void operator()(gsl_integration_fixed_workspace* w) const { gsl_integration_fixed_free(w); }
};

// Nodes and weights for E f(Z), Z ~ N(0, 1).
std::vector<std::pair<double, double>> gaussian_rule(int nodes) {
  detail::quiet_gsl();
  std::unique_ptr<gsl_integration_fixed_workspace, FixedDeleter> w(gsl_integration_fixed_alloc(
      gsl_integration_fixed_hermite, static_cast<std::size_t>(nodes), 0.0, 0.5, 0.0, 0.0));
  if (!w) throw Error(ErrorKind::kInvalidArgument, "quadrature allocation failed");
  std::vector<std::pair<double, double>> rule;
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  for (int k = 0; k < nodes; ++k) {
    rule.emplace_back(gsl_integration_fixed_nodes(w.get())[k], gsl_integration_fixed_weights(w.get())[k] * norm);
  }
  return rule;
}

}  // namespace

double noise_plateau(const ShadowEstimator& est, const Choi& channel, const NoiseSpec& noise, int nodes) {
  if (noise.sigma == 0.0) return choi_distance(expected_estimate(est, channel), channel);
  if (noise.mode == NoiseMode::kBiased) {
    const Choi mean = expected_with(est, [&](std::size_t i, std::size_t j) {
      return outcome_probabilities(rotation_unitary(apply_noise(est.left()[i], noise, biased_key(0, i))), channel,
                                   rotation_unitary(apply_noise(est.right()[j], noise, biased_key(1, j))));
    });
    return choi_distance(mean, channel);
  }
  const auto rule = gaussian_rule(nodes);
  const auto perturbed = [&](const TripletRotation& r, double za, double zp) {
    TripletRotation out = r;
    out.alpha += noise.sigma * za;
    out.phi += noise.sigma * zp;
    return rotation_unitary(out);
  };
  std::vector<Mat3> left_states;
  for (const auto& r : est.left()) {
    Mat3 rho = Mat3::Zero();
    for (const auto& [xa, wa] : rule)
      for (const auto& [xp, wp] : rule) {
        const Eigen::Vector3cd psi = perturbed(r, xa, xp).col(0);
        rho += wa * wp * psi * psi.adjoint();
      }
    left_states.push_back(rho);
  }
  std::vector<std::array<Mat3, 3>> right_effects;
  for (const auto& r : est.right()) {
    std::array<Mat3, 3> eff{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
    for (const auto& [xa, wa] : rule)
      for (const auto& [xp, wp] : rule) {
        const Mat3 u = perturbed(r, xa, xp);
        for (int b = 0; b < 3; ++b) {
          const Eigen::Vector3cd v = u.row(b).adjoint();
          eff[static_cast<std::size_t>(b)] += wa * wp * v * v.adjoint();
        }
      }
    right_effects.push_back(eff);
  }
  const Choi mean = expected_with(est, [&](std::size_t i, std::size_t j) {
    const Mat3 out = apply_choi(channel, left_states[i]);
    Eigen::Vector3d p;
    for (int b = 0; b < 3; ++b) p(b) = (right_effects[j][static_cast<std::size_t>(b)] * out).trace().real();
    return p;
  });
  return choi_distance(mean, channel);
}

}  // namespace fpreg::tomography
