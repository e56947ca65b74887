#include "doctest.h"

#include "fpreg/error.hpp"
#include "fpreg/set_optimizer.hpp"
#include "fpreg/spin1.hpp"
#include "fpreg/table_io.hpp"
#include "fpreg/tomography.hpp"

#include "generators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

using namespace fpreg;
using namespace fpreg::tomography;

namespace {

TripletRotation random_rotation(testing::Gen& gen) {
  return {gen.uniform(0.0, kPi), gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi)};
}

Mat3 random_hermitian(testing::Gen& gen) {
  const Mat3 a = gen.ginibre(3, 3);
  return 0.5 * (a + a.adjoint());
}

// Two-Kraus amplitude-damping-like channel with a random unitary frame.
Channel random_channel(testing::Gen& gen) {
  const Mat3 u = gen.unitary(3);
  const double g = gen.uniform(0.0, 1.0);
  Mat3 k0 = Mat3::Identity();
  k0(2, 2) = std::sqrt(1.0 - g);
  Mat3 k1 = Mat3::Zero();
  k1(0, 2) = std::sqrt(g);
  const Mat3 a = u * k0;
  const Mat3 b = u * k1;
  return [a, b](const Mat3& rho) -> Mat3 { return a * rho * a.adjoint() + b * rho * b.adjoint(); };
}

RotationSet random_set(testing::Gen& gen, int n) {
  RotationSet s;
  for (int i = 0; i < n; ++i) s.push_back({kPi / 2, gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi)});
  return s;
}

ShadowEstimator random_estimator(testing::Gen& gen) {
  for (;;) {
    try {
      return ShadowEstimator(random_set(gen, gen.integer(9, 14)), random_set(gen, gen.integer(5, 8)));
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("spin-1 algebra") {
  const auto& j = spin1_generators();
  CHECK((j[0] * j[1] - j[1] * j[0] - kI * j[2]).norm() < 1e-14);
  CHECK((j[1] * j[2] - j[2] * j[1] - kI * j[0]).norm() < 1e-14);
  const Mat3 casimir = j[0] * j[0] + j[1] * j[1] + j[2] * j[2];
  CHECK((casimir - 2.0 * Mat3::Identity()).norm() < 1e-14);
}

TEST_CASE("closed-form rotation matches the matrix exponential") {
  testing::Gen gen(51);
  for (int trial = 0; trial < 50; ++trial) {
    const TripletRotation r = random_rotation(gen);
    const Mat3 k = axis_generator(r);
    CHECK((k * k * k - k).norm() < 1e-13);
    const Mat3 oracle = (Complex(0.0, -r.alpha) * k).exp();
    const Mat3 u = rotation_unitary(r);
    CHECK((u - oracle).norm() < 1e-12);
    CHECK((u.adjoint() * u - Mat3::Identity()).norm() < 1e-13);
  }
}

TEST_CASE("outcome labels") {
  CHECK(outcome_index(1) == 0);
  CHECK(outcome_index(-1) == 2);
  for (int i = 0; i < 3; ++i) CHECK(outcome_index(outcome_value(i)) == i);
  CHECK(outcome_from_two_qubit(0) == 1);
  CHECK(outcome_from_two_qubit(1) == 0);
  CHECK(outcome_from_two_qubit(2) == 0);
  CHECK(outcome_from_two_qubit(3) == -1);
  CHECK_THROWS_AS(outcome_index(2), Error);
  CHECK_THROWS_AS(outcome_value(3), Error);
  CHECK_THROWS_AS(outcome_from_two_qubit(4), Error);
}

TEST_CASE("triplet embedding") {
  const auto e = triplet_embedding();
  CHECK((e.adjoint() * e - Mat3::Identity()).norm() < 1e-14);
  Mat3 cz = Mat3::Identity();
  cz(2, 2) = -1.0;
  CHECK((cz_on_triplet() - cz).norm() < 1e-14);
  // SWAP acts trivially on the symmetric subspace.
  LogicalMatrix swap = LogicalMatrix::Zero();
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
  CHECK((restrict_to_triplet(swap) - Mat3::Identity()).norm() < 1e-14);
}

TEST_CASE("Hermitian coordinates") {
  testing::Gen gen(52);
  for (int trial = 0; trial < 30; ++trial) {
    const Mat3 a = random_hermitian(gen);
    const Mat3 b = random_hermitian(gen);
    CHECK((vec_to_hermitian(hermitian_to_vec(a)) - a).norm() < 1e-13);
    CHECK(hermitian_to_vec(a).dot(hermitian_to_vec(b)) == doctest::Approx((a * b).trace().real()));
  }
}

TEST_CASE("Choi round trip") {
  testing::Gen gen(53);
  for (int trial = 0; trial < 20; ++trial) {
    const Channel e = random_channel(gen);
    const Choi c = choi_of_channel(e);
    CHECK((c - c.adjoint()).norm() < 1e-13);
    CHECK(Eigen::SelfAdjointEigenSolver<Choi>(c).eigenvalues().minCoeff() > -1e-12);
    const Mat3 rho = gen.ginibre(3, 3);
    CHECK((apply_choi(c, rho) - e(rho)).norm() < 1e-13);
    // Trace preservation: the partial trace over the output is the identity.
    Mat3 tr_out = Mat3::Zero();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) tr_out(a, b) = c.block<3, 3>(3 * a, 3 * b).trace();
    CHECK((tr_out - Mat3::Identity()).norm() < 1e-13);
  }
  const Mat3 u = gen.unitary(3);
  const Choi cu = choi_of_unitary(u);
  CHECK(cu.trace().real() == doctest::Approx(3.0));
  CHECK((cu * cu - 3.0 * cu).norm() < 1e-12);
}

TEST_CASE("M maps are positive and invertible for the bundled sets") {
  const auto m = build_m_channels(bundled_left_set(), bundled_right_set());
  CHECK((m.left - m.left.transpose()).norm() < 1e-13);
  CHECK((m.left * m.left_inverse - Real9::Identity()).norm() < 1e-10);
  CHECK((m.right * m.right_inverse - Real9::Identity()).norm() < 1e-10);
  testing::Gen gen(54);
  const Mat3 rho = random_hermitian(gen);
  CHECK((m.apply_left_inverse(m.apply_left(rho)) - rho).norm() < 1e-12);
  CHECK((m.apply_right(m.apply_right_inverse(rho)) - rho).norm() < 1e-12);
}

TEST_CASE("incomplete sets are rejected") {
  const RotationSet one{{kPi / 2, 0.2, 0.3}};
  try {
    build_m_channels(one, bundled_right_set());
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInformationallyIncomplete);
  }
  CHECK_THROWS_AS(build_m_channels({}, bundled_right_set()), Error);
}

TEST_CASE("single-shot estimates are Hermitian") {
  testing::Gen gen(55);
  for (int trial = 0; trial < 10; ++trial) {
    const auto est = random_estimator(gen);
    for (int k = 0; k < 5; ++k) {
      const auto i = static_cast<std::size_t>(gen.integer(0, static_cast<int>(est.left().size()) - 1));
      const auto j = static_cast<std::size_t>(gen.integer(0, static_cast<int>(est.right().size()) - 1));
      const Choi s = est.single_shot(i, j, gen.integer(-1, 1));
      CHECK((s - s.adjoint()).norm() < 1e-12 * s.norm());
    }
  }
}

TEST_CASE("exact enumeration is unbiased on random channels") {
  testing::Gen gen(56);
  for (int trial = 0; trial < 10; ++trial) {
    const auto est = random_estimator(gen);
    const Choi c = choi_of_channel(random_channel(gen));
    CHECK(choi_distance(expected_estimate(est, c), c) < 1e-11);
  }
}

TEST_CASE("outcome probabilities are a distribution") {
  testing::Gen gen(57);
  for (int trial = 0; trial < 20; ++trial) {
    const Choi c = choi_of_channel(random_channel(gen));
    const auto p = outcome_probabilities(rotation_unitary(random_rotation(gen)), c,
                                         rotation_unitary(random_rotation(gen)));
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("bounds are ordered") {
  testing::Gen gen(58);
  for (int trial = 0; trial < 20; ++trial) {
    const auto est = random_estimator(gen);
    const Choi c = choi_of_unitary(gen.unitary(3));
    const double a = upper_bound_A(est);
    const double b = bound_B(est, c);
    const double cc = sample_complexity(est, c);
    CHECK(a >= b - 1e-12);
    CHECK(b >= cc - 1e-12);
    CHECK(cc > 0.0);
  }
}

TEST_CASE("bundled sets") {
  const auto left = bundled_left_set();
  const auto right = bundled_right_set();
  CHECK(left.size() == 12);
  CHECK(right.size() == 9);
  CHECK(left[0].phi == doctest::Approx(-0.97332525));
  CHECK(right[3].alpha == doctest::Approx(-3.068044));
  for (const auto& r : left) CHECK(r.theta == doctest::Approx(kPi / 2));
}

TEST_CASE("rotation set text round trip") {
  testing::Gen gen(59);
  const auto set = random_set(gen, 7);
  std::ostringstream out;
  write_rotation_set(out, set);
  const auto back = parse_rotation_set(out.str());
  REQUIRE(back.size() == set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(back[i].phi == set[i].phi);
    CHECK(back[i].alpha == set[i].alpha);
  }
  CHECK_THROWS_AS(parse_rotation_set("index,phi,alpha\n1,0.1\n"), Error);
  CHECK_THROWS_AS(parse_rotation_set("1,x,0.2\n"), Error);
  CHECK_THROWS_AS(parse_rotation_set("index,phi,alpha\n"), Error);
  CHECK_THROWS_AS(read_rotation_set("/nonexistent/set.csv"), Error);
}

TEST_CASE("counter-based randomness") {
  CHECK(counter_hash(1, 2, 3) == counter_hash(1, 2, 3));
  CHECK(counter_hash(1, 2, 3) != counter_hash(1, 3, 2));
  CHECK(counter_hash(1, 2, 3) != counter_hash(2, 2, 3));
  double sum = 0.0, sum_sq = 0.0, lo = 1.0, hi = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double u = to_unit(counter_hash(9, static_cast<std::uint64_t>(k)));
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    const auto z = normal_pair(9, static_cast<std::uint64_t>(k));
    sum += z[0] + z[1];
    sum_sq += z[0] * z[0] + z[1] * z[1];
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / (2 * n)) < 0.01);
  CHECK(sum_sq / (2 * n) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("noise offsets") {
  const TripletRotation r{kPi / 2, 0.1, 0.2};
  CHECK(apply_noise(r, {0.0, NoiseMode::kBiased, 3}, 5).alpha == 0.2);
  const auto a = apply_noise(r, {0.1, NoiseMode::kBiased, 3}, 5);
  const auto b = apply_noise(r, {0.1, NoiseMode::kBiased, 3}, 5);
  CHECK(a.alpha == b.alpha);
  CHECK(a.phi == b.phi);
  CHECK(a.alpha != apply_noise(r, {0.1, NoiseMode::kBiased, 3}, 6).alpha);
}

TEST_CASE("dephasing form matches the averaged rotation") {
  testing::Gen gen(60);
  for (double sigma : {0.01, 0.03}) {
    const TripletRotation r = random_rotation(gen);
    const Eigen::Vector3cd psi = gen.state(3);
    const Mat3 rho = psi * psi.adjoint();
    // Gauss-Hermite average of exp(-i s K) rho' exp(i s K), s ~ N(0, sigma^2).
    const Mat3 u = rotation_unitary(r);
    const Mat3 k = axis_generator(r);
    const Mat3 rp = u * rho * u.adjoint();
    const double x = std::sqrt(3.0);
    const std::array<std::pair<double, double>, 3> rule{{{-x, 1.0 / 6.0}, {0.0, 2.0 / 3.0}, {x, 1.0 / 6.0}}};
    Mat3 avg = Mat3::Zero();
    for (const auto& [z, w] : rule) {
      const Mat3 e = (Complex(0.0, -sigma * z) * k).exp();
      avg += w * e * rp * e.adjoint();
    }
    CHECK((dephased_rotation(r, sigma, rho) - avg).norm() < 10.0 * std::pow(sigma, 4));
  }
}

TEST_CASE("sampled tomography") {
  const ShadowEstimator est(bundled_left_set(), bundled_right_set());
  const Choi cz = choi_of_unitary(cz_on_triplet());
  const auto a = run_tomography(est, cz, 200, 1);
  const auto b = run_tomography(est, cz, 200, 1);
  const auto c = run_tomography(est, cz, 200, 2);
  CHECK(a.estimate == b.estimate);
  CHECK(a.delta != c.delta);
  CHECK(a.shots == 200 * est.pairs());
  CHECK((a.estimate - a.estimate.adjoint()).norm() < 1e-10);
  const auto big = run_tomography(est, cz, 20000, 3);
  CHECK(big.delta < a.delta);
  CHECK_THROWS_AS(run_tomography(est, cz, 0, 1), Error);

  const auto noisy = run_tomography(est, cz, 200, 1, NoiseSpec{0.05, NoiseMode::kUnbiased, 4});
  CHECK(noisy.estimate != a.estimate);
}

TEST_CASE("noise plateaus scale with sigma") {
  const ShadowEstimator est(bundled_left_set(), bundled_right_set());
  const Choi cz = choi_of_unitary(cz_on_triplet());
  CHECK(noise_plateau(est, cz, {0.0, NoiseMode::kUnbiased, 0}) < 1e-12);
  const double u1 = noise_plateau(est, cz, {0.02, NoiseMode::kUnbiased, 0});
  const double u2 = noise_plateau(est, cz, {0.04, NoiseMode::kUnbiased, 0});
  CHECK(u2 / u1 == doctest::Approx(4.0).epsilon(0.05));
  const double b1 = noise_plateau(est, cz, {0.02, NoiseMode::kBiased, 8});
  const double b2 = noise_plateau(est, cz, {0.04, NoiseMode::kBiased, 8});
  CHECK(b2 / b1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("set optimization reports its loss") {
  OptimizeOptions opt;
  opt.restarts = 2;
  opt.iterations = 30;
  const auto res = optimize_sets(9, 5, opt);
  CHECK(res.left.size() == 9);
  CHECK(res.right.size() == 5);
  CHECK(res.restarts_converged == 2);
  CHECK(res.restart_losses.size() == 2);
  CHECK(res.loss == doctest::Approx(upper_bound_A(ShadowEstimator(res.left, res.right))));
  CHECK_THROWS_AS(optimize_sets(0, 4, opt), Error);

  opt.channel = choi_of_unitary(cz_on_triplet());
  opt.restarts = 1;
  opt.iterations = 10;
  const auto c = optimize_sets(9, 5, opt);
  CHECK(c.loss == doctest::Approx(sample_complexity(ShadowEstimator(c.left, c.right), *opt.channel)));
}
