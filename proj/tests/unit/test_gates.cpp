#include "doctest.h"

#include "fpreg/effective.hpp"
#include "fpreg/error.hpp"
#include "fpreg/gates.hpp"

#include "generators.hpp"

#include <cmath>
#include <sstream>

using namespace fpreg;

namespace {

LogicalMatrix random_contraction(testing::Gen& gen) {
  const LogicalMatrix u = gen.unitary(4);
  Eigen::Vector4d s;
  for (int i = 0; i < 4; ++i) s(i) = gen.uniform(0.6, 1.0);
  return u * s.cast<Complex>().asDiagonal() * LogicalMatrix(gen.unitary(4));
}

}  // namespace

TEST_CASE("Haar average: closed form against sampling") {
  testing::Gen gen(41);
  for (int trial = 0; trial < 4; ++trial) {
    const LogicalMatrix m = random_contraction(gen);
    const double exact = haar_fidelity_exact(m);
    const auto est = haar_fidelity_sampled(m, 300000, 100 + trial);
    CHECK(std::abs(est.mean - exact) < 3.0 * est.std_error);
  }
  CHECK_THROWS_AS(haar_fidelity_sampled(LogicalMatrix::Identity(), 1, 0), Error);
}

TEST_CASE("Haar average invariances") {
  testing::Gen gen(42);
  for (int trial = 0; trial < 20; ++trial) {
    const LogicalMatrix m = random_contraction(gen);
    const Complex phase = std::polar(1.0, gen.uniform(-kPi, kPi));
    CHECK(haar_fidelity_exact(phase * m) == doctest::Approx(haar_fidelity_exact(m)));
    CHECK(haar_fidelity_exact(m) <= 1.0 + 1e-12);
  }
  const LogicalMatrix u = gen.unitary(4);
  CHECK(haar_fidelity_exact(u.adjoint() * u) == doctest::Approx(1.0));
}

TEST_CASE("full-space fidelity uses the isometry") {
  testing::Gen gen(43);
  const int d = 7;
  RealMatrix p = RealMatrix::Zero(d, 4);
  for (int i = 0; i < 4; ++i) p(i + 2, i) = 1.0;
  ComplexMatrix v = ComplexMatrix::Identity(d, d);
  const LogicalMatrix target = gen.unitary(4);
  v.block(2, 2, 4, 4) = target;
  CHECK(haar_fidelity(v, target, p) == doctest::Approx(1.0));
  CHECK(haar_fidelity(v, std::polar(1.0, 0.4) * target, p) == doctest::Approx(1.0));
  CHECK_THROWS_AS(haar_fidelity(ComplexMatrix::Identity(3, 3), target, p), Error);
}

TEST_CASE("polar factor") {
  testing::Gen gen(44);
  for (int trial = 0; trial < 10; ++trial) {
    const LogicalMatrix m = random_contraction(gen);
    const LogicalMatrix u = polar_unitary(m);
    CHECK((u.adjoint() * u - LogicalMatrix::Identity()).norm() < 1e-12);
    // m = u h with h positive semidefinite
    const LogicalMatrix h = u.adjoint() * m;
    CHECK((h - h.adjoint()).norm() < 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<LogicalMatrix>(h).eigenvalues().minCoeff() > 0.0);
  }
  const LogicalMatrix w = gen.unitary(4);
  CHECK((polar_unitary(w) - w).norm() < 1e-12);
}

TEST_CASE("CPHASE target absorbs single-qubit Z phases") {
  const double a = 0.3, b = -1.1, c = 2.0, phi = kPi;
  LogicalMatrix raw = LogicalMatrix::Zero();
  raw(0, 0) = std::polar(1.0, a);
  raw(1, 1) = std::polar(1.0, b);
  raw(2, 2) = std::polar(1.0, c);
  raw(3, 3) = std::polar(1.0, b + c - a + phi);
  CHECK((cphase_target(raw, phi) - raw).norm() < 1e-12);
  CHECK(haar_fidelity_exact(cphase_target(raw, 0.0).adjoint() * raw) == doctest::Approx(0.4));
}

TEST_CASE("SWAP in the secular model") {
  for (int m : {0, 1}) {
    const GateResult r = run_swap(0.7, m);
    CHECK(r.duration == doctest::Approx((2 * m + 1) * kPi / 1.4));
    CHECK(std::norm(r.raw(2, 1)) > 1.0 - 1e-9);
    CHECK(std::norm(r.raw(1, 2)) > 1.0 - 1e-9);
    CHECK(std::norm(r.raw(0, 0)) > 1.0 - 1e-12);
    CHECK(std::norm(r.raw(3, 3)) > 1.0 - 1e-9);
    for (double l : r.leakage) CHECK(l < 1e-6);
    CHECK(r.fidelity > 1.0 - 1e-9);
  }
  CHECK_THROWS_AS(run_swap(0.0), Error);
  CHECK_THROWS_AS(run_swap(1.0, -1), Error);
}

TEST_CASE("hopping alone does not see the secular projection") {
  const GateResult full = run_swap(0.7, 0, ModelKind::kFull);
  const GateResult secular = run_swap(0.7, 0, ModelKind::kSecular);
  CHECK((full.raw - secular.raw).norm() < 1e-12);
}

TEST_CASE("CPHASE duration") {
  CPhaseSpec spec;
  spec.u0_over_j0 = 30.0;
  const double g = ising_prefactor() / 900.0;
  CHECK(cphase_duration(spec) == doctest::Approx(kPi / ((1.0 - 1.25 * 0.3) * g)));
  spec.adiabatic = false;
  CHECK(cphase_duration(spec) == doctest::Approx(kPi / g));
  spec.u0_over_j0 = -1.0;
  CHECK_THROWS_AS(cphase_duration(spec), Error);
}

TEST_CASE("no coupling gives the identity") {
  CPhaseSpec spec;
  spec.u0_over_j0 = 0.0;
  spec.target_phase = 0.0;
  const GateResult r = run_cphase(spec);
  CHECK((r.raw - LogicalMatrix::Identity()).norm() < 1e-12);
  CHECK(r.induced_phase == doctest::Approx(0.0));
  CHECK(r.fidelity == doctest::Approx(1.0));
}

TEST_CASE("secular CZ phase and frame independence") {
  const auto terms = register_terms();
  CPhaseSpec spec;
  spec.u0_over_j0 = 20.0;
  spec.model = ModelKind::kSecular;
  const GateResult r = run_cphase(spec, terms);
  const double budget = kPi * (10.0 / 400.0 + 1.0 / spec.er_over_u0);
  CHECK(std::abs(r.induced_phase - kPi) < budget);
  CHECK(r.fidelity > 0.99);

  // A constant energy offset changes every single-state phase but not the combination.
  HamiltonianTerms shifted = terms;
  shifted.orbital += 0.37 * RealMatrix::Identity(terms.dimension(), terms.dimension());
  const GateResult s = run_cphase(spec, shifted);
  CHECK(s.induced_phase == doctest::Approx(r.induced_phase).epsilon(1e-9));
  CHECK(s.fidelity == doctest::Approx(r.fidelity).epsilon(1e-9));
}

TEST_CASE("square pulse is worse than the ramp") {
  CPhaseSpec spec;
  spec.u0_over_j0 = 25.0;
  spec.model = ModelKind::kSecular;
  const double ramp = 1.0 - run_cphase(spec).fidelity;
  spec.adiabatic = false;
  const double square = 1.0 - run_cphase(spec).fidelity;
  CHECK(square > ramp);
}

TEST_CASE("log-log slope") {
  std::vector<double> x, y;
  for (double v : {0.01, 0.02, 0.05, 0.1, 0.3}) {
    x.push_back(v);
    y.push_back(0.5 * std::pow(v, 4));
  }
  const auto fit = loglog_slope(x, y, 1e-12, 1e-3);
  CHECK(fit.points == 4);
  CHECK(fit.slope == doctest::Approx(4.0));
  CHECK(fit.intercept == doctest::Approx(std::log(0.5)));
  CHECK(loglog_slope({1.0}, {1e-3}).points == 1);
  CHECK_THROWS_AS(loglog_slope({1.0}, {}), Error);
}

TEST_CASE("scan is independent of the worker count") {
  const std::vector<double> ratios{15.0, 18.0};
  const auto a = infidelity_scan(ratios, 20.0, true, ModelKind::kSecular, 1, 1500);
  const auto b = infidelity_scan(ratios, 20.0, true, ModelKind::kSecular, 2, 1500);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    CHECK(a[i].infidelity == b[i].infidelity);
    CHECK(a[i].phase_exact == b[i].phase_exact);
  }
  std::ostringstream csv;
  write_scan_csv(csv, a);
  CHECK(csv.str().rfind("U0_over_J0,E_R_over_U0,adiabatic,phase_exact,phase_theory,leakage,infidelity\n", 0) == 0);
}
