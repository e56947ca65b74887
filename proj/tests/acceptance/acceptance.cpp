// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: fpreg_acceptance [criterion numbers...]   (default: all)

#include "fpreg/effective.hpp"
#include "fpreg/error.hpp"
#include "fpreg/evolve.hpp"
#include "fpreg/fock.hpp"
#include "fpreg/gates.hpp"
#include "fpreg/hamiltonian.hpp"
#include "fpreg/interaction.hpp"
#include "fpreg/ising.hpp"
#include "fpreg/set_optimizer.hpp"
#include "fpreg/table_io.hpp"
#include "fpreg/tomography.hpp"

#include "generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace fpreg;
namespace tomo = fpreg::tomography;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome basis_dimension() {
  const auto basis = two_site_register_basis();
  return {basis->size() == 59, fmt("dimension %zu", basis->size())};
}

Outcome interaction_coefficients() {
  const double u0220 = u_matrix_element(0, 2, 2, 0);
  const double u1111 = u_matrix_element(1, 1, 1, 1);
  const double u0211 = u_matrix_element(0, 2, 1, 1);
  const double a = 3.0 / 16.0 * std::sqrt(kPi / 2.0);
  const double b = std::sqrt(kPi) / 16.0;
  const bool ok = rel(u0220, a) < 1e-6 && rel(u1111, a) < 1e-6 && rel(u0211, b) < 1e-6;
  return {ok, fmt("U_0220 rel err %.1e, U_1111 rel err %.1e (U_1111/U_0220 = %.6f), U_0211 rel err %.1e",
                  rel(u0220, a), rel(u1111, a), u1111 / u0220, rel(u0211, b))};
}

Outcome effective_coupling() {
  const double g = effective_parameters(1.0, 1.0, 1.0).g;
  const auto oracle = second_order_oracle(register_terms());
  const bool ok = rel(g, 16.2235) < 2e-4 && rel(oracle.g_prefactor, g) < 5e-3;
  return {ok, fmt("g U/J^2 = %.6f (closed form), %.6f (perturbative sum), quoted 16.2235", g,
                  oracle.g_prefactor)};
}

Outcome swap_gate() {
  const GateResult r = run_swap(1.0);
  const double transfer = std::norm(r.raw(2, 1));
  const double leak = *std::max_element(r.leakage.begin(), r.leakage.end());
  return {transfer > 1.0 - 1e-6 && leak < 1e-6, fmt("|01> -> |10> population %.12f, max leakage %.1e", transfer, leak)};
}

Outcome cz_phase_and_populations() {
  CPhaseSpec spec;
  spec.u0_over_j0 = 30.0;
  spec.er_over_u0 = 20.0;
  const GateResult r = run_cphase(spec);
  const double budget = kPi * (10.0 / (spec.u0_over_j0 * spec.u0_over_j0) + 1.0 / spec.er_over_u0);
  const double dev = std::abs(r.induced_phase - kPi);
  double worst = 0.0;
  for (int s : {0, 1, 3}) worst = std::max(worst, r.population_change[static_cast<std::size_t>(s)]);
  const bool ok = dev <= budget && worst >= 1e-4 && worst <= 1e-2;
  return {ok, fmt("phase %.6f (|dev| %.4f <= budget %.4f), population change 00/01/11 = %.2e/%.2e/%.2e",
                  r.induced_phase, dev, budget, r.population_change[0], r.population_change[1],
                  r.population_change[3])};
}

Outcome cz_fidelity_threshold() {
  CPhaseSpec spec;
  spec.u0_over_j0 = 22.0;
  spec.er_over_u0 = 20.0;
  const GateResult r = run_cphase(spec);
  return {r.fidelity >= 0.99, fmt("fidelity %.5f at U0/J0 = 22", r.fidelity)};
}

Outcome infidelity_scaling() {
  const std::vector<double> ratios{35, 40, 50, 60, 70, 85, 100};
  const auto ad = infidelity_scan(ratios, 20.0, true, ModelKind::kSecular);
  const auto sq = infidelity_scan(ratios, 20.0, false, ModelKind::kSecular);
  std::vector<double> x, y;
  bool square_worse = true;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    x.push_back(1.0 / ratios[i]);
    y.push_back(ad[i].infidelity);
    square_worse = square_worse && sq[i].infidelity > ad[i].infidelity;
  }
  const auto fit = loglog_slope(x, y);
  const bool ok = std::abs(fit.slope - 4.0) <= 0.3 && fit.points >= 3 && square_worse;
  return {ok, fmt("slope %.3f over %d points (1-f %.2e .. %.2e), square pulse worse at all ratios: %s", fit.slope,
                  fit.points, y.back(), y.front(), square_worse ? "yes" : "no")};
}

Outcome ising_fit() {
  IsingConfig cfg;
  const auto fit0 = fit_effective_ising(simulate_ising_pair(cfg), cfg);
  const auto scan = detuning_scan(cfg, {-0.2, 0.2, 0.4});
  std::vector<double> d{0.0}, cz{fit0.params.alpha * cfg.J0 * cfg.J0 / cfg.U0 + fit0.params.beta};
  for (const auto& p : scan) {
    d.push_back(p.delta);
    cz.push_back(p.c_z);
  }
  const double n = static_cast<double>(d.size());
  const double md = std::accumulate(d.begin(), d.end(), 0.0) / n;
  const double mc = std::accumulate(cz.begin(), cz.end(), 0.0) / n;
  double sdd = 0, sdc = 0, scc = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    sdd += (d[i] - md) * (d[i] - md);
    sdc += (d[i] - md) * (cz[i] - mc);
    scc += (cz[i] - mc) * (cz[i] - mc);
  }
  const double slope = sdc / sdd;
  const double r2 = sdc * sdc / (sdd * scc);
  const double zero = md - mc / slope;
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const bool ok = fit0.fidelity >= 0.9995 && r2 > 0.99 && zero > *lo && zero < *hi;
  return {ok, fmt("fit fidelity %.6f, c_z vs Delta slope %.4f (R^2 %.5f), zero crossing at Delta = %.4f",
                  fit0.fidelity, slope, r2, zero)};
}

Outcome rabi_frequency() {
  double worst = 0.0;
  for (double delta : {0.0, 0.1}) {
    const auto m = measure_rabi_frequency(0.0, 2.0, delta, 2.0 * kPi * 140.76);
    worst = std::max(worst, rel(m.frequency, m.predicted));
  }
  return {worst < 0.01, fmt("max relative deviation %.2e", worst)};
}

Outcome tomography_unbiased() {
  const tomo::ShadowEstimator est(tomo::bundled_left_set(), tomo::bundled_right_set());
  const tomo::Choi cz = tomo::choi_of_unitary(tomo::cz_on_triplet());
  const double err = (tomo::expected_estimate(est, cz) - cz).norm();
  return {err < 1e-10, fmt("Frobenius error %.2e", err)};
}

Outcome sample_complexity_numbers() {
  const tomo::ShadowEstimator est(tomo::bundled_left_set(), tomo::bundled_right_set());
  const tomo::Choi cz = tomo::choi_of_unitary(tomo::cz_on_triplet());
  const double a = tomo::upper_bound_A(est);
  const double c = tomo::sample_complexity(est, cz);
  const std::uint64_t per_pair = 1000000 / est.pairs() + 1;
  const int seeds = 100;
  double acc = 0.0;
  std::uint64_t shots = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto run = tomo::run_tomography(est, cz, per_pair, 1000 + static_cast<std::uint64_t>(s));
    acc += run.delta * run.delta * static_cast<double>(run.shots);
    shots = run.shots;
  }
  const double rms = std::sqrt(acc / seeds);
  tomo::OptimizeOptions opt;
  opt.restarts = 10;
  const auto best = tomo::optimize_sets(12, 9, opt);
  const bool ok = rel(a, 35.9) < 0.01 && rel(c, 17.9) < 0.02 && rel(rms, std::sqrt(c)) < 0.05 &&
                  best.loss <= 35.9 * 1.02;
  return {ok, fmt("A %.4f, C(CZ) %.4f, rms delta*sqrt(N) %.4f vs sqrt(C) %.4f at N = %llu (%d seeds), "
                  "optimized A %.4f",
                  a, c, rms, std::sqrt(c), static_cast<unsigned long long>(shots), seeds, best.loss)};
}

Outcome bound_ordering() {
  testing::Gen gen(2024);
  int checked = 0;
  int violations = 0;
  double tightest = 1e300;
  for (int ch = 0; ch < 50; ++ch) {
    const tomo::Choi lambda = tomo::choi_of_unitary(gen.unitary(3));
    for (int pair = 0; pair < 10;) {
      tomo::RotationSet left(static_cast<std::size_t>(gen.integer(9, 14)));
      tomo::RotationSet right(static_cast<std::size_t>(gen.integer(5, 8)));
      for (auto& r : left) r = {kPi / 2, gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi)};
      for (auto& r : right) r = {kPi / 2, gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi)};
      try {
        const tomo::ShadowEstimator est(left, right);
        const double a = tomo::upper_bound_A(est);
        const double b = tomo::bound_B(est, lambda);
        const double c = tomo::sample_complexity(est, lambda);
        if (!(a >= b && b >= c)) ++violations;
        tightest = std::min(tightest, (a - b) / a);
        ++checked;
        ++pair;
      } catch (const Error&) {
        // informationally incomplete draw; redraw
      }
    }
  }
  return {violations == 0 && checked == 500,
          fmt("%d channel/set combinations, %d violations, min (A-B)/A = %.3f", checked, violations, tightest)};
}

Outcome noise_exponents() {
  const tomo::ShadowEstimator est(tomo::bundled_left_set(), tomo::bundled_right_set());
  const tomo::Choi cz = tomo::choi_of_unitary(tomo::cz_on_triplet());
  std::vector<double> sigma, unbiased, biased;
  for (int k = 0; k <= 6; ++k) {
    const double s = 0.01 * std::pow(10.0, k / 6.0);
    sigma.push_back(s);
    unbiased.push_back(tomo::noise_plateau(est, cz, {s, tomo::NoiseMode::kUnbiased, 0}));
    biased.push_back(tomo::noise_plateau(est, cz, {s, tomo::NoiseMode::kBiased, 77}));
  }
  const auto fu = loglog_slope(sigma, unbiased, 0.0, 1e300);
  const auto fb = loglog_slope(sigma, biased, 0.0, 1e300);
  const bool ok = std::abs(fu.slope - 2.0) <= 0.2 && std::abs(fb.slope - 1.0) <= 0.2;
  return {ok, fmt("unbiased exponent %.3f, biased exponent %.3f over sigma in [0.01, 0.1]", fu.slope, fb.slope)};
}

Outcome property_suites() {
  std::vector<std::string> failed;
  testing::Gen gen(99);

  // Norm and inner-product preservation under random driven Hamiltonians.
  for (int trial = 0; trial < 10; ++trial) {
    const int n = gen.integer(2, 16);
    const RealMatrix a = gen.symmetric(n), b = gen.symmetric(n);
    const ComplexMatrix psi0 = gen.ginibre(n, 3);
    const ComplexMatrix psi =
        propagate([&](double t) -> RealMatrix { return a + std::cos(2.0 * t) * b; }, psi0, 2.0, 0.03);
    if (((psi.adjoint() * psi) - psi0.adjoint() * psi0).norm() > 1e-10 * psi0.squaredNorm()) {
      failed.push_back("unitarity");
      break;
    }
  }

  // Conserved quantities.
  {
    const auto basis = enumerate_basis(2, 3, {4, std::nullopt, std::nullopt});
    const auto terms = build_terms(basis, InteractionTable(3));
    const auto sec = secular_terms(terms);
    for (int trial = 0; trial < 5; ++trial) {
      const ModelParams p{gen.uniform(100, 900), 0.0, gen.uniform(1, 40), gen.uniform(0, 2), {}};
      if (commutator_with_diagonal(build_H(p, terms).matrix(), twice_sz_diagonal(*basis)) > 1e-12 ||
          commutator_with_diagonal(build_H(p, sec).matrix(), quanta_diagonal(*basis)) > 1e-12) {
        failed.push_back("commutators");
        break;
      }
    }
  }

  // Second-order convergence under step halving.
  for (int trial = 0; trial < 3; ++trial) {
    const int n = gen.integer(3, 6);
    const RealMatrix a = gen.symmetric(n), b = gen.symmetric(n);
    const auto h = [&](double t) -> RealMatrix { return a + std::sin(3.0 * t) * b; };
    const ComplexMatrix psi0 = gen.state(n);
    const ComplexMatrix ref = propagate(h, psi0, 2.0, 1e-4);
    const double ratio = (propagate(h, psi0, 2.0, 0.02) - ref).norm() / (propagate(h, psi0, 2.0, 0.01) - ref).norm();
    if (std::abs(ratio - 4.0) > 0.6) {
      failed.push_back(fmt("step halving (ratio %.2f)", ratio));
      break;
    }
  }

  // Choi round trip on random unitary channels.
  for (int trial = 0; trial < 20; ++trial) {
    const tomo::Mat3 u = gen.unitary(3);
    const tomo::Mat3 rho = gen.ginibre(3, 3);
    if ((tomo::apply_choi(tomo::choi_of_unitary(u), rho) - u * rho * u.adjoint()).norm() > 1e-12) {
      failed.push_back("choi round trip");
      break;
    }
  }

  // Estimator Hermiticity on random valid sets.
  {
    int done = 0;
    while (done < 5) {
      tomo::RotationSet left(10), right(6);
      for (auto& r : left) r = {kPi / 2, gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi)};
      for (auto& r : right) r = {kPi / 2, gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi)};
      try {
        const tomo::ShadowEstimator est(left, right);
        for (int b = -1; b <= 1; ++b) {
          const tomo::Choi s = est.single_shot(3, 2, b);
          if ((s - s.adjoint()).norm() > 1e-12 * s.norm()) failed.push_back("estimator hermiticity");
        }
        ++done;
      } catch (const Error&) {
      }
    }
  }

  std::string detail = "unitarity, commutators, step halving, Choi round trip, estimator Hermiticity";
  if (!failed.empty()) {
    detail = "failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "basis dimension", 1, basis_dimension},
      {2, "interaction coefficients", 1, interaction_coefficients},
      {3, "effective coupling", 10, effective_coupling},
      {4, "SWAP", 10, swap_gate},
      {5, "CZ phase and populations", 120, cz_phase_and_populations},
      {6, "CZ fidelity threshold", 120, cz_fidelity_threshold},
      {7, "infidelity scaling", 1800, infidelity_scaling},
      {8, "Ising fit", 600, ising_fit},
      {9, "Rabi frequency", 10, rabi_frequency},
      {10, "tomography unbiasedness", 10, tomography_unbiased},
      {11, "sample complexity", 1200, sample_complexity_numbers},
      {12, "bound ordering", 600, bound_ordering},
      {13, "noise exponents", 1200, noise_exponents},
      {14, "property suites", 600, property_suites},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit;
    if (!in_time) o.detail += fmt("; exceeded %.0f s limit", c.time_limit);
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %2d (%s): %s [%.2f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
