#pragma once

#include "fpreg/evolve.hpp"
#include "fpreg/hamiltonian.hpp"
#include "fpreg/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fpreg {

enum class ModelKind { kFull, kSecular };

struct GateResult {
  LogicalMatrix raw;            ///< P^T V P, not unitary when population leaks
  LogicalMatrix unitary;        ///< polar unitary factor of raw
  double induced_phase = 0.0;   ///< phi_00 + phi_11 - phi_01 - phi_10, unwrapped
  std::array<double, 4> leakage{};  ///< 1 - ||P^T V P e_s||^2
  /// max over the protocol of 1 - |<s~(t)|psi_s(t)>|^2, s~ the dressed state
  std::array<double, 4> population_change{};
  /// the same against the bare logical states
  std::array<double, 4> bare_population_change{};
  double fidelity = 0.0;
  double duration = 0.0;
  int steps = 0;
};

/// Polar unitary factor of a square matrix.
LogicalMatrix polar_unitary(const LogicalMatrix& m);

/// Haar average of |<psi|M|psi>|^2 for d = 4: (Tr M M^dag + |Tr M|^2) / 20.
double haar_fidelity_exact(const LogicalMatrix& m);

/// Monte-Carlo Haar average with normalized complex Gaussian states.
struct HaarEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
HaarEstimate haar_fidelity_sampled(const LogicalMatrix& m, int samples, std::uint64_t seed);

/// Fidelity of the full-space evolution V against a logical target, with
/// M = U_target^dag P^T V P.
double haar_fidelity(const ComplexMatrix& v_actual, const LogicalMatrix& target, const RealMatrix& p);

/// Z-corrected CPHASE target diag(e^{i a}, e^{i b}, e^{i c}, e^{i(b + c - a + phi)})
/// built from the diagonal phases of `raw`.
LogicalMatrix cphase_target(const LogicalMatrix& raw, double phi);

/// J-only evolution for t = (2m+1) pi/(2J); the register terms are secular-projected
/// unless `model` is kFull.
GateResult run_swap(double J, int m = 0, ModelKind model = ModelKind::kSecular);

struct CPhaseSpec {
  double target_phase = kPi;
  double u0_over_j0 = 30.0;
  double er_over_u0 = 20.0;
  double eta = 0.3;
  bool adiabatic = true;
  ModelKind model = ModelKind::kFull;
  int steps = 0;        ///< 0 picks the default resolution
  int track_every = 4;  ///< phase tracking stride in steps
};

/// Protocol duration from phi = (1 - 5 eta/4) g T (adiabatic) or phi = g T (square).
double cphase_duration(const CPhaseSpec& spec);

/// Runs the CPHASE protocol in units U0 = 1.
GateResult run_cphase(const CPhaseSpec& spec, const HamiltonianTerms& terms);
GateResult run_cphase(const CPhaseSpec& spec);

struct ScanPoint {
  double u0_over_j0 = 0.0;
  double er_over_u0 = 0.0;
  bool adiabatic = true;
  double phase_exact = 0.0;
  double phase_theory = 0.0;
  double leakage = 0.0;  ///< max over logical states
  double infidelity = 0.0;
  double exchange_amplitude = 0.0;  ///< |<10|M|01>|
};

/// One CZ run per ratio. Runs are independent and spread over `threads` workers.
std::vector<ScanPoint> infidelity_scan(const std::vector<double>& ratios, double er_over_u0,
                                       bool adiabatic, ModelKind model = ModelKind::kFull,
                                       int threads = 1, int steps = 0);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares slope of log y against log x using pairs with y in [lo, hi].
SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo = 1e-7,
                      double hi = 1e-2);

/// CSV columns U0_over_J0,E_R_over_U0,adiabatic,phase_exact,phase_theory,leakage,infidelity.
void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& points);

}  // namespace fpreg
