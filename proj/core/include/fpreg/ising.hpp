#pragma once

/**
 * @file ising.hpp
 * @brief Transverse-field Ising dynamics engineered by modulating U.
 *
 * The two-site register is driven with U(t) = U0 + U1 cos((E_R + delta) t) after
 * J has been ramped up. The projected evolution, in the frame rotating at
 * E_R + delta and against the J-dressed logical states, is compared with
 *
 *   H(t) = c(t) . (sigma^1 + sigma^2) + g(t) sigma_z^1 sigma_z^2,
 *   c_z = alpha J^2/U0 + beta,  c_x = (gamma_x + gamma_x2 J^2/U0^2) U1,
 *   c_y = gamma_y U1,  g = kappa J^2/U0,
 *
 * with c_x and c_y switched on together with the modulation.
 */

#include "fpreg/gates.hpp"
#include "fpreg/hamiltonian.hpp"
#include "fpreg/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fpreg {

/// Alternative qubit-state coupling under U in the single-qubit model, sqrt(pi/128).
double single_qubit_coupling();

/// Rotating-frame effective Hamiltonian [[-delta/2, w], [w, delta/2]], w = sqrt(pi/128) U1 / 2.
Eigen::Matrix2d single_qubit_effective(double U0, double U1, double delta, double E_R);

/// Lab-frame single-qubit Hamiltonian
/// [[E_R/2, c U(t)], [c U(t), -E_R/2]] with c = sqrt(pi/128).
Eigen::Matrix2d single_qubit_lab(double t, double U0, double U1, double delta, double E_R);

struct RabiMeasurement {
  double frequency = 0.0;  ///< measured angular frequency of the |1> population
  double predicted = 0.0;  ///< sqrt(delta^2 + Omega^2), Omega = sqrt(pi/128) U1
  int periods = 0;
};

/// Evolves |0> under single_qubit_lab and measures the population oscillation
/// frequency from the spacing of its upward half-population crossings.
RabiMeasurement measure_rabi_frequency(double U0, double U1, double delta, double E_R,
                                       int periods = 5, int steps_per_drive_period = 64);

struct IsingConfig {
  double E_R = 2.0 * kPi * 140.76;
  double U0 = 30.0;
  double U1 = 2.0;
  double J0 = 0.9;
  double delta = 0.0;
  double T = 24.0;
  double eta = 0.25;
  double step = 2e-4;
  double checkpoint = 0.25;
  ModelKind model = ModelKind::kFull;

  double modulation_start() const { return eta * T; }
  PulseSchedule schedule() const;
};

struct IsingTrajectory {
  std::vector<double> times;
  /// Logical block F(t)^T psi(t) of the evolved logical states, rotating frame.
  std::vector<LogicalMatrix> logical;
  /// Population of every basis state for the run started in |00>.
  std::vector<RealVector> populations;
};

/// Full two-site evolution sampled every `checkpoint`.
IsingTrajectory simulate_ising_pair(const IsingConfig& config, const HamiltonianTerms& terms);
IsingTrajectory simulate_ising_pair(const IsingConfig& config);

struct IsingFitParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_x = 0.0;
  double gamma_x2 = 0.0;
  double gamma_y = 0.0;
  double kappa = 0.0;

  std::array<double, 6> to_array() const { return {alpha, beta, gamma_x, gamma_x2, gamma_y, kappa}; }
  static IsingFitParams from_array(const std::array<double, 6>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5]};
  }
  /// g prefactor in units of J^2/U0 under the energy convention E00+E11-E01-E10 = -g.
  double g_prefactor() const { return -4.0 * kappa; }
};

/// Closed-form starting point from the second-order and rotating-frame results.
IsingFitParams initial_fit_guess(const IsingConfig& config);

/// Model propagators at each checkpoint time (model step `model_step`).
std::vector<LogicalMatrix> ising_model_evolution(const IsingFitParams& p, const IsingConfig& config,
                                                 const std::vector<double>& times,
                                                 double model_step = 0.01);

/// Mean over checkpoints of the Haar-average fidelity between model and data.
double ising_fit_fidelity(const IsingFitParams& p, const IsingConfig& config,
                          const IsingTrajectory& data, double model_step = 0.01);

struct IsingFitResult {
  IsingFitParams params;
  double fidelity = 0.0;        ///< mean over checkpoints
  double final_fidelity = 0.0;  ///< at t = T
  int evaluations = 0;
  bool converged = false;
};

struct IsingFitOptions {
  int restarts = 5;
  std::uint64_t seed = 7;
  double model_step = 0.01;
  int max_iterations = 3000;
};

/// Multi-start Nelder-Mead maximization of ising_fit_fidelity.
IsingFitResult fit_effective_ising(const IsingTrajectory& data, const IsingConfig& config,
                                   const IsingFitParams& start, const IsingFitOptions& options = {});
IsingFitResult fit_effective_ising(const IsingTrajectory& data, const IsingConfig& config,
                                   const IsingFitOptions& options = {});

struct DetuningPoint {
  double delta = 0.0;
  double c_x = 0.0;  ///< plateau values
  double c_y = 0.0;
  double c_z = 0.0;
  double g = 0.0;
  double fidelity = 0.0;
};

/// Simulation and fit at each detuning. Points run on up to `threads` workers.
std::vector<DetuningPoint> detuning_scan(const IsingConfig& base, const std::vector<double>& deltas,
                                         const IsingFitOptions& options = {}, int threads = 1);

/// CSV columns Delta,c_x,c_y,c_z,g,fidelity.
void write_detuning_csv(std::ostream& out, const std::vector<DetuningPoint>& points);

}  // namespace fpreg
