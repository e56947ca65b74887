#pragma once

/**
 * @file evolve.hpp
 * @brief Piecewise-constant propagation with exact per-step diagonalization.
 */

#include "fpreg/types.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fpreg {

struct PulseSchedule {
  double J0 = 0.0;
  double U0 = 0.0;
  double U1 = 0.0;
  double delta = 0.0;  ///< detuning of the modulation from E_R
  double E_R = 0.0;
  double T = 0.0;
  double eta = 0.3;    ///< ramp fraction, in (0, 0.5]
  bool adiabatic = true;  ///< false gives a square J pulse on [0, T)

  void validate() const;
};

/// sin^2 ramp up on [0, eta T], plateau J0, mirrored ramp down; 0 outside [0, T].
double pulse_J(double t, const PulseSchedule& s);
/// U0 + U1 cos((E_R + delta) t).
double pulse_U(double t, const PulseSchedule& s);

using HamiltonianFn = std::function<RealMatrix(double)>;
using StepObserver = std::function<void(int step, double t, const ComplexMatrix& states)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;  ///< D x k, one column per evolved state
  std::vector<std::vector<double>> phases;  ///< optional, one row per stored time

  const ComplexMatrix& final_states() const { return states.back(); }
};

struct EvolveOptions {
  int store_every = 0;  ///< store every n-th step; 0 keeps only t=0 and t=T
  StepObserver observer;  ///< called after every step
};

/// Propagates the columns of `psi0` from 0 to T with steps of at most `step`,
/// each by exp(-i H(t_k + d/2) d). H must be real symmetric (kNonHermitian otherwise).
Trajectory evolve(const HamiltonianFn& h, const ComplexMatrix& psi0, double T, double step,
                  const EvolveOptions& options = {});

/// Same as evolve, returning only the final state matrix.
ComplexMatrix propagate(const HamiltonianFn& h, const ComplexMatrix& psi0, double T, double step,
                        const StepObserver& observer = {});

struct StepChoice {
  double step = 0.0;
  double max_slew = 0.0;  ///< max ||dH/dt|| over the sampling grid
  double halving_gap = 0.0;  ///< 1 - fidelity between runs at step and step/2
  int halvings = 0;
};

/// Picks d with max ||dH/dt|| d^2 <= tolerance, then halves it until the final
/// states at d and d/2 agree to 1 - tolerance (mean state fidelity).
StepChoice choose_step(const HamiltonianFn& h, const ComplexMatrix& psi0, double T, double tolerance,
                       int grid = 256, int max_halvings = 12);

/// Follows eigenvectors of a slowly varying real symmetric H by overlap.
///
/// Eigenvalues within `cluster_tol` (relative to the spectral width) are grouped and
/// the tracked vectors are parallel-transported into each group by a polar factor,
/// which fixes the gauge continuously.
class DressedFrameTracker {
 public:
  explicit DressedFrameTracker(RealMatrix initial_frame, double cluster_tol = 1e-4,
                               double min_overlap = 0.5);

  /// Moves the frame onto the eigenvectors of `h`. kAdiabaticityFailure if a
  /// tracked vector keeps less than `min_overlap` of its weight.
  const RealMatrix& update(const RealMatrix& h);

  const RealMatrix& frame() const noexcept { return frame_; }
  const RealVector& energies() const noexcept { return energies_; }

 private:
  RealMatrix frame_;
  RealVector energies_;
  double cluster_tol_;
  double min_overlap_;
};

/// Accumulates arg<f_j|psi_j> continuously, with a co-rotating reference frame
/// exp(-i e_ref_j t) removed.
class PhaseAccumulator {
 public:
  PhaseAccumulator(RealVector reference_energies, double min_overlap = 0.5);

  void observe(double t, const ComplexVector& overlaps);
  const std::vector<double>& phases() const noexcept { return phases_; }

 private:
  RealVector reference_;
  double min_overlap_;
  std::vector<double> phases_;
  std::vector<double> last_raw_;
  bool started_ = false;
};

/// Unwrapped phases of each evolved column against its dressed eigenstate at
/// every stored time of `traj`. `frame_h` gives the Hamiltonian whose
/// eigenvectors define the dressed states; `initial_frame` holds the real
/// vectors they connect to at t = 0.
std::vector<std::vector<double>> accumulated_phase(const Trajectory& traj, const HamiltonianFn& frame_h,
                                                   const RealMatrix& initial_frame,
                                                   const RealVector& reference_energies);

/// CSV: time, pop_<state>_<col>..., phase_<col>... (phases only if stored).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int column = 0);

}  // namespace fpreg
