#pragma once

#include "fpreg/hamiltonian.hpp"
#include "fpreg/types.hpp"

#include <array>

namespace fpreg {

struct EffectiveParams {
  double g = 0.0;      ///< Ising coupling
  double omega = 0.0;  ///< single-qubit splitting shift
};

/// (3152/155) sqrt(2/pi), the closed-form g in units of J^2/U.
double ising_prefactor();
/// (156/31) sqrt(2/pi), magnitude of the hopping part of omega in units of J^2/U.
double omega_hopping_prefactor();

/// g = ising_prefactor() J^2/U, omega = pi U^2/(16 E_R) - omega_hopping_prefactor() J^2/U.
/// Throws kDivisionByZero for U = 0 or E_R = 0.
EffectiveParams effective_parameters(double J, double U, double E_R);

/// Second-order energy shift sum_f |<f|V|s>|^2 / (E_s - E_f) over the eigenbasis of h0.
///
/// `state` must be an eigenvector of h0. Eigenvalues within `degeneracy_tol` of
/// E_s are skipped when V has no weight on them; otherwise kDegenerateIntermediate.
double second_order_shift(const RealMatrix& h0, const RealMatrix& v, const RealVector& state,
                          double degeneracy_tol = 1e-9);

/// Second-order shifts of the four logical states in the secular two-site model,
/// in units of J^2/U, plus the derived effective parameters.
struct SecondOrderOracle {
  std::array<double, 4> shifts{};  ///< |00>, |01>, |10>, |11>
  double g_prefactor = 0.0;        ///< g in units of J^2/U
  double omega_j_prefactor = 0.0;  ///< hopping part of omega in units of J^2/U
  double omega_u_prefactor = 0.0;  ///< interaction part of omega in units of U^2/E_R
};

SecondOrderOracle second_order_oracle(const HamiltonianTerms& terms);

}  // namespace fpreg
