#pragma once

#include <iosfwd>
#include <vector>

namespace fpreg {

/// Harmonic-oscillator eigenfunction psi_n(x) in oscillator-length units.
double ho_wavefunction(int n, double x);

/// Integral of psi_i psi_j psi_k psi_l over the real line, by Gauss-Hermite
/// quadrature with `nodes` points.
double quartic_overlap(int i, int j, int k, int l, int nodes = 64);

/// Contact-interaction coefficient U_ijkl in units of U.
///
/// Normalized as (pi/2) times the quartic overlap, i.e. the harmonic length is
/// a_z/pi and the lattice-depth factor is absorbed into U.
double u_matrix_element(int i, int j, int k, int l, int nodes = 64);

/// Dense table of U_ijkl for all level indices below `n_levels`.
class InteractionTable {
 public:
  explicit InteractionTable(int n_levels = 3, int nodes = 64);

  int n_levels() const noexcept { return n_levels_; }
  double operator()(int i, int j, int k, int l) const;

  /// Rows "i,j,k,l,value" with a header line.
  void write_csv(std::ostream& out) const;

 private:
  int n_levels_;
  std::vector<double> values_;
};

/// First-order quartic-anharmonicity shift of level n, in units of E_R:
/// -(1/3) <x^4>_n = -(2n^2 + 2n + 1)/4.
double level_shift(int n, int nodes = 64);

/// Shift of a single-site qubit state (0: both fermions in level 1,
/// 1: the (0,2) pair), in units of E_R.
double anharmonic_corrections(int qubit_state);

}  // namespace fpreg
