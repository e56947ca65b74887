#pragma once

/**
 * @file hamiltonian.hpp
 * @brief Fermi-Hubbard terms H_E, H_U, H_J on an enumerated basis.
 *
 * Each term is stored as a dimensionless real matrix: H_E in units of E_R,
 * H_U in units of U, H_J in units of J. A Hamiltonian at given (E_R, U, J) is
 * the weighted sum E_R*H_E + U*H_U + J*H_J.
 */

#include "fpreg/fock.hpp"
#include "fpreg/interaction.hpp"
#include "fpreg/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fpreg {

struct ModelParams {
  double E_R = 1.0;
  double omega0 = 0.0;  ///< harmonic splitting; 0 skips the omega0 >> E_R check
  double U = 0.0;
  double J = 0.0;
  /// Per-level shifts in units of E_R. Empty means the first-order quartic values.
  std::vector<double> anharmonic_shifts;
};

/// Human-readable warnings for every violated link of omega0 >> E_R >> U >> J.
/// `margin` is the minimum ratio between adjacent scales.
std::vector<std::string> check_scale_hierarchy(const ModelParams& params, double margin = 3.0);

/// Dense real matrix tagged with the basis it acts on.
class OperatorMatrix {
 public:
  OperatorMatrix(BasisPtr basis, RealMatrix matrix);

  const BasisPtr& basis() const noexcept { return basis_; }
  const RealMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }

  bool is_symmetric(double tol = 1e-12) const;

  OperatorMatrix operator+(const OperatorMatrix& other) const;
  OperatorMatrix operator*(double scale) const;

 private:
  BasisPtr basis_;
  RealMatrix matrix_;
};

struct HamiltonianTerms {
  BasisPtr basis;
  RealMatrix orbital;      ///< H_E / E_R, diagonal
  RealMatrix interaction;  ///< H_U / U, on-site opposite-spin pairs
  RealMatrix hopping;      ///< H_J / J, nearest-neighbour, level and spin preserving

  Eigen::Index dimension() const noexcept { return orbital.rows(); }
  RealVector orbital_energies() const { return orbital.diagonal(); }
};

/// Builds the three dimensionless terms. Matrix elements leading outside the
/// basis (quanta-changing interaction terms in a fixed-Q sector) are dropped.
HamiltonianTerms build_terms(BasisPtr basis, const InteractionTable& table,
                             std::vector<double> level_shifts = {});

/// Terms on the two-site register sector with three levels.
HamiltonianTerms register_terms();

/// E_R*H_E + U*H_U + J*H_J.
OperatorMatrix build_H(const ModelParams& params, const HamiltonianTerms& terms);

/// Zeroes every element connecting states whose entries of `energies` differ
/// by more than `tol`.
RealMatrix secular_project(const RealMatrix& h, const RealVector& energies, double tol = 1e-9);

/// The same terms with H_U and H_J secular-projected against H_E.
HamiltonianTerms secular_terms(const HamiltonianTerms& terms, double tol = 1e-9);

/// Diagonal conserved quantities of each basis state.
RealVector particle_number_diagonal(const BasisIndex& basis);
RealVector quanta_diagonal(const BasisIndex& basis);
RealVector twice_sz_diagonal(const BasisIndex& basis);

/// Max-abs entry of [H, diag(d)].
double commutator_with_diagonal(const RealMatrix& h, const RealVector& d);

/// {"dimension": D, "basis": [masks...], "matrix": [[...], ...]}.
void write_operator_json(std::ostream& out, const OperatorMatrix& op);

}  // namespace fpreg
