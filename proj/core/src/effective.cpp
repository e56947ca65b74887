#include "fpreg/effective.hpp"

#include "fpreg/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace fpreg {

double ising_prefactor() { return 3152.0 / 155.0 * std::sqrt(2.0 / kPi); }

double omega_hopping_prefactor() { return 156.0 / 31.0 * std::sqrt(2.0 / kPi); }

EffectiveParams effective_parameters(double J, double U, double E_R) {
  if (U == 0.0) throw Error(ErrorKind::kDivisionByZero, "effective parameters need U != 0");
  if (E_R == 0.0) throw Error(ErrorKind::kDivisionByZero, "effective parameters need E_R != 0");
  const double j2u = J * J / U;
  return {ising_prefactor() * j2u, kPi * U * U / (16.0 * E_R) - omega_hopping_prefactor() * j2u};
}

double second_order_shift(const RealMatrix& h0, const RealMatrix& v, const RealVector& state,
                          double degeneracy_tol) {
  if (h0.rows() != state.size() || v.rows() != state.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "second-order inputs disagree in dimension");
  }
  const double e_s = state.dot(h0 * state) / state.squaredNorm();
  if ((h0 * state - e_s * state).norm() > 1e-8 * (1.0 + h0.norm())) {
    throw Error(ErrorKind::kInvalidArgument, "reference state is not an eigenvector of h0");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h0);
  const RealVector coupling = eig.eigenvectors().transpose() * (v * state);
  double degenerate_weight = 0.0;
  double shift = 0.0;
  for (Eigen::Index n = 0; n < coupling.size(); ++n) {
    const double gap = e_s - eig.eigenvalues()(n);
    const double w = coupling(n) * coupling(n);
    if (std::abs(gap) <= degeneracy_tol) {
      degenerate_weight += w;
    } else {
      shift += w / gap;
    }
  }
  if (degenerate_weight > 1e-16 * (1.0 + v.squaredNorm())) {
    throw Error(ErrorKind::kDegenerateIntermediate,
                "perturbation couples the reference state to a degenerate level");
  }
  return shift;
}

SecondOrderOracle second_order_oracle(const HamiltonianTerms& terms) {
  const auto sec = secular_terms(terms);
  const RealMatrix p = build_logical_isometry(*terms.basis);

  // Large E_R separates the H_E blocks; the secular terms never connect them,
  // so the shifts do not depend on its value.
  const RealMatrix h0 = 1e3 * sec.orbital + sec.interaction;
  SecondOrderOracle out;
  for (int s = 0; s < 4; ++s) {
    out.shifts[static_cast<std::size_t>(s)] = second_order_shift(h0, sec.hopping, p.col(s));
  }
  const auto& d = out.shifts;
  out.g_prefactor = -(d[0] + d[3] - d[1] - d[2]);
  out.omega_j_prefactor = 0.5 * (d[0] - d[3]);

  // Single site: interaction-induced coupling of |0> and |1> across the E_R gap.
  auto site = enumerate_basis(1, terms.basis->layout().n_levels(), BasisConstraints{2, 2, 0});
  const auto one = build_terms(site, InteractionTable(terms.basis->layout().n_levels()));
  const RealMatrix u_sec = secular_project(one.interaction, one.orbital_energies());
  const RealMatrix h0_site = one.orbital;
  const RealMatrix v_site = one.interaction - u_sec;
  const auto& layout = site->layout();
  RealVector q0 = RealVector::Zero(static_cast<Eigen::Index>(site->size()));
  RealVector q1 = q0;
  {
    const std::array<Orbital, 2> a{Orbital{0, 1, Spin::kUp}, Orbital{0, 1, Spin::kDown}};
    const auto r = create_ordered(a, layout);
    q0(static_cast<Eigen::Index>(*site->find(r.state))) = r.sign;
    const std::array<Orbital, 2> b{Orbital{0, 0, Spin::kUp}, Orbital{0, 2, Spin::kDown}};
    const std::array<Orbital, 2> c{Orbital{0, 0, Spin::kDown}, Orbital{0, 2, Spin::kUp}};
    const auto rb = create_ordered(b, layout);
    const auto rc = create_ordered(c, layout);
    q1(static_cast<Eigen::Index>(*site->find(rb.state))) += rb.sign / std::sqrt(2.0);
    q1(static_cast<Eigen::Index>(*site->find(rc.state))) -= rc.sign / std::sqrt(2.0);
  }
  out.omega_u_prefactor =
      second_order_shift(h0_site, v_site, q0) - second_order_shift(h0_site, v_site, q1);
  return out;
}

}  // namespace fpreg
