#include "fpreg/hamiltonian.hpp"

#include "fpreg/error.hpp"

#include "json.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

namespace fpreg {

std::vector<std::string> check_scale_hierarchy(const ModelParams& p, double margin) {
  std::vector<std::string> warnings;
  auto check = [&](double big, double small, const char* big_name, const char* small_name) {
    if (std::abs(big) < margin * std::abs(small)) {
      std::ostringstream msg;
      msg << big_name << " = " << big << " is not much larger than " << small_name << " = " << small;
      warnings.push_back(msg.str());
    }
  };
  if (p.omega0 > 0.0) check(p.omega0, p.E_R, "omega0", "E_R");
  check(p.E_R, p.U, "E_R", "U");
  check(p.U, p.J, "U", "J");
  return warnings;
}

OperatorMatrix::OperatorMatrix(BasisPtr basis, RealMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (!basis_) throw Error(ErrorKind::kInvalidArgument, "operator needs a basis");
  const auto d = static_cast<Eigen::Index>(basis_->size());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw Error(ErrorKind::kDimensionMismatch, "operator matrix does not match basis dimension");
  }
}

bool OperatorMatrix::is_symmetric(double tol) const {
  return (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() <= tol;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
  if (basis_ != other.basis_) {
    throw Error(ErrorKind::kDimensionMismatch, "operators act on different bases");
  }
  return {basis_, matrix_ + other.matrix_};
}

OperatorMatrix OperatorMatrix::operator*(double scale) const { return {basis_, matrix_ * scale}; }

HamiltonianTerms build_terms(BasisPtr basis, const InteractionTable& table,
                             std::vector<double> level_shifts) {
  if (!basis) throw Error(ErrorKind::kInvalidArgument, "null basis");
  const auto& layout = basis->layout();
  const int n_levels = layout.n_levels();
  if (table.n_levels() < n_levels) {
    throw Error(ErrorKind::kDimensionMismatch, "interaction table truncated below basis levels");
  }
  if (level_shifts.empty()) {
    for (int n = 0; n < n_levels; ++n) level_shifts.push_back(level_shift(n));
  }
  if (static_cast<int>(level_shifts.size()) < n_levels) {
    throw Error(ErrorKind::kDimensionMismatch, "fewer anharmonic shifts than levels");
  }

  const auto d = static_cast<Eigen::Index>(basis->size());
  HamiltonianTerms t{basis, RealMatrix::Zero(d, d), RealMatrix::Zero(d, d), RealMatrix::Zero(d, d)};

  const std::array<Spin, 2> spins{Spin::kUp, Spin::kDown};
  for (Eigen::Index a = 0; a < d; ++a) {
    const FockState& s = (*basis)[static_cast<std::size_t>(a)];
    for (const auto& o : occupied_orbitals(s, layout)) t.orbital(a, a) += level_shifts[o.level];

    // sum_{s1 != s2} U_ijkl c+_{i s1} c+_{j s2} c_{l s2} c_{k s1}, on every site
    for (int site = 0; site < layout.n_sites(); ++site) {
      for (int i = 0; i < n_levels; ++i)
        for (int j = 0; j < n_levels; ++j)
          for (int k = 0; k < n_levels; ++k)
            for (int l = 0; l < n_levels; ++l) {
              const double u = table(i, j, k, l);
              if (u == 0.0) continue;
              for (Spin s1 : spins) {
                const Spin s2 = s1 == Spin::kUp ? Spin::kDown : Spin::kUp;
                const std::array<LadderOp, 4> ops{
                    LadderOp::create({site, i, s1}), LadderOp::create({site, j, s2}),
                    LadderOp::annihilate({site, l, s2}), LadderOp::annihilate({site, k, s1})};
                const auto r = apply_ladder(ops, s, layout);
                if (r.sign == 0) continue;
                if (const auto b = basis->find(r.state)) {
                  t.interaction(static_cast<Eigen::Index>(*b), a) += u * r.sign;
                }
              }
            }
    }

    // -sum (c+_{n,x,s} c_{n,y,s} + h.c.) over neighbouring sites
    for (int site = 0; site + 1 < layout.n_sites(); ++site) {
      for (int n = 0; n < n_levels; ++n) {
        for (Spin sp : spins) {
          for (auto [x, y] : {std::pair{site, site + 1}, std::pair{site + 1, site}}) {
            const std::array<LadderOp, 2> ops{LadderOp::create({x, n, sp}),
                                              LadderOp::annihilate({y, n, sp})};
            const auto r = apply_ladder(ops, s, layout);
            if (r.sign == 0) continue;
            if (const auto b = basis->find(r.state)) {
              t.hopping(static_cast<Eigen::Index>(*b), a) -= r.sign;
            }
          }
        }
      }
    }
  }
  return t;
}

HamiltonianTerms register_terms() {
  return build_terms(two_site_register_basis(3), InteractionTable(3));
}

OperatorMatrix build_H(const ModelParams& params, const HamiltonianTerms& terms) {
  RealMatrix h = params.E_R * terms.orbital + params.U * terms.interaction + params.J * terms.hopping;
  if (!params.anharmonic_shifts.empty()) {
    // Replace the default level shifts with the caller's values.
    const auto& layout = terms.basis->layout();
    if (static_cast<int>(params.anharmonic_shifts.size()) < layout.n_levels()) {
      throw Error(ErrorKind::kDimensionMismatch, "fewer anharmonic shifts than levels");
    }
    for (Eigen::Index a = 0; a < h.rows(); ++a) {
      double e = 0.0;
      for (const auto& o : occupied_orbitals((*terms.basis)[static_cast<std::size_t>(a)], layout)) {
        e += params.anharmonic_shifts[o.level];
      }
      h(a, a) += params.E_R * (e - terms.orbital(a, a));
    }
  }
  return {terms.basis, std::move(h)};
}

RealMatrix secular_project(const RealMatrix& h, const RealVector& energies, double tol) {
  if (h.rows() != energies.size() || h.cols() != energies.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "energy vector does not match operator");
  }
  RealMatrix out = h;
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      if (std::abs(energies(r) - energies(c)) > tol) out(r, c) = 0.0;
  return out;
}

HamiltonianTerms secular_terms(const HamiltonianTerms& terms, double tol) {
  const RealVector e = terms.orbital_energies();
  return {terms.basis, terms.orbital, secular_project(terms.interaction, e, tol),
          secular_project(terms.hopping, e, tol)};
}

namespace {

template <class F>
RealVector per_state(const BasisIndex& basis, F f) {
  RealVector d(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) d(static_cast<Eigen::Index>(i)) = f(basis[i]);
  return d;
}

}  // namespace

RealVector particle_number_diagonal(const BasisIndex& basis) {
  return per_state(basis, [](const FockState& s) { return double(s.particle_number()); });
}

RealVector quanta_diagonal(const BasisIndex& basis) {
  return per_state(basis, [&](const FockState& s) { return double(quanta(s, basis.layout())); });
}

RealVector twice_sz_diagonal(const BasisIndex& basis) {
  return per_state(basis, [&](const FockState& s) { return double(twice_sz(s, basis.layout())); });
}

double commutator_with_diagonal(const RealMatrix& h, const RealVector& d) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < h.rows(); ++r)
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      worst = std::max(worst, std::abs(h(r, c) * (d(c) - d(r))));
  return worst;
}

void write_operator_json(std::ostream& out, const OperatorMatrix& op) {
  nlohmann::json j;
  j["dimension"] = op.dimension();
  nlohmann::json masks = nlohmann::json::array();
  for (const auto& s : op.basis()->states()) masks.push_back(s.bits);
  j["basis"] = masks;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < op.dimension(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < op.dimension(); ++c) row.push_back(op.matrix()(r, c));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  out << j.dump() << '\n';
}

}  // namespace fpreg
