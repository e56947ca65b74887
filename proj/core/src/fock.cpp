#include "fpreg/fock.hpp"

#include "fpreg/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

namespace fpreg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kMissingBasisState: return "missing_basis_state";
    case ErrorKind::kNonHermitian: return "non_hermitian";
    case ErrorKind::kDegenerateIntermediate: return "degenerate_intermediate_state";
    case ErrorKind::kAdiabaticityFailure: return "adiabaticity_failure";
    case ErrorKind::kInformationallyIncomplete: return "informationally_incomplete_set";
    case ErrorKind::kOptimizationFailure: return "optimization_failure";
    case ErrorKind::kDivisionByZero: return "division_by_zero";
    case ErrorKind::kConfig: return "config_error";
    case ErrorKind::kIo: return "io_error";
  }
  return "unknown";
}

OrbitalLayout::OrbitalLayout(int n_sites, int n_levels) : n_sites_(n_sites), n_levels_(n_levels) {
  if (n_sites < 1 || n_levels < 1) {
    throw Error(ErrorKind::kInvalidArgument, "orbital layout needs at least one site and one level");
  }
  if (size() > 64) {
    throw Error(ErrorKind::kInvalidArgument, "orbital layout exceeds 64 orbitals");
  }
}

bool OrbitalLayout::contains(const Orbital& o) const noexcept {
  return o.site >= 0 && o.site < n_sites_ && o.level >= 0 && o.level < n_levels_;
}

int OrbitalLayout::index(const Orbital& o) const {
  if (!contains(o)) {
    throw Error(ErrorKind::kInvalidArgument, "orbital outside the truncated layout");
  }
  return (o.site * n_levels_ + o.level) * 2 + static_cast<int>(o.spin);
}

Orbital OrbitalLayout::orbital(int index) const {
  const int spatial = index / 2;
  return {spatial / n_levels_, spatial % n_levels_, static_cast<Spin>(index % 2)};
}

int FockState::particle_number() const noexcept { return std::popcount(bits); }

int quanta(const FockState& state, const OrbitalLayout& layout) {
  int q = 0;
  for (std::uint64_t b = state.bits; b != 0; b &= b - 1) {
    q += layout.orbital(std::countr_zero(b)).level;
  }
  return q;
}

int twice_sz(const FockState& state, const OrbitalLayout& layout) {
  (void)layout;
  // Even bit positions are spin up.
  constexpr std::uint64_t kUpMask = 0x5555555555555555ULL;
  return std::popcount(state.bits & kUpMask) - std::popcount(state.bits & ~kUpMask);
}

std::vector<Orbital> occupied_orbitals(const FockState& state, const OrbitalLayout& layout) {
  std::vector<Orbital> out;
  for (std::uint64_t b = state.bits; b != 0; b &= b - 1) {
    out.push_back(layout.orbital(std::countr_zero(b)));
  }
  return out;
}

namespace {

// Parity of the number of occupied orbitals strictly below `index`.
int prefix_sign(std::uint64_t bits, int index) {
  const std::uint64_t below = index == 0 ? 0 : (bits & ((std::uint64_t{1} << index) - 1));
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

LadderResult apply_ladder(std::span<const LadderOp> ops, const FockState& state,
                          const OrbitalLayout& layout) {
  LadderResult r{1, state};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const int k = layout.index(it->orbital);
    const std::uint64_t bit = std::uint64_t{1} << k;
    const bool filled = (r.state.bits & bit) != 0;
    if (filled == it->creation) {
      return {0, r.state};
    }
    r.sign *= prefix_sign(r.state.bits, k);
    r.state.bits ^= bit;
  }
  return r;
}

LadderResult create_ordered(std::span<const Orbital> orbitals, const OrbitalLayout& layout) {
  std::vector<LadderOp> ops;
  ops.reserve(orbitals.size());
  for (const auto& o : orbitals) ops.push_back(LadderOp::create(o));
  return apply_ladder(ops, FockState{}, layout);
}

BasisIndex::BasisIndex(OrbitalLayout layout, BasisConstraints constraints,
                       std::vector<FockState> states)
    : layout_(layout), constraints_(constraints), states_(std::move(states)) {
  lookup_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) lookup_.emplace(states_[i].bits, i);
}

std::optional<std::size_t> BasisIndex::find(const FockState& state) const {
  auto it = lookup_.find(state.bits);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

BasisPtr enumerate_basis(int n_sites, int n_levels, const BasisConstraints& c) {
  OrbitalLayout layout(n_sites, n_levels);
  std::vector<FockState> states;
  const int n_orb = layout.size();
  if (c.particles < 0 || c.particles > n_orb) {
    return std::make_shared<BasisIndex>(layout, c, std::move(states));
  }
  if (c.particles == 0) {
    if (c.quanta.value_or(0) == 0 && c.twice_sz.value_or(0) == 0) states.push_back(FockState{});
    return std::make_shared<BasisIndex>(layout, c, std::move(states));
  }
  // Walk all masks with exactly `particles` bits set in increasing order.
  const std::uint64_t limit = n_orb == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_orb);
  std::uint64_t mask = (std::uint64_t{1} << c.particles) - 1;
  while (mask < limit) {
    const FockState s{mask};
    const bool q_ok = !c.quanta || quanta(s, layout) == *c.quanta;
    const bool sz_ok = !c.twice_sz || twice_sz(s, layout) == *c.twice_sz;
    if (q_ok && sz_ok) states.push_back(s);
    const std::uint64_t lowest = mask & (~mask + 1);
    const std::uint64_t ripple = mask + lowest;
    if (ripple == 0) break;
    mask = ripple | (((mask ^ ripple) >> 2) / lowest);
  }
  return std::make_shared<BasisIndex>(layout, c, std::move(states));
}

BasisPtr two_site_register_basis(int n_levels) {
  return enumerate_basis(2, n_levels, BasisConstraints{4, 4, 0});
}

RealMatrix build_logical_isometry(const BasisIndex& basis) {
  const auto& layout = basis.layout();
  if (layout.n_sites() != 2 || layout.n_levels() < 3) {
    throw Error(ErrorKind::kInvalidArgument,
                "logical isometry needs a two-site basis with at least three levels");
  }
  constexpr int kL = 0;
  constexpr int kR = 1;
  const auto up = Spin::kUp;
  const auto dn = Spin::kDown;

  struct Term {
    double amplitude;
    std::vector<Orbital> orbitals;
  };
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<std::vector<Term>> columns = {
      {{1.0, {{kL, 1, up}, {kL, 1, dn}, {kR, 1, up}, {kR, 1, dn}}}},
      {{h, {{kL, 1, up}, {kL, 1, dn}, {kR, 0, up}, {kR, 2, dn}}},
       {-h, {{kL, 1, up}, {kL, 1, dn}, {kR, 0, dn}, {kR, 2, up}}}},
      {{h, {{kL, 0, up}, {kL, 2, dn}, {kR, 1, up}, {kR, 1, dn}}},
       {-h, {{kL, 0, dn}, {kL, 2, up}, {kR, 1, up}, {kR, 1, dn}}}},
      {{0.5, {{kL, 0, up}, {kL, 2, dn}, {kR, 0, up}, {kR, 2, dn}}},
       {-0.5, {{kL, 0, dn}, {kL, 2, up}, {kR, 0, up}, {kR, 2, dn}}},
       {-0.5, {{kL, 0, up}, {kL, 2, dn}, {kR, 0, dn}, {kR, 2, up}}},
       {0.5, {{kL, 0, dn}, {kL, 2, up}, {kR, 0, dn}, {kR, 2, up}}}},
  };

  RealMatrix p = RealMatrix::Zero(static_cast<Eigen::Index>(basis.size()), 4);
  for (int col = 0; col < 4; ++col) {
    for (const auto& term : columns[col]) {
      const auto r = create_ordered(term.orbitals, layout);
      const auto idx = basis.find(r.state);
      if (!idx) {
        throw Error(ErrorKind::kMissingBasisState,
                    "logical state component missing from basis (column " + std::to_string(col) + ")");
      }
      p(static_cast<Eigen::Index>(*idx), col) += term.amplitude * r.sign;
    }
  }
  return p;
}

void write_basis_jsonl(std::ostream& out, const BasisIndex& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    nlohmann::json occ = nlohmann::json::array();
    for (const auto& o : occupied_orbitals(basis[i], basis.layout())) {
      occ.push_back({o.level, o.site, o.spin == Spin::kUp ? "up" : "down"});
    }
    out << nlohmann::json{{"index", i}, {"occupied", occ}}.dump() << '\n';
  }
}

}  // namespace fpreg
