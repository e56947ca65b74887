#pragma once

/**
 * @file fock.hpp
 * @brief Truncated fermionic Fock space over (site, level, spin) orbitals.
 *
 * Orbitals are ordered by (site, level, spin) ascending and mapped to bit
 * positions of a 64-bit occupation mask. Every fermionic sign in the library
 * is computed relative to this ordering: a state |k1 k2 ...> with k1 < k2 < ...
 * stands for c+_{k1} c+_{k2} ... |vac>.
 */

#include "fpreg/types.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace fpreg {

enum class Spin : std::uint8_t { kUp = 0, kDown = 1 };

struct Orbital {
  int site = 0;
  int level = 0;
  Spin spin = Spin::kUp;

  auto operator<=>(const Orbital&) const = default;
};

/// Maps orbitals onto bit positions for a lattice of `n_sites` sites with
/// `n_levels` harmonic levels each.
class OrbitalLayout {
 public:
  OrbitalLayout(int n_sites, int n_levels);

  int n_sites() const noexcept { return n_sites_; }
  int n_levels() const noexcept { return n_levels_; }
  int size() const noexcept { return 2 * n_sites_ * n_levels_; }

  bool contains(const Orbital& orbital) const noexcept;
  int index(const Orbital& orbital) const;
  Orbital orbital(int index) const;

  bool operator==(const OrbitalLayout&) const = default;

 private:
  int n_sites_;
  int n_levels_;
};

/// Occupation configuration; bit i set means orbital i of the layout is filled.
struct FockState {
  std::uint64_t bits = 0;

  bool occupied(int orbital_index) const noexcept { return (bits >> orbital_index) & 1U; }
  int particle_number() const noexcept;

  bool operator==(const FockState&) const = default;
};

int quanta(const FockState& state, const OrbitalLayout& layout);
/// Twice the z-projection of spin, (n_up - n_down).
int twice_sz(const FockState& state, const OrbitalLayout& layout);
std::vector<Orbital> occupied_orbitals(const FockState& state, const OrbitalLayout& layout);

/// Builds c+_{k1} c+_{k2} ... |vac>; returns the canonical state and the sign
/// of reordering the listed orbitals into canonical order (0 on repetition).
struct LadderResult {
  int sign = 0;
  FockState state;
};
LadderResult create_ordered(std::span<const Orbital> orbitals, const OrbitalLayout& layout);

struct LadderOp {
  Orbital orbital;
  bool creation = true;

  static LadderOp create(Orbital o) { return {o, true}; }
  static LadderOp annihilate(Orbital o) { return {o, false}; }
};

/// Applies the operator product ops[0] ops[1] ... ops[n-1] to `state`
/// (rightmost operator acts first). sign == 0 means the state was annihilated.
LadderResult apply_ladder(std::span<const LadderOp> ops, const FockState& state,
                          const OrbitalLayout& layout);

/// Conserved quantities fixing a sector. An empty optional leaves that
/// quantity unconstrained.
struct BasisConstraints {
  int particles = 0;
  std::optional<int> quanta = 0;
  std::optional<int> twice_sz = 0;
};

/// Ordered list of Fock states with reverse lookup. Immutable after construction.
class BasisIndex {
 public:
  BasisIndex(OrbitalLayout layout, BasisConstraints constraints, std::vector<FockState> states);

  const OrbitalLayout& layout() const noexcept { return layout_; }
  const BasisConstraints& constraints() const noexcept { return constraints_; }
  std::size_t size() const noexcept { return states_.size(); }
  const FockState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<FockState>& states() const noexcept { return states_; }

  std::optional<std::size_t> find(const FockState& state) const;

 private:
  OrbitalLayout layout_;
  BasisConstraints constraints_;
  std::vector<FockState> states_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

using BasisPtr = std::shared_ptr<const BasisIndex>;

/// All states with the given (N, Q, 2Sz), ordered by increasing occupation mask.
/// Unsatisfiable constraints give an empty basis.
BasisPtr enumerate_basis(int n_sites, int n_levels, const BasisConstraints& constraints);

/// The two-site sector holding the logical register: 4 particles, 4 quanta, Sz = 0.
BasisPtr two_site_register_basis(int n_levels = 3);

/// Columns are |00>, |01>, |10>, |11> expanded over the basis: each site holds a
/// spin singlet in either (1,1) (qubit 0) or the symmetric (0,2) pair (qubit 1).
RealMatrix build_logical_isometry(const BasisIndex& basis);

/// One JSON object per line: {"index":i,"occupied":[[level,site,"up"|"down"],...]}.
void write_basis_jsonl(std::ostream& out, const BasisIndex& basis);

}  // namespace fpreg
