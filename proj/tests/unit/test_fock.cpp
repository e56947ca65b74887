#include "doctest.h"

#include "fpreg/error.hpp"
#include "fpreg/fock.hpp"

#include "generators.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <vector>

using namespace fpreg;

namespace {

// Jordan-Wigner matrices on the full 2^n Fock space, built independently of apply_ladder.
// Bit k of the column index is the occupation of orbital k.
std::vector<RealMatrix> jordan_wigner(int n) {
  const int dim = 1 << n;
  std::vector<RealMatrix> c(static_cast<std::size_t>(n), RealMatrix::Zero(dim, dim));
  for (int k = 0; k < n; ++k) {
    for (int s = 0; s < dim; ++s) {
      if (!((s >> k) & 1)) continue;
      int parity = 0;
      for (int q = 0; q < k; ++q) parity += (s >> q) & 1;
      c[static_cast<std::size_t>(k)](s ^ (1 << k), s) = (parity % 2) ? -1.0 : 1.0;
    }
  }
  return c;
}

int brute_force_sector_size(int n_sites, int n_levels, int particles, int q, int twice_sz) {
  const int n_orb = 2 * n_sites * n_levels;
  int count = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n_orb); ++m) {
    if (std::popcount(m) != particles) continue;
    int quanta_sum = 0;
    int sz = 0;
    for (int k = 0; k < n_orb; ++k) {
      if (!((m >> k) & 1)) continue;
      quanta_sum += (k / 2) % n_levels;
      sz += (k % 2 == 0) ? 1 : -1;
    }
    if (quanta_sum == q && sz == twice_sz) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("register sector has 59 states") {
  const auto basis = two_site_register_basis();
  CHECK(basis->size() == 59);
  CHECK(static_cast<int>(basis->size()) == brute_force_sector_size(2, 3, 4, 4, 0));
}

TEST_CASE("sector sizes agree with brute-force counting") {
  for (int levels = 1; levels <= 3; ++levels)
    for (int n = 0; n <= 5; ++n)
      for (int q = 0; q <= 5; ++q)
        for (int sz = -2; sz <= 2; ++sz) {
          const auto b = enumerate_basis(2, levels, {n, q, sz});
          CHECK(static_cast<int>(b->size()) == brute_force_sector_size(2, levels, n, q, sz));
        }
}

TEST_CASE("unconstrained quantities are not filtered") {
  const auto all = enumerate_basis(1, 2, {2, std::nullopt, std::nullopt});
  CHECK(all->size() == 6);
  const auto only_sz = enumerate_basis(1, 2, {2, std::nullopt, 0});
  CHECK(only_sz->size() == 4);
}

TEST_CASE("basis is ordered by mask and indexable") {
  const auto basis = two_site_register_basis();
  for (std::size_t i = 1; i < basis->size(); ++i) CHECK((*basis)[i - 1].bits < (*basis)[i].bits);
  for (std::size_t i = 0; i < basis->size(); ++i) CHECK(basis->find((*basis)[i]) == i);
  CHECK_FALSE(basis->find(FockState{1}).has_value());
}

TEST_CASE("impossible sectors are empty") {
  CHECK(enumerate_basis(2, 3, {13, 0, 0})->size() == 0);
  CHECK(enumerate_basis(2, 3, {-1, 0, 0})->size() == 0);
  CHECK(enumerate_basis(2, 3, {4, 100, 0})->size() == 0);
  CHECK(enumerate_basis(2, 3, {0, 0, 0})->size() == 1);
}

TEST_CASE("layout rejects invalid shapes") {
  CHECK_THROWS_AS(OrbitalLayout(0, 3), Error);
  CHECK_THROWS_AS(OrbitalLayout(11, 3), Error);
  const OrbitalLayout layout(2, 3);
  CHECK_THROWS_AS(layout.index({2, 0, Spin::kUp}), Error);
  for (int k = 0; k < layout.size(); ++k) CHECK(layout.index(layout.orbital(k)) == k);
}

TEST_CASE("ladder signs match Jordan-Wigner matrices on random strings") {
  const OrbitalLayout layout(1, 3);
  const int n = layout.size();
  const auto c = jordan_wigner(n);
  testing::Gen gen(11);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<LadderOp> ops;
    const int len = gen.integer(1, 5);
    RealMatrix product = RealMatrix::Identity(1 << n, 1 << n);
    for (int k = 0; k < len; ++k) {
      const int idx = gen.integer(0, n - 1);
      const bool create = gen.integer(0, 1) == 1;
      ops.push_back({layout.orbital(idx), create});
      const RealMatrix& m = c[static_cast<std::size_t>(idx)];
      product = product * (create ? RealMatrix(m.transpose()) : m);
    }
    const int in = gen.integer(0, (1 << n) - 1);
    const auto r = apply_ladder(ops, FockState{static_cast<std::uint64_t>(in)}, layout);
    RealVector expected = product.col(in);
    RealVector got = RealVector::Zero(1 << n);
    if (r.sign != 0) got(static_cast<Eigen::Index>(r.state.bits)) = r.sign;
    CHECK((expected - got).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("canonical anticommutation on random states") {
  const OrbitalLayout layout(2, 2);
  testing::Gen gen(12);
  for (int trial = 0; trial < 300; ++trial) {
    const FockState s{static_cast<std::uint64_t>(gen.integer(0, (1 << layout.size()) - 1))};
    const Orbital a = layout.orbital(gen.integer(0, layout.size() - 1));
    const Orbital b = layout.orbital(gen.integer(0, layout.size() - 1));
    const std::array<LadderOp, 2> ab{LadderOp::annihilate(a), LadderOp::create(b)};
    const std::array<LadderOp, 2> ba{LadderOp::create(b), LadderOp::annihilate(a)};
    std::map<std::uint64_t, int> sum;
    for (const auto& r : {apply_ladder(ab, s, layout), apply_ladder(ba, s, layout)}) {
      if (r.sign != 0) sum[r.state.bits] += r.sign;
    }
    std::erase_if(sum, [](const auto& kv) { return kv.second == 0; });
    if (a == b) {
      CHECK(sum.size() == 1);
      CHECK(sum[s.bits] == 1);
    } else {
      CHECK(sum.empty());
    }
  }
}

TEST_CASE("create_ordered sign follows permutation parity") {
  const OrbitalLayout layout(1, 2);
  const std::vector<Orbital> in_order{{0, 0, Spin::kUp}, {0, 1, Spin::kDown}};
  const std::vector<Orbital> swapped{{0, 1, Spin::kDown}, {0, 0, Spin::kUp}};
  CHECK(create_ordered(in_order, layout).sign == 1);
  CHECK(create_ordered(swapped, layout).sign == -1);
  const std::vector<Orbital> repeated{{0, 0, Spin::kUp}, {0, 0, Spin::kUp}};
  CHECK(create_ordered(repeated, layout).sign == 0);
}

TEST_CASE("logical isometry is orthonormal and in sector") {
  const auto basis = two_site_register_basis();
  const RealMatrix p = build_logical_isometry(*basis);
  CHECK(p.rows() == 59);
  CHECK((p.transpose() * p - RealMatrix::Identity(4, 4)).norm() < 1e-14);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if (p.row(i).norm() == 0.0) continue;
    const auto& s = (*basis)[static_cast<std::size_t>(i)];
    CHECK(quanta(s, basis->layout()) == 4);
    CHECK(twice_sz(s, basis->layout()) == 0);
  }
  // |00> is a single configuration, |11> spreads over four.
  CHECK((p.col(0).array() != 0.0).count() == 1);
  CHECK((p.col(3).array() != 0.0).count() == 4);
}

TEST_CASE("isometry needs a two-site basis with three levels") {
  CHECK_THROWS_AS(build_logical_isometry(*enumerate_basis(2, 2, {4, 2, 0})), Error);
}

TEST_CASE("basis jsonl has one line per state") {
  const auto basis = enumerate_basis(1, 2, {2, 1, 0});
  std::ostringstream out;
  write_basis_jsonl(out, *basis);
  const std::string s = out.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(basis->size()));
  CHECK(s.find("\"occupied\"") != std::string::npos);
}
