#include <doctest.h>

#include <cmath>

#include "roughlim/errors.hpp"
#include "roughlim/oracle.hpp"
#include "roughlim/region.hpp"
#include "support/generators.hpp"

using namespace roughlim;
using testgen::Rng;

namespace {

Region sq_sq() { return Region::sparse(SparseKind::Squares, SparseKind::Squares); }

Rational brute_count_density(const Region& r, std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t j = 1; j <= n; ++j)
    for (std::int64_t k = 1; k <= n; ++k)
      if (r.contains(j, k)) ++c;
  return Rational(c, n * n);
}

bool has_no_special(const Region& r) {
  switch (r.op()) {
    case Region::Op::Sparse:
    case Region::Op::Row:
    case Region::Op::Col:
    case Region::Op::Points:
      return false;
    default:
      for (const auto& c : r.children())
        if (!has_no_special(c)) return false;
      return true;
  }
}

Region random_cell_region(Rng& rng, int depth) {
  if (depth <= 0 || testgen::coin(rng, 0.3)) return testgen::cell_leaf(rng);
  switch (testgen::uniform_int(rng, 0, 3)) {
    case 0: return random_cell_region(rng, depth - 1) | random_cell_region(rng, depth - 1);
    case 1: return random_cell_region(rng, depth - 1) & random_cell_region(rng, depth - 1);
    case 2: return random_cell_region(rng, depth - 1) - random_cell_region(rng, depth - 1);
    default: return ~random_cell_region(rng, depth - 1);
  }
}

}  // namespace

TEST_CASE("sparse sets") {
  CHECK(in_sparse(SparseKind::Squares, 1));
  CHECK(in_sparse(SparseKind::Squares, 49));
  CHECK_FALSE(in_sparse(SparseKind::Squares, 50));
  CHECK(in_sparse(SparseKind::Cubes, 27));
  CHECK_FALSE(in_sparse(SparseKind::Cubes, 26));
  CHECK(in_sparse(SparseKind::PowersOfTwo, 1));
  CHECK(in_sparse(SparseKind::PowersOfTwo, 1024));
  CHECK_FALSE(in_sparse(SparseKind::PowersOfTwo, 96));
  CHECK(in_sparse(SparseKind::Squares, 3037000499LL * 3037000499LL));
  for (auto kind : {SparseKind::Squares, SparseKind::Cubes, SparseKind::PowersOfTwo}) {
    std::int64_t c = 0;
    for (std::int64_t n = 1; n <= 5000; ++n) {
      c += in_sparse(kind, n);
      if (n % 97 == 0 || n == 5000) REQUIRE(sparse_count(kind, n) == c);
    }
  }
}

TEST_CASE("membership") {
  CHECK(region_contains(Region::cell(2, 2, 0, 0), 4, 6));
  CHECK(region_contains(sq_sq(), 4, 9));
  CHECK_FALSE(region_contains(Region::row(5), 6, 1));
  CHECK(region_contains(Region::col(5), 6, 5));
  CHECK(region_contains(Region::points({{3, 4}}), 3, 4));
  CHECK_FALSE(region_contains(Region::points({{3, 4}}), 4, 3));
  CHECK(region_contains(~Region::empty(), 1, 1));
  CHECK(region_contains(Region::full() - Region::row(2), 3, 2));
  CHECK_THROWS_AS(region_contains(Region::full(), 0, 1), InputError);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(Region::cell(0, 1, 0, 0), InputError);
  CHECK_THROWS_AS(Region::cell(2, 2, 2, 0), InputError);
  CHECK_THROWS_AS(Region::row(0), InputError);
  CHECK_THROWS_AS(Region::points({{0, 1}}), InputError);
  CHECK_THROWS_AS(Region::union_of({}), InputError);
}

TEST_CASE("canonical text round-trips") {
  const Region r = (Region::cell(2, 3, 1, 2) | sq_sq()) - ~Region::points({{1, 2}, {3, 4}});
  CHECK(Region::parse(r.to_string()) == r);
  CHECK(Region::parse("(sparse squares pow2)").to_string() == "(sparse squares pow2)");
  CHECK(Region::parse("(union (row 1) (col 2) (cell 2 2 0 0))").to_string() ==
        "(union (row 1) (col 2) (cell 2 2 0 0))");
  CHECK_THROWS_AS(Region::parse("(cell 2 2 0)"), InputError);
  CHECK_THROWS_AS(Region::parse("(sparse primes squares)"), InputError);
  CHECK_THROWS_AS(Region::parse("(union"), InputError);
  Rng rng(0x5eed0101);
  for (int i = 0; i < 300; ++i) {
    const Region g = testgen::random_region(rng, 4);
    REQUIRE(Region::parse(g.to_string()) == g);
    REQUIRE(Region::parse(g.to_string()).to_string() == g.to_string());
  }
}

TEST_CASE("density of fixed regions") {
  CHECK(region_density(Region::cell(2, 2, 0, 0)).to_string() == "1/4");
  CHECK(region_density(sq_sq()).is_zero());
  CHECK(region_density(Region::cell(2, 2, 0, 0) | Region::cell(2, 2, 1, 1)).to_string() == "1/2");
  CHECK(region_density(Region::full()).to_string() == "1/1");
  CHECK(region_density(~sq_sq()).to_string() == "1/1");
  CHECK(region_density(sq_sq()).to_string() == "0/1");
  CHECK(region_density(Region::row(3) | Region::col(4)).is_zero());
  CHECK(region_density(Region::cell(3, 1, 0, 0) | Region::cell(1, 2, 0, 1)).to_string() == "2/3");
  CHECK_FALSE(region_density(Region::cell(3001, 2000, 0, 0)).defined());
  CHECK(region_density(Region::cell(3001, 2000, 0, 0)).to_string() == "undefined");
}

TEST_CASE("density of periodic regions equals the count over whole periods") {
  // Independent check: counting on a 24 x 24 window (a multiple of every
  // lcm of moduli <= 4) is exact for periodic regions.
  Rng rng(0x5eed0102);
  for (int i = 0; i < 200; ++i) {
    const Region r = random_cell_region(rng, 4);
    REQUIRE(has_no_special(r));
    REQUIRE(*region_density(r).exact == brute_count_density(r, 24));
  }
}

TEST_CASE("inclusion-exclusion over pairs of cells") {
  std::vector<Region> cells;
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      for (int ra = 0; ra < a; ++ra)
        for (int rb = 0; rb < b; ++rb) cells.push_back(Region::cell(a, b, ra, rb));
  for (size_t i = 0; i < cells.size(); i += 3)
    for (size_t j = 0; j < cells.size(); j += 2) {
      const auto dA = *region_density(cells[i]).exact, dB = *region_density(cells[j]).exact;
      const auto dU = *region_density(cells[i] | cells[j]).exact;
      const auto dI = *region_density(cells[i] & cells[j]).exact;
      REQUIRE(dU == dA + dB - dI);
    }
}

TEST_CASE("empirical counts converge to the exact density") {
  const std::vector<std::pair<const char*, Region>> families = {
      {"cell", Region::cell(3, 4, 1, 2)},
      {"cells", Region::cell(3, 1, 0, 0) | Region::cell(1, 2, 0, 1)},
      {"squares", sq_sq()},
      {"cubes x pow2", Region::sparse(SparseKind::Cubes, SparseKind::PowersOfTwo)},
      {"band", Region::row(7)},
      {"finite", Region::points({{1, 1}, {5, 9}})},
      {"cell minus band", Region::cell(3, 3, 0, 0) - Region::col(3)},
      {"complement of squares", ~sq_sq()},
  };
  for (const auto& [name, r] : families) {
    CAPTURE(name);
    const double d = region_density(r).to_double();
    double prev = INFINITY;
    for (std::int64_t n : {100, 400, 1600}) {
      const double err = std::abs(empirical_density([&](auto j, auto k) { return r.contains(j, k); }, n, n) - d);
      REQUIRE(err <= 2.0 / std::sqrt(static_cast<double>(n)));
      REQUIRE(err <= prev + 1e-15);
      prev = err;
    }
  }
}

TEST_CASE("structural decisions on fixed regions") {
  CHECK(region_is_empty(Region::empty()));
  CHECK(region_is_empty(Region::cell(2, 1, 0, 0) & Region::cell(2, 1, 1, 0)));
  CHECK(region_is_empty(Region::sparse(SparseKind::Squares, SparseKind::Squares) & Region::cell(4, 1, 2, 0)));
  CHECK_FALSE(region_is_empty(Region::row(3) & Region::col(5)));
  CHECK(region_is_finite(Region::row(3) & Region::col(5)));
  // 3 mod 4 cubes exist (27, 343, ...); 2 mod 4 squares do not.
  CHECK_FALSE(region_is_empty(Region::sparse(SparseKind::Cubes, SparseKind::Cubes) & Region::cell(4, 4, 3, 3)));
  CHECK_FALSE(region_is_band_coverable(Region::sparse(SparseKind::Cubes, SparseKind::Cubes) & Region::cell(12, 12, 11, 11)));
  // 1 is the only odd power of two.
  CHECK(region_is_finite(Region::sparse(SparseKind::PowersOfTwo, SparseKind::PowersOfTwo) & Region::cell(2, 2, 1, 1)));
  CHECK_FALSE(region_is_empty(Region::sparse(SparseKind::PowersOfTwo, SparseKind::PowersOfTwo) & Region::cell(2, 2, 1, 1)));
  // Powers of two that are squares and cubes: 2^(6t).
  CHECK_FALSE(region_is_finite(Region::sparse(SparseKind::PowersOfTwo, SparseKind::Squares) &
                               Region::sparse(SparseKind::Cubes, SparseKind::Cubes)));
  CHECK(region_is_band_coverable(Region::row(4) | Region::col(9) | Region::points({{50, 60}})));
  CHECK(region_is_band_coverable(sq_sq() & Region::row(4)));
  CHECK_FALSE(region_is_band_coverable(sq_sq()));
  CHECK_FALSE(region_is_finite(Region::row(1)));
  // Semantically coverable though not syntactically a band union.
  CHECK(region_is_band_coverable(Region::full() - (Region::cell(1, 1, 0, 0) - Region::row(2))));
  CHECK(region_is_band_coverable(~(Region::cell(1, 2, 0, 1) | Region::cell(1, 2, 0, 0) ) | Region::col(1)));
}

TEST_CASE("structural decisions agree with brute force on random regions") {
  Rng rng(0x5eed0103);
  for (int i = 0; i < 150; ++i) {
    const Region r = testgen::random_region(rng, 3);
    CAPTURE(r.to_string());
    const bool empty = region_is_empty(r), finite = region_is_finite(r),
               coverable = region_is_band_coverable(r);
    REQUIRE((!empty || finite));
    REQUIRE((!finite || coverable));
    std::int64_t small = 0, total = 0, tail = 0;
    for (std::int64_t j = 1; j <= 400; ++j)
      for (std::int64_t k = 1; k <= 400; ++k) {
        if (!r.contains(j, k)) continue;
        ++total;
        if (j <= 60 && k <= 60) ++small;
        if (j > 60 && k > 60) ++tail;
      }
    if (empty) REQUIRE(total == 0);
    if (finite) REQUIRE(total == small);
    if (coverable) REQUIRE(tail == 0);
    if (tail > 0) REQUIRE_FALSE(coverable);
    if (!region_density(r).is_zero()) REQUIRE_FALSE(coverable);
  }
}

TEST_CASE("oversized regions are undecidable") {
  const Region big = Region::cell(9999991, 1, 0, 0) & Region::cell(9999973, 1, 0, 0);
  CHECK_THROWS_AS(region_is_empty(big), UndecidableRegion);
  CHECK_FALSE(region_density(big).defined());
}
