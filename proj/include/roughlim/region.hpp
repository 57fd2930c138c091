#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roughlim/sexpr.hpp"

namespace roughlim {

using Rational = boost::multiprecision::cpp_rational;

/// Infinite sets of positive integers with closed-form counting functions.
/// All three contain 1 (1 = 1^2 = 1^3 = 2^0).
enum class SparseKind { Squares, Cubes, PowersOfTwo };

bool in_sparse(SparseKind kind, std::int64_t n);
/// |{1 <= v <= n : v in kind}|.
std::int64_t sparse_count(SparseKind kind, std::int64_t n);
std::string to_string(SparseKind kind);

/// Symbolic subset of N x N (indices start at 1). Immutable; copies share
/// structure.
class Region {
 public:
  enum class Op {
    Empty,
    Full,
    Cell,
    Sparse,
    Row,
    Col,
    Points,
    Union,
    Intersection,
    Difference,
    Complement
  };

  using Index = std::int64_t;
  using Coord = std::pair<Index, Index>;

  /// The empty region.
  Region();

  static Region empty() { return Region(); }
  static Region full();
  /// {(j,k) : j = ra mod a, k = rb mod b}.
  static Region cell(Index a, Index b, Index ra, Index rb);
  static Region sparse(SparseKind s1, SparseKind s2);
  static Region row(Index i);
  static Region col(Index i);
  static Region points(std::vector<Coord> pts);
  static Region union_of(std::vector<Region> parts);
  static Region intersection_of(std::vector<Region> parts);
  static Region difference(Region a, Region b);
  static Region complement(Region a);

  friend Region operator|(Region a, Region b) {
    return union_of({std::move(a), std::move(b)});
  }
  friend Region operator&(Region a, Region b) {
    return intersection_of({std::move(a), std::move(b)});
  }
  friend Region operator-(Region a, Region b) {
    return difference(std::move(a), std::move(b));
  }
  Region operator~() const { return complement(*this); }

  Op op() const;
  /// Cell: {a, b, ra, rb}; Row/Col: {i}.
  const std::vector<Index>& params() const;
  SparseKind sparse_first() const;
  SparseKind sparse_second() const;
  const std::vector<Coord>& point_list() const;
  const std::vector<Region>& children() const;

  bool contains(Index j, Index k) const;
  size_t tree_size() const;

  /// Canonical s-expression text; parse(to_string()) reproduces the tree.
  std::string to_string() const;
  static Region parse(const std::string& text);
  static Region from_sexpr(const SExpr& e);

  friend bool operator==(const Region& a, const Region& b);

 private:
  struct Node;
  static std::shared_ptr<Node> make_node(Op op);
  explicit Region(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool region_contains(const Region& reg, Region::Index j, Region::Index k);

/// Exact natural density, or undefined when it cannot be certified.
struct DensityValue {
  std::optional<Rational> exact;

  bool defined() const { return exact.has_value(); }
  bool is_zero() const { return exact && *exact == 0; }
  /// "p/q", or "undefined".
  std::string to_string() const;
  double to_double() const;
};

/// Largest residue lattice (product of the j and k moduli lcms) for which the
/// density is computed; beyond it the density is reported undefined.
inline constexpr std::int64_t kMaxDensityLattice = 4'000'000;

/// Every region in the algebra equals a periodic residue pattern up to a
/// null set (sparse products, bands and finite sets have density 0), so the
/// density is the fraction of lcm-lattice cells the periodic part covers.
DensityValue region_density(const Region& reg);

/// Exact structural facts about a region, decided by enumerating the finitely
/// many index "types" (residue class, sparse-set flags, special band/point
/// values) that can occur. Throw UndecidableRegion when the enumeration would
/// exceed an internal budget.
bool region_is_empty(const Region& reg);
bool region_is_finite(const Region& reg);
/// True iff reg is contained in finitely many rows and columns, i.e.
/// reg misses the Pringsheim tail {j > N, k > N} for some N.
bool region_is_band_coverable(const Region& reg);

}  // namespace roughlim
