#include "roughlim/region.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "roughlim/errors.hpp"

namespace roughlim {

using Index = Region::Index;

// ---------------------------------------------------------------------------
// Sparse sets

namespace {

using Wide = __int128;

Index isqrt(Index n) {
  Wide r = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<Index>(r);
}

Index icbrt(Index n) {
  Wide r = static_cast<Index>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r * r > n) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return static_cast<Index>(r);
}

}  // namespace

bool in_sparse(SparseKind kind, std::int64_t n) {
  if (n < 1) return false;
  switch (kind) {
    case SparseKind::Squares: {
      Index r = isqrt(n);
      return r * r == n;
    }
    case SparseKind::Cubes: {
      Index r = icbrt(n);
      return r * r * r == n;
    }
    case SparseKind::PowersOfTwo:
      return (n & (n - 1)) == 0;
  }
  return false;
}

std::int64_t sparse_count(SparseKind kind, std::int64_t n) {
  if (n < 1) return 0;
  switch (kind) {
    case SparseKind::Squares:
      return isqrt(n);
    case SparseKind::Cubes:
      return icbrt(n);
    case SparseKind::PowersOfTwo: {
      std::int64_t c = 0;
      for (std::int64_t p = 1; p <= n; p *= 2) ++c;
      return c;
    }
  }
  return 0;
}

std::string to_string(SparseKind kind) {
  switch (kind) {
    case SparseKind::Squares:
      return "squares";
    case SparseKind::Cubes:
      return "cubes";
    case SparseKind::PowersOfTwo:
      return "pow2";
  }
  return "?";
}

namespace {

SparseKind parse_sparse_kind(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom == "squares") return SparseKind::Squares;
    if (e.atom == "cubes") return SparseKind::Cubes;
    if (e.atom == "pow2") return SparseKind::PowersOfTwo;
  }
  throw InputError("line " + std::to_string(e.line) +
                   ": sparse kind must be squares, cubes or pow2, got '" +
                   e.to_string() + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Region tree

struct Region::Node {
  Op op = Op::Empty;
  std::vector<Index> params;
  SparseKind s1 = SparseKind::Squares, s2 = SparseKind::Squares;
  std::vector<Coord> pts;
  std::vector<Region> kids;
};

std::shared_ptr<Region::Node> Region::make_node(Op op) {
  auto n = std::make_shared<Node>();
  n->op = op;
  return n;
}

Region::Region() : node_(make_node(Op::Empty)) {}

Region Region::full() { return Region(make_node(Op::Full)); }

Region Region::cell(Index a, Index b, Index ra, Index rb) {
  if (a < 1 || b < 1) throw InputError("cell moduli must be >= 1");
  if (ra < 0 || ra >= a || rb < 0 || rb >= b)
    throw InputError("cell residues must satisfy 0 <= r < modulus");
  auto n = make_node(Op::Cell);
  n->params = {a, b, ra, rb};
  return Region(n);
}

Region Region::sparse(SparseKind s1, SparseKind s2) {
  auto n = make_node(Op::Sparse);
  n->s1 = s1;
  n->s2 = s2;
  return Region(n);
}

Region Region::row(Index i) {
  if (i < 1) throw InputError("row index must be >= 1");
  auto n = make_node(Op::Row);
  n->params = {i};
  return Region(n);
}

Region Region::col(Index i) {
  if (i < 1) throw InputError("column index must be >= 1");
  auto n = make_node(Op::Col);
  n->params = {i};
  return Region(n);
}

Region Region::points(std::vector<Coord> pts) {
  for (const auto& [j, k] : pts)
    if (j < 1 || k < 1) throw InputError("point indices must be >= 1");
  auto n = make_node(Op::Points);
  n->pts = std::move(pts);
  return Region(n);
}

Region Region::union_of(std::vector<Region> parts) {
  if (parts.empty()) throw InputError("union needs at least one operand");
  auto n = make_node(Op::Union);
  n->kids = std::move(parts);
  return Region(n);
}

Region Region::intersection_of(std::vector<Region> parts) {
  if (parts.empty()) throw InputError("intersection needs at least one operand");
  auto n = make_node(Op::Intersection);
  n->kids = std::move(parts);
  return Region(n);
}

Region Region::difference(Region a, Region b) {
  auto n = make_node(Op::Difference);
  n->kids = {std::move(a), std::move(b)};
  return Region(n);
}

Region Region::complement(Region a) {
  auto n = make_node(Op::Complement);
  n->kids = {std::move(a)};
  return Region(n);
}

Region::Op Region::op() const { return node_->op; }
const std::vector<Index>& Region::params() const { return node_->params; }
SparseKind Region::sparse_first() const { return node_->s1; }
SparseKind Region::sparse_second() const { return node_->s2; }
const std::vector<Region::Coord>& Region::point_list() const { return node_->pts; }
const std::vector<Region>& Region::children() const { return node_->kids; }

bool Region::contains(Index j, Index k) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Empty:
      return false;
    case Op::Full:
      return true;
    case Op::Cell:
      return j % n.params[0] == n.params[2] && k % n.params[1] == n.params[3];
    case Op::Sparse:
      return in_sparse(n.s1, j) && in_sparse(n.s2, k);
    case Op::Row:
      return j == n.params[0];
    case Op::Col:
      return k == n.params[0];
    case Op::Points:
      return std::find(n.pts.begin(), n.pts.end(), Coord{j, k}) != n.pts.end();
    case Op::Union:
      return std::any_of(n.kids.begin(), n.kids.end(),
                         [&](const Region& r) { return r.contains(j, k); });
    case Op::Intersection:
      return std::all_of(n.kids.begin(), n.kids.end(),
                         [&](const Region& r) { return r.contains(j, k); });
    case Op::Difference:
      return n.kids[0].contains(j, k) && !n.kids[1].contains(j, k);
    case Op::Complement:
      return !n.kids[0].contains(j, k);
  }
  return false;
}

size_t Region::tree_size() const {
  size_t s = 1;
  for (const auto& k : node_->kids) s += k.tree_size();
  return s;
}

std::string Region::to_string() const {
  const Node& n = *node_;
  auto num = [](Index v) { return std::to_string(v); };
  switch (n.op) {
    case Op::Empty:
      return "empty";
    case Op::Full:
      return "full";
    case Op::Cell:
      return "(cell " + num(n.params[0]) + " " + num(n.params[1]) + " " +
             num(n.params[2]) + " " + num(n.params[3]) + ")";
    case Op::Sparse:
      return "(sparse " + roughlim::to_string(n.s1) + " " +
             roughlim::to_string(n.s2) + ")";
    case Op::Row:
      return "(row " + num(n.params[0]) + ")";
    case Op::Col:
      return "(col " + num(n.params[0]) + ")";
    case Op::Points: {
      std::string s = "(points";
      for (const auto& [j, k] : n.pts) s += " (" + num(j) + " " + num(k) + ")";
      return s + ")";
    }
    case Op::Union:
    case Op::Intersection: {
      std::string s = n.op == Op::Union ? "(union" : "(inter";
      for (const auto& k : n.kids) s += " " + k.to_string();
      return s + ")";
    }
    case Op::Difference:
      return "(diff " + n.kids[0].to_string() + " " + n.kids[1].to_string() + ")";
    case Op::Complement:
      return "(compl " + n.kids[0].to_string() + ")";
  }
  return "?";
}

Region Region::parse(const std::string& text) { return from_sexpr(parse_sexpr(text)); }

Region Region::from_sexpr(const SExpr& e) {
  auto bad = [&](const std::string& msg) -> InputError {
    return InputError("line " + std::to_string(e.line) + ": " + msg);
  };
  if (!e.is_list) {
    if (e.atom == "empty") return empty();
    if (e.atom == "full") return full();
    throw bad("unknown region '" + e.atom + "'");
  }
  const std::string& h = e.head();
  const auto& it = e.items;
  auto arity = [&](size_t n) {
    if (it.size() != n + 1)
      throw bad("'" + h + "' takes " + std::to_string(n) + " operand(s)");
  };
  if (h == "cell") {
    arity(4);
    return cell(sexpr_integer(it[1], "cell modulus"),
                sexpr_integer(it[2], "cell modulus"),
                sexpr_integer(it[3], "cell residue"),
                sexpr_integer(it[4], "cell residue"));
  }
  if (h == "sparse") {
    arity(2);
    return sparse(parse_sparse_kind(it[1]), parse_sparse_kind(it[2]));
  }
  if (h == "row") {
    arity(1);
    return row(sexpr_integer(it[1], "row index"));
  }
  if (h == "col") {
    arity(1);
    return col(sexpr_integer(it[1], "column index"));
  }
  if (h == "points") {
    std::vector<Coord> pts;
    for (size_t i = 1; i < it.size(); ++i) {
      if (!it[i].is_list || it[i].items.size() != 2)
        throw bad("points entries must be (j k) pairs");
      pts.emplace_back(sexpr_integer(it[i].items[0], "point index"),
                       sexpr_integer(it[i].items[1], "point index"));
    }
    return points(std::move(pts));
  }
  if (h == "union" || h == "inter") {
    if (it.size() < 2) throw bad("'" + h + "' needs at least one operand");
    std::vector<Region> parts;
    for (size_t i = 1; i < it.size(); ++i) parts.push_back(from_sexpr(it[i]));
    return h == "union" ? union_of(std::move(parts))
                        : intersection_of(std::move(parts));
  }
  if (h == "diff") {
    arity(2);
    return difference(from_sexpr(it[1]), from_sexpr(it[2]));
  }
  if (h == "compl") {
    arity(1);
    return complement(from_sexpr(it[1]));
  }
  throw bad("unknown region constructor '" + h + "'");
}

bool operator==(const Region& a, const Region& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.params == y.params && x.s1 == y.s1 &&
         x.s2 == y.s2 && x.pts == y.pts && x.kids == y.kids;
}

bool region_contains(const Region& reg, Index j, Index k) {
  if (j < 1 || k < 1) throw InputError("region indices start at 1");
  return reg.contains(j, k);
}

// ---------------------------------------------------------------------------
// Density and structural decisions

std::string DensityValue::to_string() const {
  if (!exact) return "undefined";
  return boost::multiprecision::numerator(*exact).str() + "/" +
         boost::multiprecision::denominator(*exact).str();
}

double DensityValue::to_double() const {
  if (!exact) return std::nan("");
  return static_cast<double>(*exact);
}

namespace {

constexpr Index kMaxModulus = 10'000'000;
constexpr double kTypeBudget = 3e8;

// Everything about a region that its membership can depend on.
struct Footprint {
  Index lcm_j = 1, lcm_k = 1;
  bool kinds_j[3] = {false, false, false};
  bool kinds_k[3] = {false, false, false};
  std::set<Index> special_j, special_k;
  bool overflow = false;
};

Index checked_lcm(Index a, Index b, bool& overflow) {
  Index g = std::gcd(a, b);
  Index l = a / g;
  if (l > kMaxModulus / b) {
    overflow = true;
    return a;
  }
  return l * b;
}

void collect(const Region& r, Footprint& f) {
  switch (r.op()) {
    case Region::Op::Cell:
      f.lcm_j = checked_lcm(f.lcm_j, r.params()[0], f.overflow);
      f.lcm_k = checked_lcm(f.lcm_k, r.params()[1], f.overflow);
      break;
    case Region::Op::Sparse:
      f.kinds_j[static_cast<int>(r.sparse_first())] = true;
      f.kinds_k[static_cast<int>(r.sparse_second())] = true;
      break;
    case Region::Op::Row:
      f.special_j.insert(r.params()[0]);
      break;
    case Region::Op::Col:
      f.special_k.insert(r.params()[0]);
      break;
    case Region::Op::Points:
      for (const auto& [j, k] : r.point_list()) {
        f.special_j.insert(j);
        f.special_k.insert(k);
      }
      break;
    default:
      break;
  }
  for (const auto& c : r.children()) collect(c, f);
}

// One class of indices along an axis. `generic` classes are realized by
// infinitely many indices larger than every special value; `value` is set
// only for special indices (band rows/columns and finite-set coordinates).
struct AxisType {
  Index residue = 0;
  bool flags[3] = {false, false, false};
  std::optional<Index> value;
  bool generic = false;
};

bool eval(const Region& r, const AxisType& j, const AxisType& k) {
  switch (r.op()) {
    case Region::Op::Empty:
      return false;
    case Region::Op::Full:
      return true;
    case Region::Op::Cell:
      return j.residue % r.params()[0] == r.params()[2] &&
             k.residue % r.params()[1] == r.params()[3];
    case Region::Op::Sparse:
      return j.flags[static_cast<int>(r.sparse_first())] &&
             k.flags[static_cast<int>(r.sparse_second())];
    case Region::Op::Row:
      return j.value == r.params()[0];
    case Region::Op::Col:
      return k.value == r.params()[0];
    case Region::Op::Points: {
      if (!j.value || !k.value) return false;
      const auto& p = r.point_list();
      return std::find(p.begin(), p.end(), Region::Coord{*j.value, *k.value}) !=
             p.end();
    }
    case Region::Op::Union:
      for (const auto& c : r.children())
        if (eval(c, j, k)) return true;
      return false;
    case Region::Op::Intersection:
      for (const auto& c : r.children())
        if (!eval(c, j, k)) return false;
      return true;
    case Region::Op::Difference:
      return eval(r.children()[0], j, k) && !eval(r.children()[1], j, k);
    case Region::Op::Complement:
      return !eval(r.children()[0], j, k);
  }
  return false;
}

Index mulmod(Index a, Index b, Index m) {
  return static_cast<Index>(static_cast<__int128>(a) * b % m);
}

using TypeKey = std::tuple<Index, bool, bool, bool>;

// Enumerates the index classes of one axis for modulus m. Flags of sparse
// kinds the region never mentions are masked to false.
std::vector<AxisType> axis_types(Index m, const bool (&kinds)[3],
                                 const std::set<Index>& special) {
  std::set<TypeKey> generic;
  auto key = [&](Index res, bool sq, bool cu, bool p2) {
    return TypeKey{res, sq && kinds[0], cu && kinds[1], p2 && kinds[2]};
  };
  // Non-powers of two: any residue for plain integers; squares, cubes and
  // sixth powers in a residue class are infinite as soon as one exists.
  const bool any_kind = kinds[0] || kinds[1] || kinds[2];
  for (Index x = 0; x < m; ++x) {
    generic.insert(key(x, false, false, false));
    if (!any_kind) continue;
    Index x2 = mulmod(x, x, m);
    Index x3 = mulmod(x2, x, m);
    Index x6 = mulmod(x3, x3, m);
    generic.insert(key(x2, true, false, false));
    generic.insert(key(x3, false, true, false));
    generic.insert(key(x6, true, true, false));
  }
  // Powers of two 2^e: (e mod 6, 2^e mod m) is periodic once e >= log2(m);
  // e in [64, 64 + 6m) covers a full period.
  if (any_kind) {
    Index p = 1 % m;
    for (int e = 0; e < 64; ++e) p = mulmod(p, 2, m);
    for (Index e = 64; e < 64 + 6 * m; ++e) {
      generic.insert(key(p, e % 2 == 0, e % 3 == 0, true));
      p = mulmod(p, 2, m);
    }
  }

  std::vector<AxisType> out;
  for (const auto& [res, sq, cu, p2] : generic) {
    AxisType t;
    t.residue = res;
    t.flags[0] = sq;
    t.flags[1] = cu;
    t.flags[2] = p2;
    t.generic = true;
    out.push_back(t);
  }
  // Small concrete indices: every special value, plus any index whose class
  // is only realized finitely often (e.g. 1 = 2^0).
  Index top = m;
  if (!special.empty()) top = std::max(top, *special.rbegin());
  std::set<TypeKey> finite_only;
  for (Index v = 1; v <= top; ++v) {
    TypeKey k = key(v % m, in_sparse(SparseKind::Squares, v),
                    in_sparse(SparseKind::Cubes, v),
                    in_sparse(SparseKind::PowersOfTwo, v));
    const bool is_special = special.count(v) > 0;
    if (!is_special && (generic.count(k) || finite_only.count(k))) continue;
    AxisType t;
    t.residue = std::get<0>(k);
    t.flags[0] = std::get<1>(k);
    t.flags[1] = std::get<2>(k);
    t.flags[2] = std::get<3>(k);
    if (is_special)
      t.value = v;
    else
      finite_only.insert(k);
    out.push_back(t);
  }
  return out;
}

struct TypeSpace {
  std::vector<AxisType> j, k;
};

TypeSpace type_space(const Region& r) {
  Footprint f;
  collect(r, f);
  if (f.overflow)
    throw UndecidableRegion("residue moduli lcm exceeds " +
                            std::to_string(kMaxModulus));
  TypeSpace s{axis_types(f.lcm_j, f.kinds_j, f.special_j),
              axis_types(f.lcm_k, f.kinds_k, f.special_k)};
  const double work = static_cast<double>(s.j.size()) *
                      static_cast<double>(s.k.size()) *
                      static_cast<double>(r.tree_size());
  if (work > kTypeBudget)
    throw UndecidableRegion("region too large to decide structurally");
  return s;
}

}  // namespace

DensityValue region_density(const Region& reg) {
  Footprint f;
  collect(reg, f);
  if (f.overflow || f.lcm_j > kMaxDensityLattice / f.lcm_k) return {};
  // Plain (non-sparse, non-special) indices of each residue class have full
  // relative density in that class.
  std::int64_t count = 0;
  AxisType j, k;
  for (Index a = 0; a < f.lcm_j; ++a) {
    j.residue = a;
    for (Index b = 0; b < f.lcm_k; ++b) {
      k.residue = b;
      if (eval(reg, j, k)) ++count;
    }
  }
  return DensityValue{Rational(count, f.lcm_j * f.lcm_k)};
}

bool region_is_empty(const Region& reg) {
  const TypeSpace s = type_space(reg);
  for (const auto& a : s.j)
    for (const auto& b : s.k)
      if (eval(reg, a, b)) return false;
  return true;
}

bool region_is_finite(const Region& reg) {
  const TypeSpace s = type_space(reg);
  for (const auto& a : s.j)
    for (const auto& b : s.k)
      if ((a.generic || b.generic) && eval(reg, a, b)) return false;
  return true;
}

bool region_is_band_coverable(const Region& reg) {
  const TypeSpace s = type_space(reg);
  for (const auto& a : s.j) {
    if (!a.generic) continue;
    for (const auto& b : s.k)
      if (b.generic && eval(reg, a, b)) return false;
  }
  return true;
}

}  // namespace roughlim
