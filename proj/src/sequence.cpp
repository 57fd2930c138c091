#include "roughlim/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "roughlim/errors.hpp"

namespace roughlim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Term

double Term::eval(Region::Index j, Region::Index k) const {
  const double dj = static_cast<double>(j), dk = static_cast<double>(k);
  switch (kind_) {
    case Kind::ScaledProduct:
      return c_ * dj * dk;
    case Kind::AltJ:
      return j % 2 == 0 ? 1.0 : -1.0;
    case Kind::AltK:
      return k % 2 == 0 ? 1.0 : -1.0;
    case Kind::AltJK:
      return (j + k) % 2 == 0 ? 1.0 : -1.0;
    case Kind::RecipSum:
      return c_ / (dj + dk);
    case Kind::JRatio:
      return dj / (dj + 1.0);
    case Kind::OffsetRecipProduct:
      return c_ + c2_ / (dj * dk);
  }
  return 0;
}

bool Term::parity_dependent() const {
  return kind_ == Kind::AltJ || kind_ == Kind::AltK || kind_ == Kind::AltJK;
}

std::optional<double> Term::limit_on(int jp, int kp) const {
  switch (kind_) {
    case Kind::ScaledProduct:
      if (c_ == 0) return 0.0;
      return std::nullopt;
    case Kind::AltJ:
      return jp == 0 ? 1.0 : -1.0;
    case Kind::AltK:
      return kp == 0 ? 1.0 : -1.0;
    case Kind::AltJK:
      return (jp + kp) % 2 == 0 ? 1.0 : -1.0;
    case Kind::RecipSum:
      return 0.0;
    case Kind::JRatio:
      return 1.0;
    case Kind::OffsetRecipProduct:
      return c_;
  }
  return std::nullopt;
}

double Term::abs_sup() const {
  switch (kind_) {
    case Kind::ScaledProduct:
      return c_ == 0 ? 0.0 : kInf;
    case Kind::AltJ:
    case Kind::AltK:
    case Kind::AltJK:
    case Kind::JRatio:
      return 1.0;
    case Kind::RecipSum:
      return std::abs(c_) / 2.0;
    case Kind::OffsetRecipProduct:
      // c2/(jk) sweeps (0, c2] monotonically.
      return std::max(std::abs(c_ + c2_), std::abs(c_));
  }
  return kInf;
}

std::string Term::to_string() const {
  switch (kind_) {
    case Kind::ScaledProduct:
      return "(jk " + format_roundtrip(c_) + ")";
    case Kind::AltJ:
      return "(alt-j)";
    case Kind::AltK:
      return "(alt-k)";
    case Kind::AltJK:
      return "(alt-jk)";
    case Kind::RecipSum:
      return "(recip-sum " + format_roundtrip(c_) + ")";
    case Kind::JRatio:
      return "(j-ratio)";
    case Kind::OffsetRecipProduct:
      return "(recip-product " + format_roundtrip(c_) + " " +
             format_roundtrip(c2_) + ")";
  }
  return "?";
}

Term Term::from_sexpr(const SExpr& e) {
  const std::string where = "line " + std::to_string(e.line) + ": ";
  if (!e.is_list) throw InputError(where + "formula terms are lists, got '" + e.atom + "'");
  const std::string& h = e.head();
  auto arity = [&](size_t n) {
    if (e.items.size() != n + 1)
      throw InputError(where + "'" + h + "' takes " + std::to_string(n) +
                       " argument(s)");
  };
  if (h == "jk") {
    arity(1);
    return scaled_product(sexpr_number(e.items[1], "jk coefficient"));
  }
  if (h == "alt-j") {
    arity(0);
    return alt_j();
  }
  if (h == "alt-k") {
    arity(0);
    return alt_k();
  }
  if (h == "alt-jk") {
    arity(0);
    return alt_jk();
  }
  if (h == "recip-sum") {
    arity(1);
    return recip_sum(sexpr_number(e.items[1], "recip-sum coefficient"));
  }
  if (h == "j-ratio") {
    arity(0);
    return j_ratio();
  }
  if (h == "recip-product") {
    arity(2);
    return offset_recip_product(sexpr_number(e.items[1], "recip-product offset"),
                                sexpr_number(e.items[2], "recip-product coefficient"));
  }
  throw InputError(where + "unknown formula term '" + h + "'");
}

// ---------------------------------------------------------------------------
// ValueRule

ValueRule ValueRule::constant(Point v) {
  ValueRule r;
  r.constant_ = std::move(v);
  return r;
}

ValueRule ValueRule::formula(std::vector<Term> terms,
                             std::optional<DeclaredLimit> declared) {
  if (terms.empty() || terms.size() > static_cast<size_t>(kMaxDim))
    throw InputError("formula must have between 1 and 8 coordinate terms");
  ValueRule r;
  r.terms_ = std::move(terms);
  r.declared_ = std::move(declared);
  return r;
}

int ValueRule::dim() const {
  return constant_ ? constant_->dim() : static_cast<int>(terms_.size());
}

Point ValueRule::eval(Region::Index j, Region::Index k) const {
  if (constant_) return *constant_;
  std::vector<double> c;
  c.reserve(terms_.size());
  for (const auto& t : terms_) c.push_back(t.eval(j, k));
  return Point(std::move(c));
}

bool ValueRule::parity_dependent() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.parity_dependent(); });
}

namespace {

std::string numbers_to_string(const Point& p) {
  std::string s;
  for (double v : p.coords()) s += " " + format_roundtrip(v);
  return s;
}

std::string rule_to_string(const ValueRule& r) {
  if (r.is_constant()) return "(const" + numbers_to_string(r.constant_value()) + ")";
  std::string s = "(formula";
  for (const auto& t : r.terms()) s += " " + t.to_string();
  s += ")";
  if (r.declared()) {
    if (r.declared()->point)
      s += " (limit" + numbers_to_string(*r.declared()->point) + ")";
    else
      s += " (limit divergent)";
  }
  return s;
}

Point numbers_from(const SExpr& e, size_t first, const char* what) {
  std::vector<double> v;
  for (size_t i = first; i < e.items.size(); ++i)
    v.push_back(sexpr_number(e.items[i], what));
  return Point(std::move(v));
}

// Parses RULE [LIMIT] starting at items[at].
ValueRule rule_from(const SExpr& parent, size_t at) {
  const auto& it = parent.items;
  const std::string where = "line " + std::to_string(parent.line) + ": ";
  if (at >= it.size()) throw InputError(where + "missing value rule");
  const SExpr& r = it[at];
  const std::string& h = r.head();
  if (h == "const") {
    if (at + 1 != it.size())
      throw InputError(where + "constant rules take no limit declaration");
    return ValueRule::constant(numbers_from(r, 1, "constant coordinate"));
  }
  if (h != "formula") throw InputError(where + "unknown rule '" + h + "'");
  std::vector<Term> terms;
  for (size_t i = 1; i < r.items.size(); ++i) terms.push_back(Term::from_sexpr(r.items[i]));
  std::optional<DeclaredLimit> declared;
  if (at + 1 < it.size()) {
    const SExpr& l = it[at + 1];
    if (l.head() != "limit") throw InputError(where + "expected (limit ...)");
    if (l.items.size() == 2 && !l.items[1].is_list && l.items[1].atom == "divergent")
      declared = DeclaredLimit{};
    else
      declared = DeclaredLimit{numbers_from(l, 1, "limit coordinate")};
    if (at + 2 != it.size()) throw InputError(where + "trailing items after limit");
  }
  return ValueRule::formula(std::move(terms), std::move(declared));
}

}  // namespace

// ---------------------------------------------------------------------------
// StructuredSequence

StructuredSequence::StructuredSequence(std::string name, int dim,
                                       std::vector<Piece> pieces,
                                       ValueRule default_rule)
    : name_(std::move(name)),
      dim_(dim),
      pieces_(std::move(pieces)),
      default_(std::move(default_rule)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw InputError("sequence dimension must be in [1, 8]");
  if (name_.empty()) throw InputError("sequence name must not be empty");
}

size_t StructuredSequence::piece_at(Region::Index j, Region::Index k) const {
  for (size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].region.contains(j, k)) return i;
  return pieces_.size();
}

Point StructuredSequence::eval(Region::Index j, Region::Index k) const {
  const size_t i = piece_at(j, k);
  return i < pieces_.size() ? pieces_[i].rule.eval(j, k) : default_.eval(j, k);
}

Point eval(const StructuredSequence& x, Region::Index j, Region::Index k) {
  if (j < 1 || k < 1) throw InputError("sequence indices start at 1");
  return x.eval(j, k);
}

std::string StructuredSequence::to_string() const {
  std::string s = "(sequence " + name_ + "\n  (dim " + std::to_string(dim_) + ")\n";
  for (const auto& p : pieces_)
    s += "  (piece " + p.region.to_string() + " " + rule_to_string(p.rule) + ")\n";
  s += "  (default " + rule_to_string(default_) + "))\n";
  return s;
}

StructuredSequence StructuredSequence::parse(const std::string& text) {
  const SExpr e = parse_sexpr(text);
  const std::string where = "line " + std::to_string(e.line) + ": ";
  if (!e.is_list || e.head() != "sequence")
    throw InputError(where + "expected (sequence NAME ...)");
  if (e.items.size() < 2 || e.items[1].is_list)
    throw InputError(where + "sequence needs a name");
  std::optional<int> dim;
  std::vector<Piece> pieces;
  std::optional<ValueRule> def;
  for (size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& c = e.items[i];
    const std::string& h = c.head();
    const std::string cw = "line " + std::to_string(c.line) + ": ";
    if (h == "dim") {
      if (c.items.size() != 2) throw InputError(cw + "(dim N) expected");
      dim = static_cast<int>(sexpr_integer(c.items[1], "dimension"));
    } else if (h == "piece") {
      if (def) throw InputError(cw + "pieces must precede the default rule");
      if (c.items.size() < 3) throw InputError(cw + "(piece REGION RULE [LIMIT]) expected");
      pieces.push_back(Piece{Region::from_sexpr(c.items[1]), rule_from(c, 2)});
    } else if (h == "default") {
      if (def) throw InputError(cw + "duplicate default rule");
      def = rule_from(c, 1);
    } else {
      throw InputError(cw + "unknown sequence clause '" + h + "'");
    }
  }
  if (!dim) throw InputError(where + "missing (dim N)");
  if (!def) throw InputError(where + "missing (default RULE)");
  return StructuredSequence(e.items[1].atom, *dim, std::move(pieces), std::move(*def));
}

StructuredSequence StructuredSequence::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open sequence file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

// ---------------------------------------------------------------------------
// Validation

std::string ValidationReport::to_string() const {
  std::string s;
  for (const auto& d : errors)
    s += "piece " + std::to_string(d.piece) + ": " + d.message + "\n";
  return s;
}

InvalidSequence::InvalidSequence(ValidationReport rep)
    : Error("invalid sequence:\n" + rep.to_string()), report_(std::move(rep)) {}

Region effective_region(const StructuredSequence& x, size_t piece) {
  const auto& ps = x.pieces();
  std::vector<Region> earlier;
  for (size_t i = 0; i < piece && i < ps.size(); ++i) earlier.push_back(ps[i].region);
  Region own = piece < ps.size() ? ps[piece].region : Region::full();
  if (earlier.empty()) return own;
  return Region::difference(own, Region::union_of(std::move(earlier)));
}

namespace {

// Tail sampling stages: j, k >= N for each N, with samples reaching N^3.
constexpr Region::Index kStages[] = {10, 100, 1000};
constexpr double kLimitTolerance = 1e-6;

std::optional<std::string> check_declared_limit(const ValueRule& rule, const Point& limit) {
  auto err_at = [&](Region::Index j, Region::Index k) {
    return norm_eval(NormSpec::max_norm(), rule.eval(j, k) - limit);
  };
  double prev = kInf;
  for (Region::Index n : kStages) {
    const Region::Index samples[] = {n, 2 * n + 1, n * n, n * n * n};
    double worst = 0;
    for (auto j : samples)
      for (auto k : samples) worst = std::max(worst, err_at(j, k));
    if (worst > prev + 1e-12)
      return "tail error grows from " + format_roundtrip(prev) + " to " +
             format_roundtrip(worst) + " at N=" + std::to_string(n);
    prev = worst;
  }
  const Region::Index deep = kStages[2] * kStages[2] * kStages[2];
  const double e = err_at(deep, deep);
  if (e > kLimitTolerance)
    return "declared limit " + limit.to_string() + " off by " + format_roundtrip(e) +
           " deep in the tail";
  return std::nullopt;
}

void validate_rule(const ValueRule& rule, int dim, size_t piece, bool positive_density,
                   ValidationReport& rep) {
  auto add = [&](std::string m) { rep.errors.push_back({piece, std::move(m)}); };
  if (rule.dim() != dim) {
    add("rule has dimension " + std::to_string(rule.dim()) + ", sequence has " +
        std::to_string(dim));
    return;
  }
  if (rule.is_constant()) return;
  const auto& terms = rule.terms();
  const bool unbounded = std::any_of(terms.begin(), terms.end(), [](const Term& t) {
    return std::isinf(t.abs_sup());
  });
  if (!rule.declared()) {
    add("formula must declare (limit ...) or (limit divergent)");
  } else if (rule.declared()->point) {
    const Point& l = *rule.declared()->point;
    if (l.dim() != dim)
      add("declared limit has dimension " + std::to_string(l.dim()));
    else if (auto why = check_declared_limit(rule, l))
      add("declared limit not confirmed by tail sampling: " + *why);
  } else if (!unbounded && !rule.parity_dependent()) {
    std::vector<double> l;
    for (const auto& t : terms) l.push_back(*t.limit_on(0, 0));
    add("declared divergent, but the formula converges to " + Point(l).to_string());
  }
  if (positive_density && unbounded)
    add("divergent rule on positive-density region");
}

}  // namespace

ValidationReport validate(const StructuredSequence& x) {
  ValidationReport rep;
  const size_t n = x.pieces().size();
  for (size_t i = 0; i <= n; ++i) {
    const ValueRule& rule = i < n ? x.pieces()[i].rule : x.default_rule();
    const DensityValue d = region_density(effective_region(x, i));
    if (!d.defined())
      throw UndecidableRegion("density of piece " + std::to_string(i) + " region cannot be certified");
    validate_rule(rule, x.dim(), i, !d.is_zero(), rep);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Atoms and boundedness

std::vector<Atom> decompose(const StructuredSequence& x, const NormSpec& norm) {
  std::vector<Atom> atoms;
  const size_t n = x.pieces().size();
  for (size_t i = 0; i <= n; ++i) {
    const ValueRule& rule = i < n ? x.pieces()[i].rule : x.default_rule();
    const Region eff = effective_region(x, i);
    if (rule.is_constant()) {
      if (region_is_empty(eff)) continue;
      const Point& v = rule.constant_value();
      atoms.push_back({eff, i, v, norm_eval(norm, v), false});
      continue;
    }
    const bool split = rule.parity_dependent();
    for (int jp = 0; jp < (split ? 2 : 1); ++jp) {
      for (int kp = 0; kp < (split ? 2 : 1); ++kp) {
        Region reg = split ? Region::intersection_of({eff, Region::cell(2, 2, jp, kp)}) : eff;
        if (region_is_empty(reg)) continue;
        std::vector<double> lim, sup;
        bool bounded = true;
        for (const auto& t : rule.terms()) {
          auto l = t.limit_on(jp, kp);
          if (!l) bounded = false;
          lim.push_back(l.value_or(0.0));
          sup.push_back(t.abs_sup());
        }
        Atom a{reg, i, std::nullopt, kInf, true};
        if (bounded) {
          a.limit = Point(lim);
          a.sup_norm = norm_eval(norm, Point(sup));
        }
        atoms.push_back(std::move(a));
      }
    }
  }
  return atoms;
}

std::string to_string(BoundednessCertificate::Verdict v) {
  switch (v) {
    case BoundednessCertificate::Verdict::Bounded:
      return "bounded";
    case BoundednessCertificate::Verdict::Unbounded:
      return "unbounded";
    case BoundednessCertificate::Verdict::IBounded:
      return "I-bounded";
    case BoundednessCertificate::Verdict::NotIBounded:
      return "not-I-bounded";
  }
  return "?";
}

BoundednessCertificate is_bounded(const StructuredSequence& x, const NormSpec& norm) {
  double sup = 0;
  for (const auto& a : decompose(x, norm)) {
    if (!a.limit)
      return {BoundednessCertificate::Verdict::Unbounded, 0, a.region};
    sup = std::max(sup, a.sup_norm);
  }
  return {BoundednessCertificate::Verdict::Bounded, sup + 1.0, std::nullopt};
}

BoundednessCertificate is_I_bounded(const StructuredSequence& x, IdealSpec ideal,
                                    const NormSpec& norm) {
  double sup = 0;
  std::vector<Region> unbounded;
  for (const auto& a : decompose(x, norm)) {
    if (!a.limit)
      unbounded.push_back(a.region);
    else
      sup = std::max(sup, a.sup_norm);
  }
  if (!unbounded.empty()) {
    Region u = unbounded.size() == 1 ? unbounded[0] : Region::union_of(unbounded);
    if (!ideal_contains(ideal, u))
      return {BoundednessCertificate::Verdict::NotIBounded, 0, u};
  }
  return {BoundednessCertificate::Verdict::IBounded, sup + 1.0, std::nullopt};
}

}  // namespace roughlim
