#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughlim/errors.hpp"
#include "roughlim/geometry.hpp"
#include "roughlim/ideal.hpp"
#include "roughlim/region.hpp"

namespace roughlim {

/// One coordinate of a formula rule, from a closed catalog of expressions in
/// (j, k) whose limits and bounds are known in closed form.
class Term {
 public:
  enum class Kind {
    ScaledProduct,       // c*j*k
    AltJ,                // (-1)^j
    AltK,                // (-1)^k
    AltJK,               // (-1)^(j+k)
    RecipSum,            // c/(j+k)
    JRatio,              // j/(j+1)
    OffsetRecipProduct,  // c + c2/(j*k)
  };

  static Term scaled_product(double c) { return Term(Kind::ScaledProduct, c, 0); }
  static Term alt_j() { return Term(Kind::AltJ, 0, 0); }
  static Term alt_k() { return Term(Kind::AltK, 0, 0); }
  static Term alt_jk() { return Term(Kind::AltJK, 0, 0); }
  static Term recip_sum(double c) { return Term(Kind::RecipSum, c, 0); }
  static Term j_ratio() { return Term(Kind::JRatio, 0, 0); }
  static Term offset_recip_product(double c, double c2) {
    return Term(Kind::OffsetRecipProduct, c, c2);
  }

  Kind kind() const { return kind_; }
  double eval(Region::Index j, Region::Index k) const;

  /// True when the value depends on the parities of j and k only through a
  /// sign; such terms are constant on each cell (j mod 2, k mod 2).
  bool parity_dependent() const;
  /// Pringsheim limit on the parity cell (j mod 2 = jp, k mod 2 = kp);
  /// nullopt if the term is unbounded there.
  std::optional<double> limit_on(int jp, int kp) const;
  /// sup |term| over all (j,k); +inf for unbounded terms.
  double abs_sup() const;

  std::string to_string() const;
  static Term from_sexpr(const SExpr& e);

  bool operator==(const Term&) const = default;

 private:
  Term(Kind k, double c, double c2) : kind_(k), c_(c), c2_(c2) {}
  Kind kind_;
  double c_, c2_;
};

/// Declared Pringsheim limit of a formula: a point, or divergent.
struct DeclaredLimit {
  std::optional<Point> point;
  bool operator==(const DeclaredLimit&) const = default;
};

class ValueRule {
 public:
  static ValueRule constant(Point v);
  static ValueRule formula(std::vector<Term> terms,
                           std::optional<DeclaredLimit> declared);

  bool is_constant() const { return constant_.has_value(); }
  int dim() const;
  const Point& constant_value() const { return *constant_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<DeclaredLimit>& declared() const { return declared_; }

  Point eval(Region::Index j, Region::Index k) const;
  bool parity_dependent() const;

  bool operator==(const ValueRule&) const = default;

 private:
  ValueRule() = default;
  std::optional<Point> constant_;
  std::vector<Term> terms_;
  std::optional<DeclaredLimit> declared_;
};

struct Piece {
  Region region;
  ValueRule rule;
  bool operator==(const Piece&) const = default;
};

/// x_jk defined by an ordered list of (region, rule) pieces with first-match
/// semantics and a default rule for everything else.
class StructuredSequence {
 public:
  StructuredSequence(std::string name, int dim, std::vector<Piece> pieces,
                     ValueRule default_rule);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const ValueRule& default_rule() const { return default_; }

  /// Index of the piece supplying x_jk; pieces().size() for the default.
  size_t piece_at(Region::Index j, Region::Index k) const;
  Point eval(Region::Index j, Region::Index k) const;

  std::string to_string() const;
  static StructuredSequence parse(const std::string& text);
  static StructuredSequence load(const std::string& path);

  bool operator==(const StructuredSequence&) const = default;

 private:
  std::string name_;
  int dim_;
  std::vector<Piece> pieces_;
  ValueRule default_;
};

Point eval(const StructuredSequence& x, Region::Index j, Region::Index k);

struct Diagnostic {
  /// Piece index; pieces().size() designates the default rule.
  size_t piece;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty(); }
  std::string to_string() const;
};

/// Dimension consistency, declared-limit sampling on Pringsheim tails, and no
/// unbounded rule on a positive-density region. Throws UndecidableRegion when
/// a piece density cannot be certified.
ValidationReport validate(const StructuredSequence& x);

class InvalidSequence : public Error {
 public:
  explicit InvalidSequence(ValidationReport rep);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Region where a piece actually supplies values: its own region minus the
/// regions of all earlier pieces.
Region effective_region(const StructuredSequence& x, size_t piece);

/// A maximal part of N x N on which x is given by one rule and, after
/// splitting sign-alternating formulas by parity, has a single Pringsheim
/// limit (or is unbounded).
struct Atom {
  Region region;
  size_t piece;
  std::optional<Point> limit;  // nullopt: unbounded values
  double sup_norm;             // upper bound of ||x_jk|| on the atom
  bool from_formula;
};

/// Non-empty atoms in piece order.
std::vector<Atom> decompose(const StructuredSequence& x, const NormSpec& norm);

struct BoundednessCertificate {
  enum class Verdict { Bounded, Unbounded, IBounded, NotIBounded };
  Verdict verdict;
  /// Strict bound: ||x_jk|| < M everywhere (Bounded) or off an ideal-small
  /// set (IBounded).
  double M = 0;
  /// Region carrying unbounded values (Unbounded / NotIBounded).
  std::optional<Region> witness;

  bool holds() const {
    return verdict == Verdict::Bounded || verdict == Verdict::IBounded;
  }
};

std::string to_string(BoundednessCertificate::Verdict v);

BoundednessCertificate is_bounded(const StructuredSequence& x,
                                  const NormSpec& norm = NormSpec::euclidean());
BoundednessCertificate is_I_bounded(const StructuredSequence& x, IdealSpec ideal,
                                    const NormSpec& norm = NormSpec::euclidean());

}  // namespace roughlim
