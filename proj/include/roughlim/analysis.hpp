#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roughlim/geometry.hpp"
#include "roughlim/ideal.hpp"
#include "roughlim/sequence.hpp"

namespace roughlim {

/// r together with an optional candidate limit and a descending list of
/// test tolerances epsilon.
struct RoughnessQuery {
  double r = 0;
  std::optional<Point> candidate;
  std::vector<double> eps_policy;

  /// Throws InputError unless r >= 0 and the tolerances are positive and
  /// strictly decreasing.
  static RoughnessQuery make(double r, std::vector<double> eps_policy,
                             std::optional<Point> candidate = std::nullopt);
};

struct ClusterPoint {
  Point point;
  /// Natural density of the set of indices whose values approach `point`.
  DensityValue density;
  /// Part of the support comes from a formula piece; the density is then a
  /// lower bound for the epsilon-neighbourhood preimage.
  bool at_least = false;
};

struct ClusterSet {
  std::vector<ClusterPoint> points;  // lexicographic order
  bool empty() const { return points.empty(); }
  size_t size() const { return points.size(); }
};

/// The rI-limit set. In dimension 1 it is an exact closed interval; in higher
/// dimensions it is the intersection of `balls`, optionally sampled on a
/// lattice of step `lattice_step` whose points are all certified members.
struct RoughLimitSet {
  int dim = 1;
  double r = 0;
  Interval interval;
  std::vector<ClosedBall> balls;
  std::vector<Point> lattice;
  double lattice_step = 0;
  /// Set when the set is known to be empty.
  std::string empty_reason;

  bool is_empty() const { return !empty_reason.empty(); }
};

/// Exact analysis of one structured sequence under one strongly admissible
/// ideal.
///
/// The sequence is split into atoms (see `decompose`), each with a single
/// Pringsheim limit or unbounded values, and each atom is classified as
/// ideal-small or not. For every epsilon > 0 the set where an atom stays
/// epsilon-far from its limit is contained in finitely many rows and
/// columns, which every strongly admissible ideal contains. Hence:
///   * xi is an rI-limit iff every non-small atom has a limit v with
///     ||v - xi|| <= r;
///   * the I-cluster points are exactly the limits of non-small atoms;
///   * x is I-bounded iff every unbounded atom is small.
class RoughAnalyzer {
 public:
  /// Throws InvalidSequence for sequences failing `validate`, AnalysisError
  /// for ideals that are not strongly admissible and UndecidableRegion when
  /// an atom cannot be classified.
  RoughAnalyzer(StructuredSequence x, IdealSpec ideal,
                NormSpec norm = NormSpec::euclidean());

  const StructuredSequence& sequence() const { return x_; }
  IdealSpec ideal() const { return ideal_; }
  const NormSpec& norm() const { return norm_; }
  int dim() const { return x_.dim(); }

  bool i_bounded() const { return i_bounded_; }
  const ClusterSet& cluster_points() const { return clusters_; }

  /// Dimension 1, I-bounded only; AnalysisError otherwise.
  double limsup() const;
  double liminf() const;
  /// nullopt when the degree is infinite (x not I-bounded). Dimension 1.
  std::optional<double> min_roughness_degree() const;

  bool is_rI_limit(const Point& xi, double r) const;
  RoughLimitSet rough_limit_set(double r,
                                std::optional<double> lattice_step = std::nullopt) const;
  /// The I-limit, if x is I-convergent.
  std::optional<Point> i_limit() const;

  struct ClassifiedAtom {
    Atom atom;
    bool small;  // atom region is in the ideal
  };
  const std::vector<ClassifiedAtom>& atoms() const { return atoms_; }

 private:
  void require_dim1(const char* what) const;

  StructuredSequence x_;
  IdealSpec ideal_;
  NormSpec norm_;
  std::vector<ClassifiedAtom> atoms_;
  bool i_bounded_ = true;
  ClusterSet clusters_;
};

ClusterSet cluster_points(const StructuredSequence& x, IdealSpec ideal);
double ideal_limsup(const StructuredSequence& x, IdealSpec ideal);
double ideal_liminf(const StructuredSequence& x, IdealSpec ideal);
bool is_rI_limit(const StructuredSequence& x, IdealSpec ideal, const Point& xi, double r,
                 const NormSpec& norm = NormSpec::euclidean());
RoughLimitSet rough_limit_set(const StructuredSequence& x, IdealSpec ideal, double r);
/// Plain (Pringsheim) rough limit set: the complement of a Pringsheim tail
/// is a finite union of bands, so this is the minimal strongly admissible
/// ideal's limit set.
RoughLimitSet classic_rough_limit_set(const StructuredSequence& x, double r);
std::optional<double> min_roughness_degree(const StructuredSequence& x, IdealSpec ideal);
std::optional<Point> is_I_convergent(const StructuredSequence& x, IdealSpec ideal);

// ---------------------------------------------------------------------------
// Executable theorem checks

enum class CheckStatus { Pass, Fail, Vacuous, HypothesisNotMet };

std::string to_string(CheckStatus s);

struct CheckResult {
  std::string theorem;
  CheckStatus status = CheckStatus::Pass;
  std::vector<std::string> witnesses;

  bool failed() const { return status == CheckStatus::Fail; }
};

/// diam(I-LIM^r) <= 2r.
CheckResult check_diameter(const RoughAnalyzer& a, double r);
/// x I-convergent to xi  <=>  I-LIM^r = closed ball of radius r around xi.
CheckResult check_ball_characterization(const RoughAnalyzer& a, double r);
/// I-LIM^r lies in the closed r-ball around every I-cluster point.
CheckResult check_cluster_ball(const RoughAnalyzer& a, double r);
/// I-bounded <=> finite minimal roughness <=> some I-LIM^r non-empty, and
/// bounded => I-bounded.
CheckResult check_boundedness_equivalence(const RoughAnalyzer& a);
/// Both interval endpoints are members; points 1e-6 outside are not.
CheckResult check_closedness(const RoughAnalyzer& a, double r);
/// For an I-bounded real sequence: I-convergent <=> I-limsup = I-liminf.
CheckResult check_limsup_liminf(const RoughAnalyzer& a);
/// In a strictly convex norm, two rI-limits at distance 2r force
/// I-convergence to their midpoint. Uses the analyzer's norm.
CheckResult check_midpoint(const RoughAnalyzer& a, double r, const Point& y1,
                           const Point& y2);

}  // namespace roughlim
