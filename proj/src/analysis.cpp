#include "roughlim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "roughlim/errors.hpp"

namespace roughlim {

namespace {

constexpr double kOutsideStep = 1e-6;
constexpr size_t kMaxLatticePoints = 2'000'000;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

RoughnessQuery RoughnessQuery::make(double r, std::vector<double> eps_policy,
                                    std::optional<Point> candidate) {
  if (!(r >= 0) || !std::isfinite(r)) throw InputError("r must be finite and >= 0");
  if (eps_policy.empty()) throw InputError("epsilon policy must not be empty");
  for (size_t i = 0; i < eps_policy.size(); ++i) {
    if (!(eps_policy[i] > 0)) throw InputError("epsilon tolerances must be positive");
    if (i && !(eps_policy[i] < eps_policy[i - 1]))
      throw InputError("epsilon tolerances must be strictly decreasing");
  }
  return RoughnessQuery{r, std::move(candidate), std::move(eps_policy)};
}

// ---------------------------------------------------------------------------
// RoughAnalyzer

RoughAnalyzer::RoughAnalyzer(StructuredSequence x, IdealSpec ideal, NormSpec norm)
    : x_(std::move(x)), ideal_(ideal), norm_(norm) {
  if (!is_strongly_admissible(ideal_))
    throw AnalysisError("exact analysis needs a strongly admissible ideal, got " +
                        to_string(ideal_));
  ValidationReport rep = validate(x_);
  if (!rep.ok()) throw InvalidSequence(std::move(rep));

  for (auto& a : decompose(x_, norm_)) {
    const bool small = ideal_contains(ideal_, a.region);
    if (!small && !a.limit) i_bounded_ = false;
    atoms_.push_back({std::move(a), small});
  }

  // One cluster point per distinct limit carried by a non-small atom.
  std::vector<Point> limits;
  for (const auto& ca : atoms_) {
    if (ca.small || !ca.atom.limit) continue;
    const Point& v = *ca.atom.limit;
    if (std::none_of(limits.begin(), limits.end(),
                     [&](const Point& p) { return p.approx_equal(v); }))
      limits.push_back(v);
  }
  std::sort(limits.begin(), limits.end(), [](const Point& a, const Point& b) {
    return std::lexicographical_compare(a.coords().begin(), a.coords().end(),
                                        b.coords().begin(), b.coords().end());
  });
  for (const auto& v : limits) {
    std::vector<Region> support;
    bool formula = false;
    for (const auto& ca : atoms_) {
      if (ca.atom.limit && ca.atom.limit->approx_equal(v)) {
        support.push_back(ca.atom.region);
        formula = formula || ca.atom.from_formula;
      }
    }
    Region u = support.size() == 1 ? support[0] : Region::union_of(support);
    clusters_.points.push_back({v, region_density(u), formula});
  }
}

void RoughAnalyzer::require_dim1(const char* what) const {
  if (dim() != 1)
    throw AnalysisError(std::string(what) + " is defined for real sequences (dim 1), got dim " +
                        std::to_string(dim()));
}

double RoughAnalyzer::limsup() const {
  require_dim1("I-limsup");
  if (!i_bounded_) throw AnalysisError("not-I-bounded: I-limsup needs an I-bounded sequence");
  return clusters_.points.back().point[0];
}

double RoughAnalyzer::liminf() const {
  require_dim1("I-liminf");
  if (!i_bounded_) throw AnalysisError("not-I-bounded: I-liminf needs an I-bounded sequence");
  return clusters_.points.front().point[0];
}

std::optional<double> RoughAnalyzer::min_roughness_degree() const {
  require_dim1("minimal roughness degree");
  if (!i_bounded_) return std::nullopt;
  return (limsup() - liminf()) / 2.0;
}

bool RoughAnalyzer::is_rI_limit(const Point& xi, double r) const {
  if (xi.dim() != dim())
    throw InputError("candidate has dimension " + std::to_string(xi.dim()) +
                     ", sequence has " + std::to_string(dim()));
  if (!(r >= 0)) throw InputError("r must be >= 0");
  if (!i_bounded_) return false;
  for (const auto& ca : atoms_) {
    if (ca.small) continue;
    if (norm_eval(norm_, *ca.atom.limit - xi) > r + kTolerance) return false;
  }
  return true;
}

RoughLimitSet RoughAnalyzer::rough_limit_set(double r, std::optional<double> lattice_step) const {
  if (!(r >= 0) || !std::isfinite(r)) throw InputError("r must be finite and >= 0");
  RoughLimitSet s;
  s.dim = dim();
  s.r = r;
  if (!i_bounded_) {
    s.empty_reason = "not I-bounded";
    return s;
  }
  for (const auto& c : clusters_.points) s.balls.emplace_back(c.point, r, norm_);

  if (dim() == 1) {
    double lo = limsup() - r, hi = liminf() + r;
    if (lo > hi + kTolerance) {
      s.empty_reason = "I-limsup - I-liminf exceeds 2r";
      return s;
    }
    if (lo > hi) lo = hi = 0.5 * (lo + hi);
    s.interval = Interval(lo, hi);
    return s;
  }

  // Every norm here dominates the max-norm, so each ball sits inside its
  // max-norm box and the set sits inside the intersection of the boxes.
  std::vector<double> lo(static_cast<size_t>(dim()), -1e300), hi(static_cast<size_t>(dim()), 1e300);
  for (const auto& c : clusters_.points)
    for (int d = 0; d < dim(); ++d) {
      lo[d] = std::max(lo[d], c.point[d] - r);
      hi[d] = std::min(hi[d], c.point[d] + r);
    }
  for (int d = 0; d < dim(); ++d)
    if (lo[d] > hi[d] + kTolerance) {
      s.empty_reason = "cluster points are more than 2r apart";
      return s;
    }
  if (!lattice_step) return s;
  const double h = *lattice_step;
  if (!(h > 0)) throw InputError("lattice step must be positive");
  std::vector<size_t> counts;
  double total = 1;
  for (int d = 0; d < dim(); ++d) {
    counts.push_back(static_cast<size_t>(std::floor((hi[d] - lo[d]) / h + 1e-9)) + 1);
    total *= static_cast<double>(counts.back());
  }
  if (total > static_cast<double>(kMaxLatticePoints))
    throw AnalysisError("lattice too fine: " + fmt(total) + " points");
  s.lattice_step = h;
  std::vector<size_t> idx(static_cast<size_t>(dim()), 0);
  for (;;) {
    std::vector<double> c(static_cast<size_t>(dim()));
    for (int d = 0; d < dim(); ++d) c[d] = lo[d] + static_cast<double>(idx[d]) * h;
    Point p(std::move(c));
    if (is_rI_limit(p, r)) s.lattice.push_back(std::move(p));
    // Row-major: the last coordinate varies fastest.
    int d = dim() - 1;
    while (d >= 0 && ++idx[d] == counts[d]) idx[d--] = 0;
    if (d < 0) break;
  }
  return s;
}

std::optional<Point> RoughAnalyzer::i_limit() const {
  if (!i_bounded_ || clusters_.size() != 1) return std::nullopt;
  return clusters_.points[0].point;
}

// ---------------------------------------------------------------------------
// Convenience wrappers

ClusterSet cluster_points(const StructuredSequence& x, IdealSpec ideal) {
  return RoughAnalyzer(x, ideal).cluster_points();
}

double ideal_limsup(const StructuredSequence& x, IdealSpec ideal) {
  return RoughAnalyzer(x, ideal).limsup();
}

double ideal_liminf(const StructuredSequence& x, IdealSpec ideal) {
  return RoughAnalyzer(x, ideal).liminf();
}

bool is_rI_limit(const StructuredSequence& x, IdealSpec ideal, const Point& xi, double r,
                 const NormSpec& norm) {
  return RoughAnalyzer(x, ideal, norm).is_rI_limit(xi, r);
}

RoughLimitSet rough_limit_set(const StructuredSequence& x, IdealSpec ideal, double r) {
  return RoughAnalyzer(x, ideal).rough_limit_set(r);
}

RoughLimitSet classic_rough_limit_set(const StructuredSequence& x, double r) {
  return RoughAnalyzer(x, IdealSpec::MinimalStronglyAdmissible).rough_limit_set(r);
}

std::optional<double> min_roughness_degree(const StructuredSequence& x, IdealSpec ideal) {
  return RoughAnalyzer(x, ideal).min_roughness_degree();
}

std::optional<Point> is_I_convergent(const StructuredSequence& x, IdealSpec ideal) {
  return RoughAnalyzer(x, ideal).i_limit();
}

// ---------------------------------------------------------------------------
// Theorem checks

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Vacuous:
      return "vacuous";
    case CheckStatus::HypothesisNotMet:
      return "hypothesis-not-met";
  }
  return "?";
}

namespace {

void require_dim1(const RoughAnalyzer& a, const char* check) {
  if (a.dim() != 1)
    throw AnalysisError(std::string(check) + " check needs a real sequence (dim 1)");
}

CheckResult fail(CheckResult c, std::string why) {
  c.status = CheckStatus::Fail;
  c.witnesses.push_back(std::move(why));
  return c;
}

}  // namespace

CheckResult check_diameter(const RoughAnalyzer& a, double r) {
  require_dim1(a, "diameter");
  CheckResult c{"diameter", CheckStatus::Pass, {}};
  const RoughLimitSet s = a.rough_limit_set(r);
  const double d = interval_diameter(s.interval);
  c.witnesses.push_back("set " + s.interval.to_string() + ", diam " + fmt(d) + ", 2r " +
                        fmt(2 * r));
  if (d > 2 * r + kTolerance) return fail(c, "diameter exceeds 2r");
  return c;
}

CheckResult check_ball_characterization(const RoughAnalyzer& a, double r) {
  require_dim1(a, "ball");
  CheckResult c{"ball", CheckStatus::Vacuous, {}};
  const RoughLimitSet s = a.rough_limit_set(r);
  const auto lim = a.i_limit();
  c.witnesses.push_back("set " + s.interval.to_string());
  if (lim) {
    c.status = CheckStatus::Pass;
    const Interval ball((*lim)[0] - r, (*lim)[0] + r);
    c.witnesses.push_back("I-convergent to " + lim->to_string() + ", ball " + ball.to_string());
    if (!s.interval.approx_equal(ball)) return fail(c, "limit set differs from the r-ball");
  }
  if (!s.interval.is_empty() &&
      std::abs(interval_diameter(s.interval) - 2 * r) <= kTolerance) {
    c.status = CheckStatus::Pass;
    const double mid = 0.5 * (s.interval.lo() + s.interval.hi());
    if (!lim) return fail(c, "set is a 2r-ball but x is not I-convergent");
    if (std::abs((*lim)[0] - mid) > kTolerance)
      return fail(c, "I-limit differs from the ball centre " + fmt(mid));
  }
  return c;
}

CheckResult check_cluster_ball(const RoughAnalyzer& a, double r) {
  require_dim1(a, "cluster-ball");
  CheckResult c{"cluster-ball", CheckStatus::Pass, {}};
  const RoughLimitSet s = a.rough_limit_set(r);
  if (s.interval.is_empty()) {
    c.witnesses.push_back("empty limit set");
    return c;
  }
  for (const auto& cp : a.cluster_points().points) {
    const Interval ball(cp.point[0] - r, cp.point[0] + r);
    c.witnesses.push_back(s.interval.to_string() + " in " + ball.to_string());
    if (!s.interval.subset_of(ball))
      return fail(c, "limit set leaves the r-ball around cluster point " + cp.point.to_string());
  }
  return c;
}

CheckResult check_boundedness_equivalence(const RoughAnalyzer& a) {
  require_dim1(a, "boundedness");
  CheckResult c{"boundedness", CheckStatus::Pass, {}};
  const auto& x = a.sequence();
  const bool bounded = is_bounded(x, a.norm()).holds();
  const BoundednessCertificate ib = is_I_bounded(x, a.ideal(), a.norm());
  const auto rmin = a.min_roughness_degree();

  // Some r with a non-empty limit set. When I-bounded with bound M, 0 is an
  // rI-limit for r = M; otherwise probe a range of radii and centres.
  bool some_nonempty = false;
  if (rmin) some_nonempty = !a.rough_limit_set(*rmin).is_empty();
  if (ib.holds() && !a.is_rI_limit(Point::zero(1), ib.M))
    return fail(c, "I-bounded with M=" + fmt(ib.M) + " but 0 is not an rI-limit at r=M");
  if (!ib.holds()) {
    for (double r : {0.0, 1.0, 10.0, 1e3, 1e6})
      for (double xi : {-1e3, 0.0, 1e3})
        if (a.is_rI_limit(Point{xi}, r)) some_nonempty = true;
  }

  c.witnesses.push_back(std::string("bounded=") + (bounded ? "true" : "false") +
                        " I-bounded=" + (ib.holds() ? "true" : "false") + " r_min=" +
                        (rmin ? fmt(*rmin) : "inf"));
  if (!bounded && ib.holds())
    c.witnesses.push_back("unbounded yet I-bounded, so boundedness is not necessary");
  if (ib.holds() != a.i_bounded()) return fail(c, "I-boundedness routes disagree");
  if (ib.holds() != rmin.has_value()) return fail(c, "I-bounded but no finite roughness degree");
  if (ib.holds() != some_nonempty) return fail(c, "I-boundedness does not match a non-empty limit set");
  if (bounded && !ib.holds()) return fail(c, "bounded but not I-bounded");
  return c;
}

CheckResult check_closedness(const RoughAnalyzer& a, double r) {
  require_dim1(a, "closedness");
  CheckResult c{"closedness", CheckStatus::Pass, {}};
  const RoughLimitSet s = a.rough_limit_set(r);
  if (s.interval.is_empty()) {
    c.status = CheckStatus::Vacuous;
    c.witnesses.push_back("empty limit set");
    return c;
  }
  const double lo = s.interval.lo(), hi = s.interval.hi();
  c.witnesses.push_back("endpoints " + fmt(lo) + ", " + fmt(hi));
  if (!a.is_rI_limit(Point{lo}, r) || !a.is_rI_limit(Point{hi}, r))
    return fail(c, "an endpoint is not an rI-limit");
  if (a.is_rI_limit(Point{lo - kOutsideStep}, r) || a.is_rI_limit(Point{hi + kOutsideStep}, r))
    return fail(c, "a point 1e-6 outside the interval is an rI-limit");
  return c;
}

CheckResult check_limsup_liminf(const RoughAnalyzer& a) {
  require_dim1(a, "limsup-liminf");
  CheckResult c{"limsup-liminf", CheckStatus::Pass, {}};
  if (!a.i_bounded()) {
    c.status = CheckStatus::HypothesisNotMet;
    c.witnesses.push_back("x is not I-bounded");
    return c;
  }
  const double sup = a.limsup(), inf = a.liminf();
  const auto lim = a.i_limit();
  c.witnesses.push_back("limsup " + fmt(sup) + ", liminf " + fmt(inf) + ", I-limit " +
                        (lim ? lim->to_string() : "none"));
  const bool equal = std::abs(sup - inf) <= kTolerance;
  if (equal != lim.has_value()) return fail(c, "I-convergence does not match limsup = liminf");
  if (lim && std::abs((*lim)[0] - sup) > kTolerance) return fail(c, "I-limit differs from limsup");
  return c;
}

CheckResult check_midpoint(const RoughAnalyzer& a, double r, const Point& y1, const Point& y2) {
  CheckResult c{"midpoint", CheckStatus::Pass, {}};
  std::vector<std::string> missing;
  if (!is_strictly_convex(a.norm()))
    missing.push_back("norm " + a.norm().to_string() + " is not strictly convex");
  if (!a.is_rI_limit(y1, r)) missing.push_back("y1 " + y1.to_string() + " is not an rI-limit");
  if (!a.is_rI_limit(y2, r)) missing.push_back("y2 " + y2.to_string() + " is not an rI-limit");
  const double gap = norm_eval(a.norm(), y1 - y2);
  if (std::abs(gap - 2 * r) > kTolerance)
    missing.push_back("||y1 - y2|| = " + fmt(gap) + " differs from 2r = " + fmt(2 * r));
  const auto lim = a.i_limit();
  const Point mid = (y1 + y2) * 0.5;
  if (!missing.empty()) {
    c.status = CheckStatus::HypothesisNotMet;
    c.witnesses = std::move(missing);
    c.witnesses.push_back("I-limit " + (lim ? lim->to_string() : std::string("absent")));
    return c;
  }
  c.witnesses.push_back("midpoint " + mid.to_string() + ", I-limit " +
                        (lim ? lim->to_string() : std::string("absent")));
  if (!lim) return fail(c, "x is not I-convergent");
  if (!lim->approx_equal(mid)) return fail(c, "I-limit differs from the midpoint");
  return c;
}

}  // namespace roughlim
