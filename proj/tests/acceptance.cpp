// Acceptance gate: one PASS/FAIL line per criterion, with wall time against
// the budget. Exit status is non-zero if any criterion fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "roughlim/analysis.hpp"
#include "roughlim/cli.hpp"
#include "roughlim/ideal.hpp"
#include "roughlim/oracle.hpp"
#include "support/generators.hpp"

using namespace roughlim;
using json = nlohmann::json;

namespace {

constexpr IdealSpec DZ = IdealSpec::DensityZero;
constexpr IdealSpec MSA = IdealSpec::MinimalStronglyAdmissible;

std::string data(const char* name) { return std::string(ROUGHLIM_DATA_DIR) + "/" + name; }

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

json run_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return code == cli::kExitOk ? json::parse(out.str()) : json();
}

// The shipped example under both ideals, through the limitset command.
Outcome example_exact() {
  Outcome o;
  int code = 0;
  const std::vector<double> rs = {0, 0.5, 0.99, 1, 1.5, 2, 3};
  for (double r : rs) {
    char rbuf[32];
    std::snprintf(rbuf, sizeof rbuf, "%.17g", r);
    const auto dz = run_cli({"limitset", "--seq", data("example21.seq"), "--r", rbuf}, code);
    if (code != 0) {
      o.fail("limitset exit code " + std::to_string(code));
      continue;
    }
    const auto& row = dz["results"][0];
    if (r < 1) {
      if (!row["empty"].get<bool>()) o.fail("expected empty at r=" + std::string(rbuf));
    } else {
      if (row["empty"].get<bool>() || !row["interval"].is_array()) {
        o.fail("expected an interval at r=" + std::string(rbuf));
        continue;
      }
      const double lo = row["interval"][0], hi = row["interval"][1];
      if (lo != 1 - r || hi != r - 1)
        o.fail("interval mismatch at r=" + std::string(rbuf) + ": " + row["interval"].dump());
    }
    const auto m = run_cli({"limitset", "--seq", data("example21.seq"), "--ideal", "minimal-sa", "--r", rbuf},
                           code);
    if (code != 0 || !m["results"][0]["empty"].get<bool>())
      o.fail("minimal-sa set not empty at r=" + std::string(rbuf));
  }
  if (o.ok) o.detail = "7 radii x 2 ideals, endpoint error 0";
  return o;
}

Outcome example_oracle() {
  Outcome o;
  const auto x = StructuredSequence::load(data("example21.seq"));
  const auto pts = oracle_limit_set_scan(x, DZ, 2, {Interval(-4, 4)}, 0.1, {0.1, 0.05, 0.02},
                                         Exhaustion::default_schedule());
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p[0]);
  const double hd = hausdorff_distance(v, Interval(-1, 1));
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu scan points, Hausdorff %.4g (limit 0.15)", v.size(), hd);
  o.detail = buf;
  if (!(hd <= 0.15)) o.fail(buf);
  return o;
}

Outcome property_suite() {
  Outcome o;
  testgen::Rng rng(0xacce9703);
  const int kSequences = 60;
  const double rs[] = {0, 0.5, 1, 2};
  int checks = 0, vacuous = 0, hyp = 0;
  auto record = [&](const CheckResult& c, const std::string& where) {
    ++checks;
    if (c.status == CheckStatus::Vacuous) ++vacuous;
    if (c.status == CheckStatus::HypothesisNotMet) ++hyp;
    if (c.failed()) {
      std::string w = where + " " + c.theorem + " failed";
      for (const auto& s : c.witnesses) w += "; " + s;
      o.fail(w);
    }
  };
  for (int i = 0; i < kSequences; ++i) {
    const auto x = testgen::random_sequence(rng, "prop" + std::to_string(i));
    const RoughAnalyzer dz(x, DZ), msa(x, MSA);
    for (const RoughAnalyzer* a : {&dz, &msa}) {
      const std::string where = x.name() + "/" + to_string(a->ideal());
      record(check_boundedness_equivalence(*a), where);
      record(check_limsup_liminf(*a), where);
      for (double r : rs) {
        record(check_diameter(*a, r), where);
        record(check_cluster_ball(*a, r), where);
        record(check_closedness(*a, r), where);
        record(check_ball_characterization(*a, r), where);
      }
      for (size_t k = 0; k + 1 < std::size(rs); ++k)
        if (!a->rough_limit_set(rs[k]).interval.subset_of(a->rough_limit_set(rs[k + 1]).interval))
          o.fail(where + " not monotone in r");
    }
    for (double r : rs)
      if (!classic_rough_limit_set(x, r).interval.subset_of(dz.rough_limit_set(r).interval))
        o.fail(x.name() + " classic set not inside the density-zero set");
  }
  if (o.ok) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d sequences, %d checks (%d vacuous, %d hypothesis-not-met), 0 failures",
                  kSequences, checks, vacuous, hyp);
    o.detail = buf;
  }
  return o;
}

Outcome midpoint_fixtures() {
  Outcome o;
  const RoughAnalyzer eu(StructuredSequence::load(data("midpoint_euclid.seq")), DZ, NormSpec::euclidean());
  const auto p = check_midpoint(eu, 1, Point{0, 0}, Point{2, 0});
  if (p.status != CheckStatus::Pass) o.fail("euclidean fixture: " + to_string(p.status));
  if (eu.i_limit() != Point{1, 0}) o.fail("euclidean fixture limit is not (1, 0)");

  const RoughAnalyzer mx(StructuredSequence::load(data("midpoint_max.seq")), DZ, NormSpec::max_norm());
  const auto h = check_midpoint(mx, 1, Point{-1, 0}, Point{1, 0});
  if (h.status != CheckStatus::HypothesisNotMet) o.fail("max-norm fixture: " + to_string(h.status));
  if (!mx.is_rI_limit(Point{-1, 0}, 1) || !mx.is_rI_limit(Point{1, 0}, 1))
    o.fail("max-norm fixture: y1, y2 should both be rough limits");
  if (mx.i_limit()) o.fail("max-norm fixture should not converge");
  if (o.ok) o.detail = "euclidean: pass, limit (1, 0); max-norm: hypothesis-not-met, no I-limit";
  return o;
}

// Signed distance of xi to the boundary of the exact set: the largest
// cluster distance minus r. Infinite when x is not I-bounded.
double margin(const RoughAnalyzer& a, double xi, double r) {
  if (!a.i_bounded()) return INFINITY;
  double m = -INFINITY;
  for (const auto& c : a.cluster_points().points) m = std::max(m, std::abs(c.point[0] - xi));
  return m - r;
}

Outcome oracle_equivalence() {
  Outcome o;
  testgen::Rng rng(0xacce9705);
  const auto ex = Exhaustion::default_schedule();
  const double eps = 0.1, h = 0.1;
  long compared = 0, skipped = 0, disagreements = 0;
  for (int i = 0; i < 20; ++i) {
    const auto x = testgen::random_sequence(rng, "eq" + std::to_string(i));
    const GridSample grid(x, ex.last().first, ex.last().second);
    for (IdealSpec I : {DZ, MSA}) {
      const RoughAnalyzer a(x, I);
      for (double r : {0.5, 1.0, 2.0}) {
        for (int t = -70; t <= 70; ++t) {
          const double xi = t * h;
          if (std::abs(margin(a, xi, r)) <= 0.2) {
            ++skipped;
            continue;
          }
          ++compared;
          const bool exact = a.is_rI_limit(Point{xi}, r);
          const auto v = oracle_is_rI_limit(grid, I, Point{xi}, r, eps, ex);
          const auto want = exact ? OracleVerdict::Decision::Small : OracleVerdict::Decision::NotSmall;
          if (v.decision != want) {
            ++disagreements;
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s/%s r=%g xi=%g exact=%d oracle=%s", x.name().c_str(),
                          to_string(I).c_str(), r, xi, exact, to_string(v.decision).c_str());
            o.fail(buf);
          }
        }
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%ld lattice points compared, %ld near boundaries skipped, %ld disagreements",
                compared, skipped, disagreements);
  if (o.ok) o.detail = buf;
  else o.detail += " (" + std::string(buf) + ")";
  return o;
}

Outcome ideal_algebra() {
  Outcome o;
  const Region sq = Region::sparse(SparseKind::Squares, SparseKind::Squares);
  const std::vector<Region> fixtures = {
      Region::empty(),
      sq,
      Region::sparse(SparseKind::Cubes, SparseKind::PowersOfTwo),
      Region::row(1),
      Region::col(7),
      Region::points({{2, 3}, {5, 5}}),
      Region::cell(2, 2, 0, 0),
      Region::cell(2, 2, 0, 0) | Region::cell(2, 2, 1, 1),
      Region::cell(3, 1, 2, 0) - Region::row(2),
      sq & Region::row(4),
      ~sq,
      Region::full(),
  };
  for (IdealSpec I : {DZ, MSA, IdealSpec::FiniteSets}) {
    const auto rep = check_ideal_axioms(I, fixtures);
    if (!rep.pass)
      o.fail(to_string(I) + " axioms: " + (rep.violations.empty() ? "" : rep.violations.front()));
  }
  if (!is_admissible(IdealSpec::FiniteSets) || is_strongly_admissible(IdealSpec::FiniteSets))
    o.fail("finite sets misclassified");
  for (IdealSpec I : {DZ, MSA})
    if (!is_admissible(I) || !is_strongly_admissible(I)) o.fail(to_string(I) + " misclassified");
  for (IdealSpec I : {DZ, MSA, IdealSpec::FiniteSets}) {
    const bool bands = ideal_contains(I, Region::row(3)) && ideal_contains(I, Region::col(11));
    const bool singletons = ideal_contains(I, Region::points({{9, 4}}));
    if (bands != is_strongly_admissible(I) || singletons != is_admissible(I))
      o.fail(to_string(I) + " sampled classification disagrees");
  }
  testgen::Rng rng(0xacce9706);
  for (int i = 0; i < 100; ++i) {
    const Region r = testgen::random_region(rng, 3);
    for (IdealSpec I : {DZ, MSA, IdealSpec::FiniteSets})
      if (filter_member(I, r) != ideal_contains(I, ~r)) o.fail("filter duality fails on " + r.to_string());
  }
  if (o.ok) o.detail = "3 ideals x 12 fixture regions; classification; duality on 100 random regions";
  return o;
}

struct Criterion {
  const char* id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "2jk/parity example: exact limit sets", 1, example_exact},
      {"AC2", "2jk/parity example: oracle scan agreement", 10, example_oracle},
      {"AC3", "theorem property suite", 60, property_suite},
      {"AC4", "midpoint theorem fixtures", 5, midpoint_fixtures},
      {"AC5", "oracle/exact equivalence", 120, oracle_equivalence},
      {"AC6", "ideal algebra", 5, ideal_algebra},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.budget_s) o.fail("over time budget");
    if (!o.ok) ++failures;
    std::printf("%s %s: %s (%.3f s / %.0f s) %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
