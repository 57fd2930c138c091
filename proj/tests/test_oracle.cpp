#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "roughlim/errors.hpp"
#include "roughlim/oracle.hpp"

using namespace roughlim;
using Decision = OracleVerdict::Decision;

namespace {

std::string data(const char* name) { return std::string(ROUGHLIM_DATA_DIR) + "/" + name; }
StructuredSequence load(const char* name) { return StructuredSequence::load(data(name)); }

bool is_square(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return r * r == n;
}

IndexPredicate squares_pred() {
  return [](std::int64_t j, std::int64_t k) { return is_square(j) && is_square(k); };
}

IndexPredicate parity_pred() {
  return [](std::int64_t j, std::int64_t k) { return (j + k) % 2 == 0; };
}

class ThreadCap {
 public:
  explicit ThreadCap(const char* v) { setenv("ROUGHLIM_THREADS", v, 1); }
  ~ThreadCap() { unsetenv("ROUGHLIM_THREADS"); }
};

}  // namespace

TEST_CASE("exhaustion schedules") {
  const auto d = Exhaustion::default_schedule();
  CHECK(d.stages().size() == 4);
  CHECK(d.last() == Exhaustion::Stage{400, 400});
  CHECK(Exhaustion::parse(d.to_string()).stages() == d.stages());
  CHECK(Exhaustion::parse("10x20,30x40,50x60").last() == Exhaustion::Stage{50, 60});
  CHECK_THROWS_AS(Exhaustion::parse("10x10,20x20"), InputError);
  CHECK_THROWS_AS(Exhaustion::parse("10x10,20x20,20x30"), InputError);
  CHECK_THROWS_AS(Exhaustion::parse("10x10,20,30x30"), InputError);
}

TEST_CASE("empirical density") {
  CHECK(empirical_density([](auto, auto) { return true; }, 10, 10) == 1.0);
  CHECK(empirical_density(squares_pred(), 100, 100) == 0.01);
  CHECK(empirical_density(parity_pred(), 10, 10) == 0.5);
  CHECK(empirical_count(squares_pred(), 400, 100) == 20 * 10);
  for (std::int64_t n : {7, 64, 333}) {
    const double d = empirical_density(parity_pred(), n, n + 3);
    const double scaled = d * static_cast<double>(n * (n + 3));
    REQUIRE(scaled == std::round(scaled));
  }
}

TEST_CASE("oracle smallness verdicts") {
  const auto ex = Exhaustion::default_schedule();
  const auto sq = oracle_small(IdealSpec::DensityZero, squares_pred(), ex);
  CHECK(sq.decision == Decision::Small);
  REQUIRE(sq.trace.size() == 4);
  // floor(sqrt(n))^2 / n^2 at n = 50, 100, 200, 400.
  CHECK(sq.trace[0] == doctest::Approx(49.0 / 2500));
  CHECK(sq.trace[1] == doctest::Approx(0.01));
  CHECK(sq.trace[2] == doctest::Approx(196.0 / 40000));
  CHECK(sq.trace[3] == doctest::Approx(0.0025));

  CHECK(oracle_small(IdealSpec::DensityZero, parity_pred(), ex).decision == Decision::NotSmall);
  const IndexPredicate row3 = [](std::int64_t j, std::int64_t) { return j == 3; };
  CHECK(oracle_small(IdealSpec::MinimalStronglyAdmissible, row3, ex).decision == Decision::Small);
  CHECK(oracle_small(IdealSpec::MinimalStronglyAdmissible, squares_pred(), ex).decision ==
        Decision::NotSmall);
  CHECK(oracle_small(IdealSpec::FiniteSets, row3, ex).decision == Decision::NotSmall);
  const IndexPredicate few = [](std::int64_t j, std::int64_t k) { return j + k < 10; };
  CHECK(oracle_small(IdealSpec::FiniteSets, few, ex).decision == Decision::Small);
  // One cell in 100: positive density, but below the decision threshold.
  const IndexPredicate sparse_cell = [](std::int64_t j, std::int64_t k) { return j % 10 == 0 && k % 10 == 0; };
  CHECK(oracle_small(IdealSpec::DensityZero, sparse_cell, ex).decision == Decision::Inconclusive);
}

TEST_CASE("oracle rI-limit verdicts") {
  const auto ex = Exhaustion::default_schedule();
  const auto x = load("example21.seq");
  CHECK(oracle_is_rI_limit(x, IdealSpec::DensityZero, Point{0}, 1, 0.1, ex).decision == Decision::Small);
  CHECK(oracle_is_rI_limit(x, IdealSpec::DensityZero, Point{0}, 0.5, 0.1, ex).decision == Decision::NotSmall);
  CHECK(oracle_is_rI_limit(load("constant.seq"), IdealSpec::DensityZero, Point{5}, 0, 0.1, ex).decision ==
        Decision::Small);
  CHECK(oracle_is_rI_limit(x, IdealSpec::MinimalStronglyAdmissible, Point{0}, 1, 0.1, ex).decision ==
        Decision::NotSmall);
}

TEST_CASE("limit set scans") {
  const auto ex = Exhaustion::default_schedule();
  const auto x = load("example21.seq");
  const auto pts = oracle_limit_set_scan(x, IdealSpec::DensityZero, 2, {Interval(-4, 4)}, 0.1,
                                         {0.1, 0.05, 0.02}, ex);
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p[0]);
  CHECK(hausdorff_distance(v, Interval(-1, 1)) <= 0.15);
  CHECK(std::is_sorted(v.begin(), v.end()));

  const auto c = oracle_limit_set_scan(load("constant.seq"), IdealSpec::DensityZero, 1, {Interval(3, 7)},
                                       0.1, {0.1, 0.05, 0.02}, ex);
  std::vector<double> cv;
  for (const auto& p : c) cv.push_back(p[0]);
  CHECK(hausdorff_distance(cv, Interval(4, 6)) <= 0.1);

  CHECK(oracle_limit_set_scan(x, IdealSpec::DensityZero, 0.5, {Interval(-4, 4)}, 0.1, {0.1}, ex).empty());
  CHECK_THROWS_AS(oracle_limit_set_scan(x, IdealSpec::DensityZero, 1, {Interval(-4, 4)}, 0, {0.1}, ex),
                  InputError);
}

TEST_CASE("scans do not depend on the thread count") {
  const auto ex = Exhaustion::parse("20x20,40x40,80x80");
  const auto x = load("midpoint_euclid.seq");
  const std::vector<Interval> box{Interval(-0.5, 2.5), Interval(-1.5, 1.5)};
  std::vector<Point> one, four;
  {
    ThreadCap cap("1");
    CHECK(oracle_threads() == 1);
    one = oracle_limit_set_scan(x, IdealSpec::DensityZero, 1, box, 0.25, {0.1}, ex);
  }
  {
    ThreadCap cap("4");
    four = oracle_limit_set_scan(x, IdealSpec::DensityZero, 1, box, 0.25, {0.1}, ex);
  }
  CHECK_FALSE(one.empty());
  CHECK(one == four);
}

TEST_CASE("classic tail checks") {
  const auto c = load("constant.seq");
  for (std::int64_t N : {1, 10, 50}) CHECK(classic_tail_check(c, Point{5}, 1, 0.1, N));
  const auto x = load("example21.seq");
  for (double xi : {-2.0, 0.0, 3.0})
    for (double r : {0.0, 5.0, 10.0}) CHECK_FALSE(classic_tail_check(x, Point{xi}, r, 0.1, 10));
  CHECK_THROWS_AS(classic_tail_check(c, Point{5}, 1, 0.1, 0), InputError);
}
