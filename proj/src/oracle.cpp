#include "roughlim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "roughlim/errors.hpp"

namespace roughlim {

using Index = std::int64_t;

namespace {

// Runs body(i) for i in [0, n) on contiguous chunks. Results must be written
// to per-index slots so the outcome does not depend on scheduling.
template <typename F>
void parallel_for(Index n, F&& body) {
  const unsigned threads =
      static_cast<unsigned>(std::min<Index>(oracle_threads(), std::max<Index>(n / 16, 1)));
  if (threads <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const Index chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const Index lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (Index i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct StageCounts {
  Index total = 0;
  Index beyond_bands = 0;  // points with j > kBandBound and k > kBandBound
};

template <typename Pred>
StageCounts count_rows(const Pred& pred, Index j_lo, Index j_hi, Index m) {
  StageCounts c;
  for (Index j = j_lo; j <= j_hi; ++j)
    for (Index k = 1; k <= m; ++k)
      if (pred(j, k)) {
        ++c.total;
        if (j > kBandBound && k > kBandBound) ++c.beyond_bands;
      }
  return c;
}

template <typename Pred>
StageCounts count_stage(const Pred& pred, Index n, Index m, bool parallel) {
  if (!parallel) return count_rows(pred, 1, n, m);
  std::vector<StageCounts> rows(static_cast<size_t>(n));
  parallel_for(n, [&](Index row) { rows[static_cast<size_t>(row)] = count_rows(pred, row + 1, row + 1, m); });
  StageCounts c;
  for (const auto& r : rows) {
    c.total += r.total;
    c.beyond_bands += r.beyond_bands;
  }
  return c;
}

OracleVerdict decide(IdealSpec ideal, const std::vector<StageCounts>& counts, const Exhaustion& ex) {
  using D = OracleVerdict::Decision;
  OracleVerdict v;
  for (size_t i = 0; i < counts.size(); ++i) {
    const auto [n, m] = ex.stages()[i];
    const double area = static_cast<double>(n) * static_cast<double>(m);
    const Index c = ideal == IdealSpec::MinimalStronglyAdmissible ? counts[i].beyond_bands
                                                                  : counts[i].total;
    v.trace.push_back(static_cast<double>(c) / area);
  }
  const size_t last = counts.size() - 1;

  switch (ideal) {
    case IdealSpec::DensityZero: {
      // Null sets decay like 1/sqrt(nm) or faster; positive-density sets
      // level off at their density.
      const auto& e = v.trace;
      bool monotone = true;
      for (size_t i = 1; i < e.size(); ++i)
        if (e[i] > e[i - 1] * (1.0 + kNoiseMargin)) monotone = false;
      const bool decays = e[last] == 0.0 || e[last] <= 0.75 * e[0];
      if (monotone && decays && e[last] < kSmallThreshold)
        v.decision = D::Small;
      else if (e[last] >= kSmallThreshold && e[last] >= 0.5 * e[0])
        v.decision = D::NotSmall;
      else
        v.decision = D::Inconclusive;
      break;
    }
    case IdealSpec::MinimalStronglyAdmissible: {
      const bool none = std::all_of(counts.begin(), counts.end(),
                                    [](const StageCounts& c) { return c.beyond_bands == 0; });
      if (none)
        v.decision = D::Small;
      else if (counts[last].beyond_bands > counts[0].beyond_bands)
        v.decision = D::NotSmall;
      else
        v.decision = D::Inconclusive;
      break;
    }
    case IdealSpec::FiniteSets: {
      bool growing = true;
      for (size_t i = 1; i < counts.size(); ++i)
        if (counts[i].total <= counts[i - 1].total) growing = false;
      if (counts[last].total == counts[last - 1].total)
        v.decision = D::Small;
      else if (growing)
        v.decision = D::NotSmall;
      else
        v.decision = D::Inconclusive;
      break;
    }
  }
  return v;
}

template <typename Pred>
OracleVerdict verdict(IdealSpec ideal, const Pred& pred, const Exhaustion& ex, bool parallel) {
  std::vector<StageCounts> counts;
  for (const auto& [n, m] : ex.stages()) counts.push_back(count_stage(pred, n, m, parallel));
  return decide(ideal, counts, ex);
}

}  // namespace

unsigned oracle_threads() {
  if (const char* env = std::getenv("ROUGHLIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Exhaustion

Exhaustion::Exhaustion(std::vector<Stage> stages) : stages_(std::move(stages)) {
  if (stages_.size() < 3) throw InputError("exhaustion needs at least 3 stages");
  for (size_t i = 0; i < stages_.size(); ++i) {
    if (stages_[i].first < 1 || stages_[i].second < 1)
      throw InputError("exhaustion grid bounds must be >= 1");
    if (i && (stages_[i].first <= stages_[i - 1].first ||
              stages_[i].second <= stages_[i - 1].second))
      throw InputError("exhaustion stages must be strictly increasing");
  }
}

Exhaustion Exhaustion::default_schedule() {
  return Exhaustion({{50, 50}, {100, 100}, {200, 200}, {400, 400}});
}

Exhaustion Exhaustion::parse(const std::string& text) {
  std::vector<Stage> stages;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw InputError("bad grid stage '" + item + "', expected NxM");
    try {
      size_t a = 0, b = 0;
      const Index n = std::stoll(item.substr(0, x), &a);
      const Index m = std::stoll(item.substr(x + 1), &b);
      if (a != x || b != item.size() - x - 1) throw InputError("");
      stages.emplace_back(n, m);
    } catch (const std::exception&) {
      throw InputError("bad grid stage '" + item + "', expected NxM");
    }
  }
  return Exhaustion(std::move(stages));
}

std::string Exhaustion::to_string() const {
  std::string s;
  for (const auto& [n, m] : stages_) {
    if (!s.empty()) s += ",";
    s += std::to_string(n) + "x" + std::to_string(m);
  }
  return s;
}

std::string to_string(OracleVerdict::Decision d) {
  switch (d) {
    case OracleVerdict::Decision::Small:
      return "small";
    case OracleVerdict::Decision::NotSmall:
      return "not-small";
    case OracleVerdict::Decision::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Counting and verdicts

Index empirical_count(const IndexPredicate& pred, Index n, Index m) {
  if (n < 1 || m < 1) throw InputError("grid bounds must be >= 1");
  return count_stage(pred, n, m, true).total;
}

double empirical_density(const IndexPredicate& pred, Index n, Index m) {
  return static_cast<double>(empirical_count(pred, n, m)) /
         (static_cast<double>(n) * static_cast<double>(m));
}

OracleVerdict oracle_small(IdealSpec ideal, const IndexPredicate& pred, const Exhaustion& ex) {
  return verdict(ideal, pred, ex, true);
}

// ---------------------------------------------------------------------------
// Sequence-level oracles

GridSample::GridSample(const StructuredSequence& x, Index n, Index m)
    : n_(n), m_(m), dim_(x.dim()) {
  if (n < 1 || m < 1) throw InputError("grid bounds must be >= 1");
  values_.resize(static_cast<size_t>(n * m * dim_));
  parallel_for(n, [&](Index row) {
    for (Index k = 1; k <= m; ++k) {
      const Point p = x.eval(row + 1, k);
      for (int d = 0; d < dim_; ++d)
        values_[static_cast<size_t>((row * m + (k - 1)) * dim_ + d)] = p[d];
    }
  });
}

double GridSample::value(Index j, Index k, int coord) const {
  return values_[static_cast<size_t>(((j - 1) * m_ + (k - 1)) * dim_ + coord)];
}

double GridSample::distance(Index j, Index k, const Point& xi, const NormSpec& norm) const {
  if (dim_ == 1) return std::abs(value(j, k, 0) - xi[0]);
  double diff[kMaxDim];
  for (int d = 0; d < dim_; ++d) diff[d] = value(j, k, d) - xi[d];
  return norm_eval(norm, std::span<const double>(diff, static_cast<size_t>(dim_)));
}

OracleVerdict oracle_is_rI_limit(const GridSample& grid, IdealSpec ideal, const Point& xi,
                                 double r, double eps, const Exhaustion& ex,
                                 const NormSpec& norm) {
  if (!(eps > 0)) throw InputError("epsilon must be positive");
  if (xi.dim() != grid.dim()) throw InputError("candidate dimension mismatch");
  if (ex.last().first > grid.rows() || ex.last().second > grid.cols())
    throw InputError("grid sample smaller than the exhaustion");
  const double bound = r + eps;
  return oracle_small(
      ideal, [&](Index j, Index k) { return grid.distance(j, k, xi, norm) >= bound; }, ex);
}

OracleVerdict oracle_is_rI_limit(const StructuredSequence& x, IdealSpec ideal, const Point& xi,
                                 double r, double eps, const Exhaustion& ex,
                                 const NormSpec& norm) {
  if (!(eps > 0)) throw InputError("epsilon must be positive");
  if (xi.dim() != x.dim()) throw InputError("candidate dimension mismatch");
  const double bound = r + eps;
  return oracle_small(
      ideal,
      [&](Index j, Index k) { return norm_eval(norm, x.eval(j, k) - xi) >= bound; }, ex);
}

std::vector<Point> oracle_limit_set_scan(const StructuredSequence& x, IdealSpec ideal, double r,
                                         const std::vector<Interval>& box, double h,
                                         const std::vector<double>& eps_policy,
                                         const Exhaustion& ex, const NormSpec& norm) {
  if (!(h > 0)) throw InputError("lattice step must be positive");
  if (static_cast<int>(box.size()) != x.dim()) throw InputError("box dimension mismatch");
  if (eps_policy.empty()) throw InputError("epsilon policy must not be empty");
  const int dim = x.dim();
  std::vector<Index> counts;
  Index total = 1;
  for (const auto& side : box) {
    if (side.is_empty()) return {};
    counts.push_back(static_cast<Index>(std::floor((side.hi() - side.lo()) / h + 1e-9)) + 1);
    total *= counts.back();
  }
  if (total > 1'000'000) throw InputError("lattice too fine for an oracle scan");

  const GridSample grid(x, ex.last().first, ex.last().second);
  std::vector<Point> lattice;
  lattice.reserve(static_cast<size_t>(total));
  for (Index flat = 0; flat < total; ++flat) {
    // Row-major: the last coordinate varies fastest.
    std::vector<double> c(static_cast<size_t>(dim));
    Index rest = flat;
    for (int d = dim - 1; d >= 0; --d) {
      c[d] = box[d].lo() + static_cast<double>(rest % counts[d]) * h;
      rest /= counts[d];
    }
    lattice.emplace_back(std::move(c));
  }

  std::vector<char> keep(lattice.size(), 0);
  // The lattice is the parallel axis; each verdict counts single-threaded.
  parallel_for(total, [&](Index i) {
    const Point& p = lattice[static_cast<size_t>(i)];
    bool all_small = true;
    for (double eps : eps_policy) {
      const double bound = r + eps;
      auto exceeds = [&](Index j, Index k) { return grid.distance(j, k, p, norm) >= bound; };
      if (verdict(ideal, exceeds, ex, false).decision != OracleVerdict::Decision::Small) {
        all_small = false;
        break;
      }
    }
    keep[static_cast<size_t>(i)] = all_small ? 1 : 0;
  });

  std::vector<Point> out;
  for (size_t i = 0; i < lattice.size(); ++i)
    if (keep[i]) out.push_back(std::move(lattice[i]));
  return out;
}

bool classic_tail_check(const StructuredSequence& x, const Point& xi, double r, double eps,
                        Index N, const NormSpec& norm) {
  if (N < 1) throw InputError("tail start N must be >= 1");
  if (xi.dim() != x.dim()) throw InputError("candidate dimension mismatch");
  const Index hi = N * kTailScanFactor;
  std::vector<char> ok(static_cast<size_t>(hi - N + 1), 1);
  parallel_for(hi - N + 1, [&](Index row) {
    const Index j = N + row;
    for (Index k = N; k <= hi; ++k)
      if (norm_eval(norm, x.eval(j, k) - xi) >= r + eps) {
        ok[static_cast<size_t>(row)] = 0;
        return;
      }
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

}  // namespace roughlim
