#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "roughlim/geometry.hpp"
#include "roughlim/ideal.hpp"
#include "roughlim/sequence.hpp"

// Brute-force engine over finite truncations [1..n] x [1..m]. Nothing here
// uses the symbolic region/atom machinery except through plain membership
// and pointwise evaluation, so it serves as an independent check on the
// exact analysis.

namespace roughlim {

using IndexPredicate = std::function<bool(std::int64_t, std::int64_t)>;

/// Increasing schedule of grid bounds (n, m).
class Exhaustion {
 public:
  using Stage = std::pair<std::int64_t, std::int64_t>;

  /// Throws InputError unless there are >= 3 stages, strictly increasing in
  /// both coordinates.
  explicit Exhaustion(std::vector<Stage> stages);
  /// (50,50), (100,100), (200,200), (400,400).
  static Exhaustion default_schedule();
  /// "50x50,100x100,200x200".
  static Exhaustion parse(const std::string& text);

  const std::vector<Stage>& stages() const { return stages_; }
  const Stage& last() const { return stages_.back(); }
  std::string to_string() const;

 private:
  std::vector<Stage> stages_;
};

struct OracleVerdict {
  enum class Decision { Small, NotSmall, Inconclusive };
  Decision decision = Decision::Inconclusive;
  /// Per-stage estimate: density of the set (DensityZero, FiniteSets) or of
  /// its part beyond the first kBandBound rows and columns (MSA).
  std::vector<double> trace;
};

std::string to_string(OracleVerdict::Decision d);

inline constexpr double kSmallThreshold = 0.02;
inline constexpr double kNoiseMargin = 0.1;
inline constexpr std::int64_t kBandBound = 20;
inline constexpr std::int64_t kTailScanFactor = 20;

/// Worker threads for grid work: ROUGHLIM_THREADS if set, else the hardware
/// concurrency.
unsigned oracle_threads();

/// Exact count of satisfying (j,k) in [1..n] x [1..m].
std::int64_t empirical_count(const IndexPredicate& pred, std::int64_t n, std::int64_t m);
double empirical_density(const IndexPredicate& pred, std::int64_t n, std::int64_t m);

OracleVerdict oracle_small(IdealSpec ideal, const IndexPredicate& pred, const Exhaustion& ex);

/// Values of a sequence on the largest stage grid, computed once.
class GridSample {
 public:
  GridSample(const StructuredSequence& x, std::int64_t n, std::int64_t m);
  std::int64_t rows() const { return n_; }
  std::int64_t cols() const { return m_; }
  int dim() const { return dim_; }
  /// ||x_jk - xi|| for 1 <= j <= n, 1 <= k <= m.
  double distance(std::int64_t j, std::int64_t k, const Point& xi, const NormSpec& norm) const;
  double value(std::int64_t j, std::int64_t k, int coord) const;

 private:
  std::int64_t n_, m_;
  int dim_;
  std::vector<double> values_;
};

OracleVerdict oracle_is_rI_limit(const StructuredSequence& x, IdealSpec ideal, const Point& xi,
                                 double r, double eps, const Exhaustion& ex,
                                 const NormSpec& norm = NormSpec::euclidean());
/// Same, reusing precomputed values (the grid must cover the last stage).
OracleVerdict oracle_is_rI_limit(const GridSample& grid, IdealSpec ideal, const Point& xi,
                                 double r, double eps, const Exhaustion& ex,
                                 const NormSpec& norm = NormSpec::euclidean());

/// Lattice points lo + i*h of `box` (one interval per coordinate) whose
/// oracle verdict is Small for every epsilon in `eps_policy`; row-major.
std::vector<Point> oracle_limit_set_scan(const StructuredSequence& x, IdealSpec ideal, double r,
                                         const std::vector<Interval>& box, double h,
                                         const std::vector<double>& eps_policy,
                                         const Exhaustion& ex,
                                         const NormSpec& norm = NormSpec::euclidean());

/// Every (j,k) with N <= j,k <= 20N satisfies ||x_jk - xi|| < r + eps.
bool classic_tail_check(const StructuredSequence& x, const Point& xi, double r, double eps,
                        std::int64_t N, const NormSpec& norm = NormSpec::euclidean());

}  // namespace roughlim
