#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roughlim {

/// Absolute tolerance used whenever two derived reals are compared.
inline constexpr double kTolerance = 1e-9;
inline constexpr int kMaxDim = 8;

/// A point of R^d, 1 <= d <= 8, with finite coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zero(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<size_t>(i)]; }
  std::span<const double> coords() const { return coords_; }

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator*(double s) const;

  bool operator==(const Point&) const = default;

  /// Max-coordinate distance within kTolerance.
  bool approx_equal(const Point& o, double tol = kTolerance) const;

  std::string to_string() const;

 private:
  std::vector<double> coords_;
};

/// p-norm (p >= 1) or max-norm on R^d.
class NormSpec {
 public:
  enum class Kind { PNorm, Max };

  static NormSpec p_norm(double p);
  static NormSpec euclidean() { return p_norm(2.0); }
  static NormSpec max_norm() { return NormSpec(Kind::Max, 0.0); }
  /// Accepts "max", "inf" or a number p >= 1.
  static NormSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  std::string to_string() const;

  bool operator==(const NormSpec&) const = default;

 private:
  NormSpec(Kind k, double p) : kind_(k), p_(p) {}
  Kind kind_;
  double p_;
};

double norm_eval(const NormSpec& n, const Point& p);
double norm_eval(const NormSpec& n, std::span<const double> coords);

/// True iff the unit sphere contains no segment: p-norms with 1 < p < inf.
bool is_strictly_convex(const NormSpec& n);

struct ClosedBall {
  ClosedBall(Point center, double radius, NormSpec norm);

  Point center;
  double radius;
  NormSpec norm;
};

/// Boundary included, compared with kTolerance slack. Throws InputError on a
/// dimension mismatch.
bool ball_contains(const ClosedBall& b, const Point& p);

/// Closed real interval, possibly empty.
class Interval {
 public:
  Interval() = default;  // empty
  Interval(double lo, double hi);

  static Interval empty() { return {}; }

  bool is_empty() const { return !bounds_.has_value(); }
  double lo() const;
  double hi() const;

  bool contains(double v, double tol = kTolerance) const;
  /// Empty is a subset of everything.
  bool subset_of(const Interval& o, double tol = kTolerance) const;
  bool approx_equal(const Interval& o, double tol = kTolerance) const;

  std::string to_string() const;

 private:
  struct Bounds {
    double lo, hi;
  };
  std::optional<Bounds> bounds_;
};

double interval_diameter(const Interval& i);

/// Hausdorff distance between a finite point set on the line and an interval.
/// Both empty gives 0; exactly one empty gives +inf.
double hausdorff_distance(std::span<const double> points, const Interval& i);

}  // namespace roughlim
