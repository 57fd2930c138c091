#include "roughlim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "roughlim/errors.hpp"

namespace roughlim {

namespace {

void check_coords(const std::vector<double>& c) {
  if (c.empty() || c.size() > static_cast<size_t>(kMaxDim))
    throw InputError("point dimension must be in [1, 8], got " +
                     std::to_string(c.size()));
  for (double v : c)
    if (!std::isfinite(v)) throw InputError("point coordinates must be finite");
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  check_coords(coords_);
}

Point::Point(std::initializer_list<double> coords) : coords_(coords) {
  check_coords(coords_);
}

Point Point::zero(int dim) {
  return Point(std::vector<double>(static_cast<size_t>(dim), 0.0));
}

Point Point::operator+(const Point& o) const {
  if (o.dim() != dim()) throw InputError("dimension mismatch");
  std::vector<double> r(coords_);
  for (size_t i = 0; i < r.size(); ++i) r[i] += o.coords_[i];
  return Point(std::move(r));
}

Point Point::operator-(const Point& o) const {
  if (o.dim() != dim()) throw InputError("dimension mismatch");
  std::vector<double> r(coords_);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= o.coords_[i];
  return Point(std::move(r));
}

Point Point::operator*(double s) const {
  std::vector<double> r(coords_);
  for (double& v : r) v *= s;
  return Point(std::move(r));
}

bool Point::approx_equal(const Point& o, double tol) const {
  if (o.dim() != dim()) return false;
  for (size_t i = 0; i < coords_.size(); ++i)
    if (std::abs(coords_[i] - o.coords_[i]) > tol) return false;
  return true;
}

std::string Point::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ", ";
    s += fmt12(coords_[i]);
  }
  return s + ")";
}

NormSpec NormSpec::p_norm(double p) {
  if (std::isinf(p) && p > 0) return max_norm();
  if (!(p >= 1.0)) throw InputError("p-norm requires p >= 1");
  return NormSpec(Kind::PNorm, p);
}

NormSpec NormSpec::parse(const std::string& text) {
  if (text == "max" || text == "inf") return max_norm();
  size_t used = 0;
  double p = 0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError("bad norm '" + text + "': expected max or a number >= 1");
  }
  if (used != text.size())
    throw InputError("bad norm '" + text + "': expected max or a number >= 1");
  return p_norm(p);
}

std::string NormSpec::to_string() const {
  return kind_ == Kind::Max ? "max" : fmt12(p_);
}

double norm_eval(const NormSpec& n, const Point& p) { return norm_eval(n, p.coords()); }

double norm_eval(const NormSpec& n, std::span<const double> c) {
  if (n.kind() == NormSpec::Kind::Max) {
    double m = 0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
  }
  if (n.p() == 1.0) {
    double s = 0;
    for (double v : c) s += std::abs(v);
    return s;
  }
  if (n.p() == 2.0) {
    double s = 0;
    for (double v : c) s = std::hypot(s, v);
    return s;
  }
  // Scale by the largest magnitude so large p does not overflow.
  double m = 0;
  for (double v : c) m = std::max(m, std::abs(v));
  if (m == 0) return 0;
  double s = 0;
  for (double v : c) s += std::pow(std::abs(v) / m, n.p());
  return m * std::pow(s, 1.0 / n.p());
}

bool is_strictly_convex(const NormSpec& n) {
  return n.kind() == NormSpec::Kind::PNorm && n.p() > 1.0;
}

ClosedBall::ClosedBall(Point c, double r, NormSpec n)
    : center(std::move(c)), radius(r), norm(n) {
  if (!(r >= 0) || !std::isfinite(r))
    throw InputError("ball radius must be finite and >= 0");
}

bool ball_contains(const ClosedBall& b, const Point& p) {
  if (p.dim() != b.center.dim())
    throw InputError("dimension mismatch: ball in R^" +
                     std::to_string(b.center.dim()) + ", point in R^" +
                     std::to_string(p.dim()));
  return norm_eval(b.norm, p - b.center) <= b.radius + kTolerance;
}

Interval::Interval(double lo, double hi) : bounds_(Bounds{lo, hi}) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    throw InputError("interval requires finite lo <= hi");
}

double Interval::lo() const {
  if (!bounds_) throw AnalysisError("empty interval has no endpoints");
  return bounds_->lo;
}

double Interval::hi() const {
  if (!bounds_) throw AnalysisError("empty interval has no endpoints");
  return bounds_->hi;
}

bool Interval::contains(double v, double tol) const {
  return bounds_ && v >= bounds_->lo - tol && v <= bounds_->hi + tol;
}

bool Interval::subset_of(const Interval& o, double tol) const {
  if (is_empty()) return true;
  if (o.is_empty()) return false;
  return bounds_->lo >= o.bounds_->lo - tol && bounds_->hi <= o.bounds_->hi + tol;
}

bool Interval::approx_equal(const Interval& o, double tol) const {
  if (is_empty() || o.is_empty()) return is_empty() == o.is_empty();
  return std::abs(bounds_->lo - o.bounds_->lo) <= tol &&
         std::abs(bounds_->hi - o.bounds_->hi) <= tol;
}

std::string Interval::to_string() const {
  if (!bounds_) return "empty";
  return "[" + fmt12(bounds_->lo) + ", " + fmt12(bounds_->hi) + "]";
}

double interval_diameter(const Interval& i) {
  return i.is_empty() ? 0.0 : i.hi() - i.lo();
}

double hausdorff_distance(std::span<const double> points, const Interval& i) {
  if (points.empty() && i.is_empty()) return 0.0;
  if (points.empty() || i.is_empty())
    return std::numeric_limits<double>::infinity();
  double out = 0;
  for (double p : points) {
    if (p < i.lo()) out = std::max(out, i.lo() - p);
    if (p > i.hi()) out = std::max(out, p - i.hi());
  }
  // Farthest interval point from the set: an endpoint or the middle of the
  // widest gap between consecutive points.
  std::vector<double> s(points.begin(), points.end());
  std::sort(s.begin(), s.end());
  auto dist_to_set = [&](double v) {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    double d = std::numeric_limits<double>::infinity();
    if (it != s.end()) d = std::min(d, *it - v);
    if (it != s.begin()) d = std::min(d, v - *(it - 1));
    return d;
  };
  double in = std::max(dist_to_set(i.lo()), dist_to_set(i.hi()));
  for (size_t k = 1; k < s.size(); ++k) {
    double a = std::max(s[k - 1], i.lo()), b = std::min(s[k], i.hi());
    if (a < b)
      in = std::max(in, dist_to_set(std::clamp(0.5 * (s[k - 1] + s[k]), a, b)));
  }
  return std::max(in, out);
}

}  // namespace roughlim
