#include "alt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alt/errors.hpp"

namespace alt {

bool Point::all_finite() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); });
}

Point lerp(const Point& a, const Point& b, double t) {
  if (a.size() != b.size()) throw DimensionMismatch("lerp: dimension mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
  return Point(std::move(out));
}

Point midpoint(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw DimensionMismatch("midpoint: dimension mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  return Point(std::move(out));
}

bool strictly_dominates(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw DimensionMismatch("strictly_dominates: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > b[i])) return false;
  }
  return true;
}

double max_abs_distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw DimensionMismatch("max_abs_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ')';
  return os.str();
}

BoxDomain::BoxDomain(const Point& lower, const Point& upper) {
  if (lower.size() != upper.size()) throw DimensionMismatch("BoxDomain: corner dimensions differ");
  if (lower.size() == 0) throw PreconditionError("BoxDomain: dimension must be at least 1");
  faces_.reserve(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) faces_.push_back({lower[i], upper[i], false, false});
  *this = BoxDomain(faces_);
}

BoxDomain::BoxDomain(std::vector<Interval> faces) : faces_(std::move(faces)) {
  if (faces_.empty()) throw PreconditionError("BoxDomain: dimension must be at least 1");
  for (const auto& f : faces_) {
    if (!std::isfinite(f.lo) || !std::isfinite(f.hi) || !(f.lo < f.hi)) {
      throw PreconditionError("BoxDomain: require finite lower < upper on every face");
    }
  }
}

BoxDomain BoxDomain::cube(std::size_t n, double lo, double hi) {
  return BoxDomain(Point::filled(n, lo), Point::filled(n, hi));
}

Point BoxDomain::lower() const {
  std::vector<double> v;
  for (const auto& f : faces_) v.push_back(f.lo);
  return Point(std::move(v));
}

Point BoxDomain::upper() const {
  std::vector<double> v;
  for (const auto& f : faces_) v.push_back(f.hi);
  return Point(std::move(v));
}

double BoxDomain::max_extent() const {
  double e = 0.0;
  for (std::size_t i = 0; i < faces_.size(); ++i) e = std::max(e, extent(i));
  return e;
}

double BoxDomain::diagonal_length() const {
  double s = 0.0;
  for (std::size_t i = 0; i < faces_.size(); ++i) s += extent(i) * extent(i);
  return std::sqrt(s);
}

bool BoxDomain::contains(const Point& p) const {
  if (p.size() != faces_.size()) return false;
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const auto& f = faces_[i];
    const double v = p[i];
    if (!std::isfinite(v)) return false;
    if (f.lo_open ? !(v > f.lo) : !(v >= f.lo)) return false;
    if (f.hi_open ? !(v < f.hi) : !(v <= f.hi)) return false;
  }
  return true;
}

bool BoxDomain::contains(const BoxDomain& other) const {
  if (other.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const auto& f = faces_[i];
    const auto& g = other.faces_[i];
    if (g.lo < f.lo || (g.lo == f.lo && f.lo_open && !g.lo_open)) return false;
    if (g.hi > f.hi || (g.hi == f.hi && f.hi_open && !g.hi_open)) return false;
  }
  return true;
}

BoxDomain BoxDomain::inset(double fraction) const {
  if (!(fraction >= 0.0 && fraction < 0.5)) throw PreconditionError("BoxDomain::inset: fraction must be in [0, 0.5)");
  std::vector<Interval> faces = faces_;
  for (auto& f : faces) {
    const double d = fraction * (f.hi - f.lo);
    f.lo += d;
    f.hi -= d;
    if (fraction > 0.0) f.lo_open = f.hi_open = false;
  }
  return BoxDomain(std::move(faces));
}

Point BoxDomain::clamp(const Point& p) const {
  if (p.size() != faces_.size()) throw DimensionMismatch("BoxDomain::clamp: dimension mismatch");
  std::vector<double> v(p.begin(), p.end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], faces_[i].lo, faces_[i].hi);
  return Point(std::move(v));
}

double BoxDomain::diagonal_scale_min() const {
  double c = faces_.front().lo;
  for (const auto& f : faces_) c = std::max(c, f.lo);
  return c;
}

double BoxDomain::diagonal_scale_max() const {
  double c = faces_.front().hi;
  for (const auto& f : faces_) c = std::min(c, f.hi);
  return c;
}

Point BoxDomain::uniform(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(faces_.size());
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const auto& f = faces_[i];
    double x;
    do {
      x = f.lo + unit(rng) * (f.hi - f.lo);
    } while ((f.lo_open && x <= f.lo) || (f.hi_open && x >= f.hi) || x > f.hi);
    v[i] = x;
  }
  return Point(std::move(v));
}

Segment::Segment(Point p, Point q) : p_(std::move(p)), q_(std::move(q)) {
  if (p_.size() != q_.size()) throw DimensionMismatch("Segment: endpoint dimensions differ");
}

double Segment::project(const Point& x) const {
  if (x.size() != p_.size()) throw DimensionMismatch("Segment::project: dimension mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = q_[i] - p_[i];
    num += (x[i] - p_[i]) * d;
    den += d * d;
  }
  return den > 0.0 ? num / den : 0.0;
}

double Segment::length() const {
  double s = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) s += (q_[i] - p_[i]) * (q_[i] - p_[i]);
  return std::sqrt(s);
}

Segment main_diagonal(const BoxDomain& domain) {
  std::vector<double> lo;
  std::vector<double> hi;
  for (const auto& f : domain.faces()) {
    const double pad = 1e-9 * (f.hi - f.lo);
    lo.push_back(f.lo_open ? f.lo + pad : f.lo);
    hi.push_back(f.hi_open ? f.hi - pad : f.hi);
  }
  return Segment(Point(std::move(lo)), Point(std::move(hi)));
}

}  // namespace alt
