#pragma once

#include <cstddef>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace alt {

// A commodity bundle in R^n.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  // n copies of `value` (b*e for the unit diagonal e).
  static Point filled(std::size_t n, double value) { return Point(std::vector<double>(n, value)); }

  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool all_finite() const;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

// (1-t) a + t b
Point lerp(const Point& a, const Point& b, double t);
Point midpoint(const Point& a, const Point& b);
// a >> b: every coordinate strictly larger.
bool strictly_dominates(const Point& a, const Point& b);
double max_abs_distance(const Point& a, const Point& b);
std::string to_string(const Point& p);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_open = false;
  bool hi_open = false;
};

// Product of intervals; convex by construction.
class BoxDomain {
 public:
  BoxDomain() = default;
  BoxDomain(const Point& lower, const Point& upper);
  explicit BoxDomain(std::vector<Interval> faces);

  // [lo, hi]^n
  static BoxDomain cube(std::size_t n, double lo, double hi);

  std::size_t dimension() const { return faces_.size(); }
  const std::vector<Interval>& faces() const { return faces_; }
  Point lower() const;
  Point upper() const;
  double extent(std::size_t i) const { return faces_[i].hi - faces_[i].lo; }
  double max_extent() const;
  double diagonal_length() const;

  bool contains(const Point& p) const;
  // True when every point of `other` is a point of this box.
  bool contains(const BoxDomain& other) const;
  // Shrinks each face inward by `fraction` of its extent.
  BoxDomain inset(double fraction) const;
  Point clamp(const Point& p) const;

  // Range of c with c*e inside the box.
  double diagonal_scale_min() const;
  double diagonal_scale_max() const;

  Point uniform(std::mt19937_64& rng) const;

 private:
  std::vector<Interval> faces_;
};

// Straight path t -> (1-t) p + t q, t in [0, 1].
class Segment {
 public:
  Segment() = default;
  Segment(Point p, Point q);

  const Point& start() const { return p_; }
  const Point& end() const { return q_; }
  Point at(double t) const { return lerp(p_, q_, t); }
  // Parameter of the orthogonal projection of x onto the line through p, q.
  double project(const Point& x) const;
  double length() const;

 private:
  Point p_;
  Point q_;
};

// From the lower corner to the upper corner of the box. Open faces are pulled in
// by a relative 1e-9 of the extent so both ends are members.
Segment main_diagonal(const BoxDomain& domain);

}  // namespace alt
