#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gmaps {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
};

struct Rect {
  Point min;
  Point max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double diagonal() const { return std::hypot(width(), height()); }
  bool contains(Point p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  // True if p lies on one of the four sides.
  bool on_boundary(Point p) const {
    return contains(p) &&
           (p.x == min.x || p.x == max.x || p.y == min.y || p.y == max.y);
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Segment {
  Point a;
  Point b;

  double length() const { return std::hypot(b.x - a.x, b.y - a.y); }
};

using Polyline = std::vector<Point>;

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double dist_e(Point p, Point q);
double dist_m(Point p, Point q);

// Cross product of (b - a) and (c - a).
double orient(Point a, Point b, Point c);

// Unique common point of two segments, or nullopt when they are disjoint.
// Throws GeometryError when the segments overlap along a collinear stretch of
// positive length, or when either segment is degenerate.
std::optional<Point> seg_intersect(const Segment& s1, const Segment& s2);

double point_seg_dist(Point p, const Segment& s);

// Minimum distance between two segments (zero if they touch or cross).
double seg_seg_dist(const Segment& s1, const Segment& s2);

// Interior angle in degrees between rays v->a and v->b, in [0, 180].
double angle_at(Point v, Point a, Point b);

// Weiszfeld iteration started at the centroid. An iterate that comes within
// eps of an input point snaps to that point.
Point geometric_median(std::span<const Point> pts, double eps = 1e-9,
                       int max_iter = 1000);

double sum_of_distances(std::span<const Point> pts, Point q);

double polyline_length(std::span<const Point> pl);

// m points spaced uniformly in normalized arc length; endpoints copied.
Polyline resample(std::span<const Point> pl, int m);

// Normalized arc-length parameter of every vertex of pl (first 0, last 1).
std::vector<double> arc_params(std::span<const Point> pl);

// Samples pl at the given normalized arc-length parameters (ascending, in
// [0, 1]). A parameter equal to one of pl's own vertex parameters returns that
// vertex bit-exactly.
Polyline sample_at(std::span<const Point> pl, std::span<const double> params);

Rect bounding_rect(std::span<const Point> pts);

}  // namespace gmaps
