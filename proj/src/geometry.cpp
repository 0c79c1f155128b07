#include "gmaps/geometry.h"

#include <algorithm>
#include <limits>

#include "gmaps/error.h"

namespace gmaps {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

int sign(double v) { return (v > 0) - (v < 0); }

bool degenerate(const Segment& s) { return s.a == s.b; }

}  // namespace

double dist_e(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

double dist_m(Point p, Point q) { return std::abs(p.x - q.x) + std::abs(p.y - q.y); }

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

std::optional<Point> seg_intersect(const Segment& s1, const Segment& s2) {
  if (degenerate(s1) || degenerate(s2)) {
    throw GeometryError("seg_intersect: degenerate segment");
  }
  const int o1 = sign(orient(s1.a, s1.b, s2.a));
  const int o2 = sign(orient(s1.a, s1.b, s2.b));
  const int o3 = sign(orient(s2.a, s2.b, s1.a));
  const int o4 = sign(orient(s2.a, s2.b, s1.b));

  if (o1 == 0 && o2 == 0) {
    // Collinear: intersect the parameter intervals along s1.
    const Point d = s1.b - s1.a;
    const double len2 = dot(d, d);
    double t0 = dot(s2.a - s1.a, d) / len2;
    double t1 = dot(s2.b - s1.a, d) / len2;
    Point p0 = s2.a;
    Point p1 = s2.b;
    if (t0 > t1) {
      std::swap(t0, t1);
      std::swap(p0, p1);
    }
    const double lo = std::max(0.0, t0);
    const double hi = std::min(1.0, t1);
    if (lo > hi) return std::nullopt;
    if (lo == hi) {
      // Touching at a single shared endpoint.
      if (lo == 0.0) return s1.a;
      if (lo == 1.0) return s1.b;
      return t0 == lo ? p0 : p1;
    }
    throw GeometryError("seg_intersect: collinear overlap");
  }

  if (o1 * o2 > 0 || o3 * o4 > 0) return std::nullopt;

  // Touching cases return the exact endpoint.
  if (o1 == 0) return s2.a;
  if (o2 == 0) return s2.b;
  if (o3 == 0) return s1.a;
  if (o4 == 0) return s1.b;

  const Point d1 = s1.b - s1.a;
  const Point d2 = s2.b - s2.a;
  const double t = cross(s2.a - s1.a, d2) / cross(d1, d2);
  return s1.a + t * d1;
}

double point_seg_dist(Point p, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return dist_e(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  if (t == 0.0) return dist_e(p, s.a);
  if (t == 1.0) return dist_e(p, s.b);
  return std::abs(cross(d, p - s.a)) / std::sqrt(len2);
}

double seg_seg_dist(const Segment& s1, const Segment& s2) {
  if (!degenerate(s1) && !degenerate(s2)) {
    try {
      if (seg_intersect(s1, s2)) return 0.0;
    } catch (const GeometryError&) {
      return 0.0;
    }
  }
  return std::min({point_seg_dist(s1.a, s2), point_seg_dist(s1.b, s2),
                   point_seg_dist(s2.a, s1), point_seg_dist(s2.b, s1)});
}

double angle_at(Point v, Point a, Point b) {
  if (a == v || b == v) throw GeometryError("angle_at: arm coincides with apex");
  const Point u = a - v;
  const Point w = b - v;
  return std::atan2(std::abs(cross(u, w)), dot(u, w)) * kRadToDeg;
}

double sum_of_distances(std::span<const Point> pts, Point q) {
  double s = 0.0;
  for (const Point& p : pts) s += dist_e(p, q);
  return s;
}

Point geometric_median(std::span<const Point> pts, double eps, int max_iter) {
  if (pts.empty()) throw GeometryError("geometric_median: empty input");
  Point x{0.0, 0.0};
  for (const Point& p : pts) x = x + p;
  x = (1.0 / static_cast<double>(pts.size())) * x;

  for (int it = 0; it < max_iter; ++it) {
    Point num{0.0, 0.0};
    double den = 0.0;
    for (const Point& p : pts) {
      const double d = dist_e(p, x);
      if (d < eps) return p;
      num = num + (1.0 / d) * p;
      den += 1.0 / d;
    }
    const Point next = (1.0 / den) * num;
    const double step = dist_e(next, x);
    x = next;
    if (step < eps) break;
  }
  for (const Point& p : pts) {
    if (dist_e(p, x) < eps) return p;
  }
  return x;
}

double polyline_length(std::span<const Point> pl) {
  double len = 0.0;
  for (size_t i = 1; i < pl.size(); ++i) len += dist_e(pl[i - 1], pl[i]);
  return len;
}

std::vector<double> arc_params(std::span<const Point> pl) {
  std::vector<double> t(pl.size(), 0.0);
  if (pl.size() < 2) return t;
  double acc = 0.0;
  for (size_t i = 1; i < pl.size(); ++i) {
    acc += dist_e(pl[i - 1], pl[i]);
    t[i] = acc;
  }
  for (double& v : t) v /= acc;
  t.back() = 1.0;
  return t;
}

Polyline sample_at(std::span<const Point> pl, std::span<const double> params) {
  if (pl.size() < 2) throw GeometryError("sample_at: polyline needs two points");
  const std::vector<double> vt = arc_params(pl);
  Polyline out;
  out.reserve(params.size());
  size_t seg = 0;
  for (double t : params) {
    while (seg + 2 < vt.size() && vt[seg + 1] < t) ++seg;
    if (t == vt[seg]) {
      out.push_back(pl[seg]);
    } else if (t == vt[seg + 1]) {
      out.push_back(pl[seg + 1]);
    } else {
      const double span = vt[seg + 1] - vt[seg];
      const double f = std::clamp((t - vt[seg]) / span, 0.0, 1.0);
      out.push_back(pl[seg] + f * (pl[seg + 1] - pl[seg]));
    }
  }
  return out;
}

Polyline resample(std::span<const Point> pl, int m) {
  if (m < 2) throw GeometryError("resample: need at least two output points");
  if (pl.size() < 2) throw GeometryError("resample: polyline needs two points");
  std::vector<double> params(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) params[static_cast<size_t>(k)] = static_cast<double>(k) / (m - 1);
  params.back() = 1.0;
  Polyline out = sample_at(pl, params);
  out.front() = pl.front();
  out.back() = pl.back();
  return out;
}

Rect bounding_rect(std::span<const Point> pts) {
  if (pts.empty()) throw GeometryError("bounding_rect: empty point set");
  Rect r{pts[0], pts[0]};
  for (const Point& p : pts) {
    r.min.x = std::min(r.min.x, p.x);
    r.min.y = std::min(r.min.y, p.y);
    r.max.x = std::max(r.max.x, p.x);
    r.max.y = std::max(r.max.y, p.y);
  }
  return r;
}

}  // namespace gmaps
