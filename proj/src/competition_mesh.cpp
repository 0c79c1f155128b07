#include "gmaps/competition_mesh.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <tuple>

#include "gmaps/error.h"

namespace gmaps {

TieRule parse_tie_rule(const std::string& s) {
  if (s == "horizontal") return TieRule::kHorizontalWins;
  if (s == "vertical") return TieRule::kVerticalWins;
  if (s == "index") return TieRule::kLowerIndexWins;
  throw ValidationError("unknown tie rule '" + s + "'");
}

const char* to_string(TieRule t) {
  switch (t) {
    case TieRule::kHorizontalWins:
      return "horizontal";
    case TieRule::kVerticalWins:
      return "vertical";
    case TieRule::kLowerIndexWins:
      return "index";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Dir : int { kRight = 0, kUp = 1, kLeft = 2, kDown = 3 };

bool is_horizontal(int d) { return d == kRight || d == kLeft; }
double dir_sign(int d) { return (d == kRight || d == kUp) ? 1.0 : -1.0; }

double boundary_limit(Point s, int d, const Rect& box) {
  switch (d) {
    case kRight:
      return box.max.x - s.x;
    case kUp:
      return box.max.y - s.y;
    case kLeft:
      return s.x - box.min.x;
    default:
      return s.y - box.min.y;
  }
}

Point boundary_tip(Point s, int d, const Rect& box) {
  switch (d) {
    case kRight:
      return {box.max.x, s.y};
    case kUp:
      return {s.x, box.max.y};
    case kLeft:
      return {box.min.x, s.y};
    default:
      return {s.x, box.min.y};
  }
}

void require_distinct(std::span<const Point> pts) {
  std::set<std::pair<double, double>> seen;
  for (const Point& p : pts) {
    if (!is_finite(p)) throw GeometryError("non-finite point");
    if (!seen.emplace(p.x, p.y).second) throw GeometryError("coincident points");
  }
}

struct RaySeg {
  Point src;
  Point tip;
};

// Turns axis-parallel ray segments into a mesh: every endpoint becomes a
// vertex and each segment is split at the vertices lying on it.
Mesh assemble(std::span<const Point> points, const std::vector<RaySeg>& segs, const Rect& box) {
  Mesh m(box);
  std::map<std::pair<double, double>, int> where;
  for (size_t i = 0; i < points.size(); ++i) {
    Vertex v;
    v.pos = points[i];
    v.kind = VertexKind::kNode;
    v.node = static_cast<int>(i);
    where.emplace(std::make_pair(points[i].x, points[i].y), m.add_vertex(v));
  }
  for (const RaySeg& s : segs) {
    auto k = std::make_pair(s.tip.x, s.tip.y);
    if (!where.count(k)) {
      Vertex v;
      v.pos = s.tip;
      where.emplace(k, m.add_vertex(v));
    }
  }
  std::map<double, std::vector<std::pair<double, int>>> rows;
  std::map<double, std::vector<std::pair<double, int>>> cols;
  for (const auto& [k, id] : where) {
    rows[k.second].emplace_back(k.first, id);
    cols[k.first].emplace_back(k.second, id);
  }
  for (auto& [_, v] : rows) std::sort(v.begin(), v.end());
  for (auto& [_, v] : cols) std::sort(v.begin(), v.end());

  for (const RaySeg& s : segs) {
    const bool horiz = s.src.y == s.tip.y;
    const auto& line = horiz ? rows.at(s.src.y) : cols.at(s.src.x);
    const double lo = horiz ? std::min(s.src.x, s.tip.x) : std::min(s.src.y, s.tip.y);
    const double hi = horiz ? std::max(s.src.x, s.tip.x) : std::max(s.src.y, s.tip.y);
    auto it = std::lower_bound(line.begin(), line.end(), std::make_pair(lo, -1));
    int prev = -1;
    for (; it != line.end() && it->first <= hi; ++it) {
      if (prev >= 0) m.add_rail(prev, it->second);
      prev = it->second;
    }
  }

  for (int v : m.vertex_ids()) {
    Vertex& vx = m.mutable_vertex(v);
    if (vx.kind == VertexKind::kNode) continue;
    if (m.degree(v) >= 2) {
      vx.kind = VertexKind::kJunction;
    } else if (box.on_boundary(vx.pos)) {
      vx.kind = VertexKind::kBoundary;
    } else {
      throw MeshError("ray tip dangles inside the bounding rectangle");
    }
  }
  return m;
}

struct SimRay {
  int node;
  int dir;
  Point src;
  double limit;
  bool stopped = false;
  double stop = 0.0;
  Point tip;
};

enum class EventType : int { kBoundary = 0, kNode = 1, kPerp = 2, kHeadOn = 3, kTip = 4 };

struct Event {
  double t;
  int ray;
  EventType type;
  int other;
  Point tip;
  double other_time;  // when the other ray reached the contact point

  bool operator>(const Event& o) const {
    return std::tie(t, ray, type, other) > std::tie(o.t, o.ray, o.type, o.other);
  }
};

bool loses_tie(const SimRay& r, const SimRay& other, TieRule tie) {
  switch (tie) {
    case TieRule::kHorizontalWins:
      return !is_horizontal(r.dir);
    case TieRule::kVerticalWins:
      return is_horizontal(r.dir);
    case TieRule::kLowerIndexWins:
      return r.node > other.node;
  }
  return false;
}

}  // namespace

bool in_general_position(std::span<const Point> pts) {
  auto distinct = [&](auto key) {
    std::vector<double> v;
    v.reserve(pts.size());
    for (const Point& p : pts) v.push_back(key(p));
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  return distinct([](Point p) { return p.x; }) && distinct([](Point p) { return p.y; }) &&
         distinct([](Point p) { return p.x + p.y; }) &&
         distinct([](Point p) { return p.x - p.y; });
}

std::vector<Point> sanitize_general_position(std::span<const Point> pts, std::uint64_t seed) {
  std::vector<Point> out(pts.begin(), pts.end());
  if (pts.size() < 2 || in_general_position(pts)) return out;
  const double amp = 1e-7 * bounding_rect(pts).diagonal();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-amp, amp);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (size_t i = 0; i < pts.size(); ++i) {
      out[i].x = pts[i].x + jitter(rng);
      out[i].y = pts[i].y + jitter(rng);
    }
    if (in_general_position(out)) return out;
  }
  throw GeometryError("sanitize_general_position: could not reach general position");
}

Mesh build_mesh_sim(std::span<const Point> points, TieRule tie) {
  if (points.size() < 2) throw GeometryError("build_mesh_sim: need at least two points");
  require_distinct(points);
  const Rect box = bounding_rect(points);

  std::vector<SimRay> rays;
  for (size_t i = 0; i < points.size(); ++i) {
    for (int d = 0; d < 4; ++d) {
      const double lim = boundary_limit(points[i], d, box);
      if (lim > 0.0) rays.push_back({static_cast<int>(i), d, points[i], lim, false, 0.0, points[i]});
    }
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::map<double, std::vector<int>> hlines;
  std::map<double, std::vector<int>> vlines;
  for (int i = 0; i < static_cast<int>(rays.size()); ++i) {
    const SimRay& r = rays[static_cast<size_t>(i)];
    events.push({r.limit, i, EventType::kBoundary, -1, boundary_tip(r.src, r.dir, box), 0.0});
    (is_horizontal(r.dir) ? hlines[r.src.y] : vlines[r.src.x]).push_back(i);
  }

  // Ray tips running into other points.
  for (int i = 0; i < static_cast<int>(rays.size()); ++i) {
    const SimRay& r = rays[static_cast<size_t>(i)];
    for (size_t k = 0; k < points.size(); ++k) {
      if (static_cast<int>(k) == r.node) continue;
      const Point p = points[k];
      double t = -1.0;
      if (is_horizontal(r.dir) && p.y == r.src.y) t = (p.x - r.src.x) * dir_sign(r.dir);
      if (!is_horizontal(r.dir) && p.x == r.src.x) t = (p.y - r.src.y) * dir_sign(r.dir);
      if (t > 0.0 && t <= r.limit) events.push({t, i, EventType::kNode, static_cast<int>(k), p, 0.0});
    }
  }

  // Perpendicular contacts.
  for (int i = 0; i < static_cast<int>(rays.size()); ++i) {
    const SimRay& h = rays[static_cast<size_t>(i)];
    if (!is_horizontal(h.dir)) continue;
    for (int j = 0; j < static_cast<int>(rays.size()); ++j) {
      const SimRay& v = rays[static_cast<size_t>(j)];
      if (is_horizontal(v.dir)) continue;
      const Point x{v.src.x, h.src.y};
      const double th = (x.x - h.src.x) * dir_sign(h.dir);
      const double tv = (x.y - v.src.y) * dir_sign(v.dir);
      if (th <= 0.0 || tv <= 0.0 || th > h.limit || tv > v.limit) continue;
      if (tv < th || (tv == th && loses_tie(h, v, tie))) {
        events.push({th, i, EventType::kPerp, j, x, tv});
      } else {
        events.push({tv, j, EventType::kPerp, i, x, th});
      }
    }
  }

  // Collinear rays approaching each other.
  auto head_on = [&](const std::map<double, std::vector<int>>& lines, bool horiz) {
    for (const auto& [_, ids] : lines) {
      for (int i : ids) {
        for (int j : ids) {
          const SimRay& a = rays[static_cast<size_t>(i)];
          const SimRay& b = rays[static_cast<size_t>(j)];
          const int fwd = horiz ? kRight : kUp;
          if (a.dir != fwd || b.dir != (fwd + 2)) continue;
          const double sa = horiz ? a.src.x : a.src.y;
          const double sb = horiz ? b.src.x : b.src.y;
          if (sb <= sa) continue;
          const double half = (sb - sa) / 2.0;
          const double mid = (sa + sb) / 2.0;
          const Point tip = horiz ? Point{mid, a.src.y} : Point{a.src.x, mid};
          events.push({half, i, EventType::kHeadOn, j, tip, half});
          events.push({half, j, EventType::kHeadOn, i, tip, half});
        }
      }
    }
  };
  head_on(hlines, true);
  head_on(vlines, false);

  while (!events.empty()) {
    const Event e = events.top();
    events.pop();
    SimRay& r = rays[static_cast<size_t>(e.ray)];
    if (r.stopped) continue;

    bool valid = true;
    if (e.type == EventType::kPerp || e.type == EventType::kHeadOn) {
      const SimRay& o = rays[static_cast<size_t>(e.other)];
      valid = !o.stopped || o.stop >= e.other_time;
    }
    if (!valid) continue;

    // A ray is never stopped by one that reached the contact point later.
    if (e.other_time > e.t) throw MeshError("build_mesh_sim: ray dominance violated");

    r.stopped = true;
    r.stop = e.t;
    r.tip = e.tip;

    // Opposite rays on the same line now run into this fixed tip.
    const auto& line = is_horizontal(r.dir) ? hlines[r.src.y] : vlines[r.src.x];
    const double tip_c = is_horizontal(r.dir) ? r.tip.x : r.tip.y;
    for (int j : line) {
      SimRay& o = rays[static_cast<size_t>(j)];
      if (o.stopped || o.dir != (r.dir + 2) % 4) continue;
      const double src_c = is_horizontal(o.dir) ? o.src.x : o.src.y;
      const double t = (tip_c - src_c) * dir_sign(o.dir);
      if (t > 0.0 && t <= o.limit) events.push({t, j, EventType::kTip, e.ray, r.tip, r.stop});
    }
  }

  std::vector<RaySeg> segs;
  for (const SimRay& r : rays) {
    if (!r.stopped) throw MeshError("build_mesh_sim: ray never stopped");
    if (r.stop > 0.0) segs.push_back({r.src, r.tip});
  }
  return assemble(points, segs, box);
}

int cone_index(Point w, Point p) {
  const double dx = p.x - w.x;
  const double dy = p.y - w.y;
  if (dx == 0.0 && dy == 0.0) throw GeometryError("cone_index: coincident points");
  if (dy >= 0.0 && dx > 0.0) return dy < dx ? 0 : 1;
  if (dx <= 0.0 && dy > 0.0) return dy > -dx ? 2 : 3;
  if (dy <= 0.0 && dx < 0.0) return -dy < -dx ? 4 : 5;
  return dx < -dy ? 6 : 7;
}

ConeNeighborTable cone_neighbors(std::span<const Point> points) {
  ConeNeighborTable t;
  t.nearest.assign(points.size(), {});
  for (size_t i = 0; i < points.size(); ++i) {
    std::array<double, 8> best;
    best.fill(kInf);
    for (size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      const int c = cone_index(points[i], points[j]);
      const double d = dist_m(points[i], points[j]);
      if (d < best[static_cast<size_t>(c)]) {
        best[static_cast<size_t>(c)] = d;
        t.nearest[i][static_cast<size_t>(c)] = static_cast<int>(j);
      }
    }
  }
  return t;
}

double delta_y(std::span<const Point> points) {
  std::vector<double> ys;
  ys.reserve(points.size());
  for (const Point& p : points) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());
  double best = kInf;
  for (size_t i = 1; i < ys.size(); ++i) {
    if (ys[i] != ys[i - 1]) best = std::min(best, ys[i] - ys[i - 1]);
  }
  if (best == kInf) throw GeometryError("delta_y: all y coordinates are equal");
  return best;
}

Mesh build_mesh_fast(std::span<const Point> points) {
  if (points.size() < 2) throw GeometryError("build_mesh_fast: need at least two points");
  require_distinct(points);
  if (!in_general_position(points)) {
    throw GeometryError("build_mesh_fast: points are not in general position");
  }
  const Rect box = bounding_rect(points);
  const size_t n = points.size();
  const ConeNeighborTable cones = cone_neighbors(points);
  const double dy = delta_y(points);

  // Phases 1-2: a vertical ray stops level with the cone neighbour whose
  // horizontal ray reaches the ray's line first, choosing the one closest to
  // the horizontal line through the source.
  auto vertical_stop = [&](size_t w, int c1, int c2, double fallback) {
    std::optional<int> pick;
    for (int c : {c1, c2}) {
      const auto cand = cones.nearest[w][static_cast<size_t>(c)];
      if (!cand) continue;
      const Point q = points[static_cast<size_t>(*cand)];
      if (!pick) {
        pick = cand;
        continue;
      }
      const Point b = points[static_cast<size_t>(*pick)];
      const auto key_q = std::make_tuple(std::abs(q.y - points[w].y), dist_m(q, points[w]), *cand);
      const auto key_b = std::make_tuple(std::abs(b.y - points[w].y), dist_m(b, points[w]), *pick);
      if (key_q < key_b) pick = cand;
    }
    return pick ? points[static_cast<size_t>(*pick)].y : fallback;
  };
  std::vector<double> top(n), bottom(n), left(n), right(n);
  for (size_t w = 0; w < n; ++w) {
    top[w] = vertical_stop(w, 1, 2, box.max.y);
    bottom[w] = vertical_stop(w, 5, 6, box.min.y);
  }

  // Phases 3-4: horizontal rays shot against the vertical edges shrunk by
  // dy/3 at both ends plus a +-dy/4 stub at every point.
  struct Interval {
    double lo, hi;
  };
  std::vector<std::vector<Interval>> stubs(n);
  for (size_t w = 0; w < n; ++w) {
    const double y = points[w].y;
    if (top[w] > y) stubs[w].push_back({y + dy / 3.0, top[w] - dy / 3.0});
    if (bottom[w] < y) stubs[w].push_back({bottom[w] + dy / 3.0, y - dy / 3.0});
    stubs[w].push_back({y - dy / 4.0, y + dy / 4.0});
  }
  auto hits = [&](size_t w, double y) {
    return std::any_of(stubs[w].begin(), stubs[w].end(),
                       [y](const Interval& iv) { return iv.lo <= y && y <= iv.hi; });
  };
  std::vector<size_t> by_x(n);
  for (size_t i = 0; i < n; ++i) by_x[i] = i;
  std::sort(by_x.begin(), by_x.end(), [&](size_t a, size_t b) { return points[a].x < points[b].x; });

  std::map<double, size_t> active;
  for (size_t q : by_x) {
    left[q] = box.min.x;
    for (auto it = active.lower_bound(points[q].x); it != active.begin();) {
      --it;
      if (hits(it->second, points[q].y)) {
        left[q] = it->first;
        break;
      }
    }
    active.emplace(points[q].x, q);
  }
  active.clear();
  for (auto qi = by_x.rbegin(); qi != by_x.rend(); ++qi) {
    const size_t q = *qi;
    right[q] = box.max.x;
    for (auto it = active.upper_bound(points[q].x); it != active.end(); ++it) {
      if (hits(it->second, points[q].y)) {
        right[q] = it->first;
        break;
      }
    }
    active.emplace(points[q].x, q);
  }

  // A vertical tip whose stopping neighbour's horizontal ray was itself cut
  // short would dangle; extend it to the next horizontal segment.
  auto covered = [&](size_t k, double x) { return left[k] <= x && x <= right[k]; };
  for (size_t w = 0; w < n; ++w) {
    const double x = points[w].x;
    auto extend = [&](double tip, double sign, double limit) {
      if (tip == limit || tip == points[w].y) return tip;
      for (size_t k = 0; k < n; ++k) {
        if (points[k].y == tip && covered(k, x)) return tip;
      }
      double best = limit;
      for (size_t k = 0; k < n; ++k) {
        const double y = points[k].y;
        if ((y - tip) * sign > 0.0 && (best - y) * sign > 0.0 && covered(k, x)) best = y;
      }
      return best;
    };
    top[w] = extend(top[w], 1.0, box.max.y);
    bottom[w] = extend(bottom[w], -1.0, box.min.y);
  }

  // The extreme points' horizontal rays run along R(P). The shrunk vertical
  // edges never reach it, so stop those rays at the first vertical tip on the
  // boundary that got there before the ray did.
  for (size_t w = 0; w < n; ++w) {
    const double y = points[w].y;
    const bool at_top = y == box.max.y, at_bottom = y == box.min.y;
    if (!at_top && !at_bottom) continue;
    for (size_t k = 0; k < n; ++k) {
      const double tip = at_top ? top[k] : bottom[k];
      if (k == w || tip != y) continue;
      const double arrival = std::abs(y - points[k].y), gap = points[k].x - points[w].x;
      if (gap < 0.0 && arrival < -gap) left[w] = std::max(left[w], points[k].x);
      if (gap > 0.0 && arrival < gap) right[w] = std::min(right[w], points[k].x);
    }
  }

  std::vector<RaySeg> segs;
  for (size_t w = 0; w < n; ++w) {
    const Point p = points[w];
    if (top[w] > p.y) segs.push_back({p, {p.x, top[w]}});
    if (bottom[w] < p.y) segs.push_back({p, {p.x, bottom[w]}});
    if (left[w] < p.x) segs.push_back({p, {left[w], p.y}});
    if (right[w] > p.x) segs.push_back({p, {right[w], p.y}});
  }
  return assemble(points, segs, box);
}

std::vector<int> monotone_path_witness(const Mesh& m, int vertex, int quadrant) {
  if (quadrant < 1 || quadrant > 4) throw ValidationError("quadrant must be 1..4");
  const double sx = (quadrant == 1 || quadrant == 4) ? 1.0 : -1.0;
  const double sy = (quadrant == 1 || quadrant == 2) ? 1.0 : -1.0;
  const Rect& box = m.boundary();
  auto done = [&](int v) {
    const Point p = m.vertex(v).pos;
    return p.x == (sx > 0 ? box.max.x : box.min.x) || p.y == (sy > 0 ? box.max.y : box.min.y);
  };

  std::vector<char> dead(static_cast<size_t>(m.vertex_capacity()), 0);
  std::vector<int> path{vertex};
  std::vector<size_t> cursor{0};
  while (!path.empty()) {
    const int v = path.back();
    if (done(v)) return path;
    const auto& inc = m.incident(v);
    size_t& c = cursor.back();
    bool advanced = false;
    while (c < inc.size()) {
      const int w = m.other_end(inc[c++], v);
      if (dead[static_cast<size_t>(w)]) continue;
      const Point d = m.vertex(w).pos - m.vertex(v).pos;
      if (d.x * sx < 0.0 || d.y * sy < 0.0) continue;
      path.push_back(w);
      cursor.push_back(0);
      advanced = true;
      break;
    }
    if (!advanced) {
      dead[static_cast<size_t>(v)] = 1;
      path.pop_back();
      cursor.pop_back();
    }
  }
  throw MeshError("monotone_path_witness: no monotone path to the boundary");
}

double stretch_factor(const Mesh& m) {
  std::vector<int> nodes;
  for (int v : m.vertex_ids()) {
    if (m.vertex(v).kind == VertexKind::kNode) nodes.push_back(v);
  }
  double worst = 0.0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const std::vector<double> d = shortest_distances(m, nodes[i]);
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      const double graph = d[static_cast<size_t>(nodes[j])];
      if (!std::isfinite(graph)) throw MeshError("stretch_factor: mesh is disconnected");
      worst = std::max(worst, graph / dist_e(m.vertex(nodes[i]).pos, m.vertex(nodes[j]).pos));
    }
  }
  return worst;
}

MeshReport mesh_report(const Mesh& m) {
  MeshReport r;
  r.nodes = m.node_count();
  r.junctions = m.junction_count();
  r.rails = m.rail_count();
  r.straight_runs = straight_run_count(m);
  for (int id : m.rail_ids()) {
    const Segment s = m.segment(id);
    if (s.a.x != s.b.x && s.a.y != s.b.y) r.axis_aligned = false;
  }
  r.planar = planarity_issues(m).empty();
  return r;
}

std::vector<std::array<double, 4>> rail_signature(const Mesh& m) {
  std::vector<std::array<double, 4>> sig;
  for (int id : m.rail_ids()) {
    Segment s = m.segment(id);
    if (std::make_pair(s.b.x, s.b.y) < std::make_pair(s.a.x, s.a.y)) std::swap(s.a, s.b);
    sig.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace gmaps
