#include "gmaps/mesh.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "gmaps/error.h"

namespace gmaps {

const char* to_string(VertexKind k) {
  switch (k) {
    case VertexKind::kNode:
      return "node";
    case VertexKind::kJunction:
      return "junction";
    case VertexKind::kBoundary:
      return "boundary";
  }
  return "?";
}

std::uint64_t Mesh::key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

int Mesh::add_vertex(const Vertex& v) {
  const int id = static_cast<int>(vertices_.size());
  vertices_.push_back(v);
  vertex_alive_.push_back(true);
  incident_.emplace_back();
  ++live_vertices_;
  if (v.kind == VertexKind::kNode) node_vertex_[v.node] = id;
  return id;
}

int Mesh::add_rail(int a, int b) {
  if (a == b) throw MeshError("add_rail: loop rail");
  if (!vertex_alive(a) || !vertex_alive(b)) throw MeshError("add_rail: dead endpoint");
  if (auto r = find_rail(a, b)) return *r;
  const int id = static_cast<int>(rails_.size());
  rails_.push_back(Rail{a, b, dist_e(vertex(a).pos, vertex(b).pos)});
  rail_alive_.push_back(true);
  rail_index_.emplace(key(a, b), id);
  incident_[static_cast<size_t>(a)].push_back(id);
  incident_[static_cast<size_t>(b)].push_back(id);
  ++live_rails_;
  return id;
}

void Mesh::remove_rail(int r) {
  if (!rail_alive(r)) return;
  const Rail& rl = rail(r);
  for (int v : {rl.a, rl.b}) {
    auto& inc = incident_[static_cast<size_t>(v)];
    inc.erase(std::remove(inc.begin(), inc.end(), r), inc.end());
  }
  rail_index_.erase(key(rl.a, rl.b));
  rail_alive_[static_cast<size_t>(r)] = false;
  --live_rails_;
}

void Mesh::remove_vertex(int v) {
  if (!vertex_alive(v)) return;
  if (!incident(v).empty()) throw MeshError("remove_vertex: vertex still has rails");
  vertex_alive_[static_cast<size_t>(v)] = false;
  const Vertex& vx = vertex(v);
  if (vx.kind == VertexKind::kNode) node_vertex_.erase(vx.node);
  --live_vertices_;
}

void Mesh::demote_node(int v) {
  Vertex& vx = vertices_[static_cast<size_t>(v)];
  if (vx.kind != VertexKind::kNode) return;
  node_vertex_.erase(vx.node);
  vx.kind = VertexKind::kJunction;
  vx.node = -1;
}

void Mesh::move_vertex(int v, Point p) {
  vertices_[static_cast<size_t>(v)].pos = p;
  for (int r : incident(v)) {
    Rail& rl = rails_[static_cast<size_t>(r)];
    rl.length = dist_e(vertex(rl.a).pos, vertex(rl.b).pos);
  }
}

std::optional<int> Mesh::find_rail(int a, int b) const {
  auto it = rail_index_.find(key(a, b));
  if (it == rail_index_.end()) return std::nullopt;
  return it->second;
}

int Mesh::other_end(int r, int v) const {
  const Rail& rl = rail(r);
  return rl.a == v ? rl.b : rl.a;
}

std::vector<int> Mesh::vertex_ids() const {
  std::vector<int> ids;
  ids.reserve(static_cast<size_t>(live_vertices_));
  for (int v = 0; v < vertex_capacity(); ++v) {
    if (vertex_alive(v)) ids.push_back(v);
  }
  return ids;
}

std::vector<int> Mesh::rail_ids() const {
  std::vector<int> ids;
  ids.reserve(static_cast<size_t>(live_rails_));
  for (int r = 0; r < rail_capacity(); ++r) {
    if (rail_alive(r)) ids.push_back(r);
  }
  return ids;
}

int Mesh::node_vertex(int node) const {
  auto it = node_vertex_.find(node);
  return it == node_vertex_.end() ? -1 : it->second;
}

int Mesh::node_count() const { return static_cast<int>(node_vertex_.size()); }

int Mesh::junction_count() const { return live_vertices_ - node_count(); }

double Mesh::total_length() const {
  double s = 0.0;
  for (int r = 0; r < rail_capacity(); ++r) {
    if (rail_alive(r)) s += rail(r).length;
  }
  return s;
}

int straight_run_count(const Mesh& m) {
  int continuations = 0;
  for (int v : m.vertex_ids()) {
    const auto& inc = m.incident(v);
    std::vector<bool> used(inc.size(), false);
    const Point p = m.vertex(v).pos;
    for (size_t i = 0; i < inc.size(); ++i) {
      if (used[i]) continue;
      const Point a = m.vertex(m.other_end(inc[i], v)).pos - p;
      for (size_t j = i + 1; j < inc.size(); ++j) {
        if (used[j]) continue;
        const Point b = m.vertex(m.other_end(inc[j], v)).pos - p;
        const double cr = a.x * b.y - a.y * b.x;
        const double dt = a.x * b.x + a.y * b.y;
        if (cr == 0.0 && dt < 0.0) {
          used[i] = used[j] = true;
          ++continuations;
          break;
        }
      }
    }
  }
  return m.rail_count() - continuations;
}

std::vector<PlanarityIssue> planarity_issues(const Mesh& m) {
  std::vector<PlanarityIssue> issues;
  const std::vector<int> rails = m.rail_ids();
  const std::vector<int> verts = m.vertex_ids();

  // Bounding boxes sorted by min x let the pair scan stop early.
  struct Box {
    double x0, x1, y0, y1;
    int r;
  };
  std::vector<Box> boxes;
  boxes.reserve(rails.size());
  for (int r : rails) {
    const Segment s = m.segment(r);
    boxes.push_back({std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x),
                     std::min(s.a.y, s.b.y), std::max(s.a.y, s.b.y), r});
  }
  std::sort(boxes.begin(), boxes.end(),
            [](const Box& a, const Box& b) { return a.x0 < b.x0 || (a.x0 == b.x0 && a.r < b.r); });

  for (size_t i = 0; i < boxes.size(); ++i) {
    const Rail& ri = m.rail(boxes[i].r);
    const Segment si = m.segment(boxes[i].r);
    for (size_t j = i + 1; j < boxes.size() && boxes[j].x0 <= boxes[i].x1; ++j) {
      if (boxes[j].y0 > boxes[i].y1 || boxes[j].y1 < boxes[i].y0) continue;
      const Rail& rj = m.rail(boxes[j].r);
      const Segment sj = m.segment(boxes[j].r);
      const bool share = ri.a == rj.a || ri.a == rj.b || ri.b == rj.a || ri.b == rj.b;
      std::optional<Point> hit;
      bool overlap = false;
      try {
        hit = seg_intersect(si, sj);
      } catch (const GeometryError&) {
        overlap = true;
      }
      if (overlap) {
        issues.push_back({boxes[i].r, boxes[j].r, -1});
        continue;
      }
      if (!hit) continue;
      if (share) {
        int shared = (ri.a == rj.a || ri.a == rj.b) ? ri.a : ri.b;
        if (*hit == m.vertex(shared).pos) continue;
      }
      issues.push_back({boxes[i].r, boxes[j].r, -1});
    }
  }

  for (const Box& bx : boxes) {
    const Rail& rl = m.rail(bx.r);
    const Segment s = m.segment(bx.r);
    for (int v : verts) {
      if (v == rl.a || v == rl.b) continue;
      const Point p = m.vertex(v).pos;
      if (p.x < bx.x0 || p.x > bx.x1 || p.y < bx.y0 || p.y > bx.y1) continue;
      if (orient(s.a, s.b, p) == 0.0) issues.push_back({bx.r, -1, v});
    }
  }
  return issues;
}

std::vector<double> shortest_distances(const Mesh& m, int source,
                                       const std::vector<char>* banned) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<size_t>(m.vertex_capacity()), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<size_t>(source)] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[static_cast<size_t>(v)]) continue;
    for (int r : m.incident(v)) {
      const int w = m.other_end(r, v);
      if (banned && (*banned)[static_cast<size_t>(w)]) continue;
      const double nd = d + m.rail(r).length;
      if (nd < dist[static_cast<size_t>(w)]) {
        dist[static_cast<size_t>(w)] = nd;
        pq.emplace(nd, w);
      }
    }
  }
  return dist;
}

}  // namespace gmaps
