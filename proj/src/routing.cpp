#include "gmaps/routing.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "gmaps/error.h"

namespace gmaps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

double direction_deg(Point from, Point to) {
  const double a = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / M_PI;
  return a < 0 ? a + 360.0 : a;
}

// Neighbours of v ordered counter-clockwise by direction, ties by id.
std::vector<int> ccw_neighbors(const Mesh& m, int v) {
  std::vector<std::pair<double, int>> dirs;
  for (int r : m.incident(v)) {
    const int w = m.other_end(r, v);
    dirs.emplace_back(direction_deg(m.vertex(v).pos, m.vertex(w).pos), w);
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<int> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(d.second);
  return out;
}

// Constraint state over a subset of angles and vertex/rail pairs.
struct Profile {
  int count = 0;
  double min_angle = kInf;
  double min_clear = kInf;
};

void add_angles(Point at, std::vector<Point> arms, double alpha, Profile& p) {
  if (arms.size() < 2) return;
  std::vector<double> deg;
  deg.reserve(arms.size());
  for (const Point& a : arms) deg.push_back(direction_deg(at, a));
  std::sort(deg.begin(), deg.end());
  for (size_t i = 0; i < deg.size(); ++i) {
    const double gap = i + 1 < deg.size() ? deg[i + 1] - deg[i] : deg[0] + 360.0 - deg[i];
    p.min_angle = std::min(p.min_angle, gap);
    if (gap < alpha - kTol) ++p.count;
  }
}

std::vector<Point> arms_of(const Mesh& m, int v) {
  std::vector<Point> arms;
  for (int r : m.incident(v)) arms.push_back(m.vertex(m.other_end(r, v)).pos);
  return arms;
}

void add_clear(double d, double beta, Profile& p) {
  p.min_clear = std::min(p.min_clear, d);
  if (d < beta - kTol) ++p.count;
}

bool accept(const Profile& before, const Profile& after, const ModConfig& cfg) {
  return after.count <= before.count &&
         after.min_angle >= std::min(cfg.alpha, before.min_angle) - kTol &&
         after.min_clear >= std::min(cfg.beta, before.min_clear) - kTol;
}

bool point_on_segment(Point p, const Segment& s) {
  if (p.x < std::min(s.a.x, s.b.x) || p.x > std::max(s.a.x, s.b.x)) return false;
  if (p.y < std::min(s.a.y, s.b.y) || p.y > std::max(s.a.y, s.b.y)) return false;
  return orient(s.a, s.b, p) == 0.0;
}

// True if segment a-b (between vertices ea and eb) meets no rail except at a
// shared endpoint and passes through no vertex. Rails in `skip` and vertex
// `skip_vertex` are ignored.
bool segment_is_free(const Mesh& m, int ea, int eb, const std::vector<int>& skip, int skip_vertex) {
  const Segment s{m.vertex(ea).pos, m.vertex(eb).pos};
  if (s.a == s.b) return false;
  const double x0 = std::min(s.a.x, s.b.x), x1 = std::max(s.a.x, s.b.x);
  const double y0 = std::min(s.a.y, s.b.y), y1 = std::max(s.a.y, s.b.y);
  for (int r = 0; r < m.rail_capacity(); ++r) {
    if (!m.rail_alive(r) || std::find(skip.begin(), skip.end(), r) != skip.end()) continue;
    const Rail& rl = m.rail(r);
    if (rl.a == skip_vertex || rl.b == skip_vertex) continue;
    const Segment t = m.segment(r);
    if (std::max(t.a.x, t.b.x) < x0 || std::min(t.a.x, t.b.x) > x1 ||
        std::max(t.a.y, t.b.y) < y0 || std::min(t.a.y, t.b.y) > y1) {
      continue;
    }
    std::optional<Point> hit;
    try {
      hit = seg_intersect(s, t);
    } catch (const GeometryError&) {
      return false;
    }
    if (!hit) continue;
    int shared = -1;
    if (rl.a == ea || rl.a == eb) shared = rl.a;
    if (rl.b == ea || rl.b == eb) shared = rl.b;
    if (shared < 0 || !(*hit == m.vertex(shared).pos)) return false;
  }
  for (int v = 0; v < m.vertex_capacity(); ++v) {
    if (!m.vertex_alive(v) || v == ea || v == eb || v == skip_vertex) continue;
    if (point_on_segment(m.vertex(v).pos, s)) return false;
  }
  return true;
}

// Constraint profile of everything a move of vertex j can change.
Profile move_profile(const Mesh& m, int j, const ModConfig& cfg) {
  Profile p;
  add_angles(m.vertex(j).pos, arms_of(m, j), cfg.alpha, p);
  for (int r : m.incident(j)) {
    const int w = m.other_end(r, j);
    add_angles(m.vertex(w).pos, arms_of(m, w), cfg.alpha, p);
  }
  const Point pj = m.vertex(j).pos;
  for (int r = 0; r < m.rail_capacity(); ++r) {
    if (!m.rail_alive(r)) continue;
    const Rail& rl = m.rail(r);
    if (rl.a == j || rl.b == j) {
      const Segment s = m.segment(r);
      for (int v = 0; v < m.vertex_capacity(); ++v) {
        if (m.vertex_alive(v) && v != rl.a && v != rl.b) {
          add_clear(point_seg_dist(m.vertex(v).pos, s), cfg.beta, p);
        }
      }
    } else {
      add_clear(point_seg_dist(pj, m.segment(r)), cfg.beta, p);
    }
  }
  return p;
}

bool move_is_planar(const Mesh& m, int j) {
  std::vector<int> own(m.incident(j).begin(), m.incident(j).end());
  for (int r : own) {
    const int w = m.other_end(r, j);
    if (!segment_is_free(m, j, w, {r}, -1)) return false;
  }
  const Point pj = m.vertex(j).pos;
  for (int r = 0; r < m.rail_capacity(); ++r) {
    if (!m.rail_alive(r)) continue;
    const Rail& rl = m.rail(r);
    if (rl.a == j || rl.b == j) continue;
    if (point_on_segment(pj, m.segment(r))) return false;
  }
  return true;
}

// Cuts closed loops out of a vertex chain.
void remove_loops(std::vector<int>& chain) {
  std::vector<int> out;
  std::map<int, size_t> pos;
  for (int v : chain) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      for (size_t k = it->second + 1; k < out.size(); ++k) pos.erase(out[k]);
      out.resize(it->second + 1);
    } else {
      pos.emplace(v, out.size());
      out.push_back(v);
    }
  }
  chain = std::move(out);
}

double chain_length(const Mesh& m, const std::vector<int>& chain) {
  double len = 0.0;
  for (size_t i = 1; i < chain.size(); ++i) {
    len += dist_e(m.vertex(chain[i - 1]).pos, m.vertex(chain[i]).pos);
  }
  return len;
}

}  // namespace

bool is_plain_junction(const Vertex& v) {
  return v.kind != VertexKind::kNode && v.owner < 0 && !v.port;
}

ModConfig default_mod_config(std::span<const Point> nodes) {
  ModConfig c;
  const double dmin = min_pairwise_distance(nodes);
  c.beta = 0.25 * dmin;
  c.thin_width = 0.1 * mean_nearest_neighbor_distance(nodes);
  c.port_radius = 0.2 * dmin;
  return c;
}

double max_port_radius(const Mesh& m) {
  std::vector<int> nodes;
  std::vector<Point> pts;
  for (int v : m.vertex_ids()) {
    if (m.vertex(v).kind == VertexKind::kNode) {
      nodes.push_back(v);
      pts.push_back(m.vertex(v).pos);
    }
  }
  double bound = pts.size() >= 2 ? 0.5 * min_pairwise_distance(pts) : kInf;
  for (int v : nodes) {
    const Point p = m.vertex(v).pos;
    for (int r : m.rail_ids()) {
      const Rail& rl = m.rail(r);
      if (rl.a == v || rl.b == v) {
        bound = std::min(bound, 0.5 * rl.length);
      } else {
        bound = std::min(bound, point_seg_dist(p, m.segment(r)));
      }
    }
  }
  return bound;
}

Mesh add_detours(const Mesh& m, double port_radius) {
  if (!(port_radius > 0.0)) throw ValidationError("port_radius must be positive");
  if (port_radius >= max_port_radius(m)) throw ValidationError("port_radius too large");
  Mesh out = m;
  const double r = port_radius;
  const double h = r * std::sqrt(0.5);
  const Point offsets[8] = {{r, 0}, {h, h}, {0, r}, {-h, h}, {-r, 0}, {-h, -h}, {0, -r}, {h, -h}};

  for (int v : m.vertex_ids()) {
    const Vertex& nv = m.vertex(v);
    if (nv.kind != VertexKind::kNode) continue;
    const Point p = nv.pos;
    std::array<int, 8> oct{};
    for (int k = 0; k < 8; ++k) {
      Vertex ov;
      ov.pos = p + offsets[k];
      ov.owner = nv.node;
      oct[static_cast<size_t>(k)] = out.add_vertex(ov);
    }
    const std::vector<int> rails(m.incident(v).begin(), m.incident(v).end());
    for (int rid : rails) {
      const int w = m.other_end(rid, v);
      const Point d = m.vertex(w).pos - p;
      int k = -1;
      if (d.y == 0 && d.x > 0) k = 0;
      if (d.x == 0 && d.y > 0) k = 2;
      if (d.y == 0 && d.x < 0) k = 4;
      if (d.x == 0 && d.y < 0) k = 6;
      if (k < 0) throw MeshError("add_detours: node rail is not axis-aligned");
      const int port = oct[static_cast<size_t>(k)];
      out.mutable_vertex(port).port = true;
      out.remove_rail(*out.find_rail(v, w));
      out.add_rail(v, port);
      out.add_rail(port, w);
    }
    for (int k = 0; k < 8; ++k) {
      out.add_rail(oct[static_cast<size_t>(k)], oct[static_cast<size_t>((k + 1) % 8)]);
    }
  }
  return out;
}

RoutedMesh route_edges(const Mesh& m, const InputGraph& g) {
  RoutedMesh rm;
  rm.mesh = m;
  std::vector<char> is_node(static_cast<size_t>(m.vertex_capacity()), 0);
  for (int v : m.vertex_ids()) {
    if (m.vertex(v).kind == VertexKind::kNode) is_node[static_cast<size_t>(v)] = 1;
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edges()[static_cast<size_t>(e)];
    const int s = m.node_vertex(u);
    const int t = m.node_vertex(v);
    if (s < 0 || t < 0) throw MeshError("route_edges: edge endpoint missing from mesh");
    std::vector<char> banned = is_node;
    banned[static_cast<size_t>(s)] = 0;
    banned[static_cast<size_t>(t)] = 0;
    const std::vector<double> ds = shortest_distances(m, s, &banned);
    const std::vector<double> dt = shortest_distances(m, t, &banned);
    const double total = ds[static_cast<size_t>(t)];
    if (!std::isfinite(total)) {
      throw MeshError("route_edges: no route between '" + g.node(u).id + "' and '" +
                      g.node(v).id + "'");
    }
    const double tol = kTol * std::max(1.0, total);
    Route route{e, u, v, {s}, 0.0};
    std::vector<char> on_path(static_cast<size_t>(m.vertex_capacity()), 0);
    on_path[static_cast<size_t>(s)] = 1;
    int cur = s;
    while (cur != t) {
      int best = -1;
      for (int r : m.incident(cur)) {
        const int w = m.other_end(r, cur);
        const auto uw = static_cast<size_t>(w);
        if (banned[uw] || on_path[uw]) continue;
        if (!(dt[uw] < dt[static_cast<size_t>(cur)])) continue;
        const double through = ds[static_cast<size_t>(cur)] + m.rail(r).length + dt[uw];
        if (std::abs(through - total) > tol) continue;
        if (best < 0 || w < best) best = w;
      }
      if (best < 0) throw MeshError("route_edges: shortest path reconstruction failed");
      on_path[static_cast<size_t>(best)] = 1;
      route.chain.push_back(best);
      cur = best;
    }
    route.length = chain_length(m, route.chain);
    rm.routes.push_back(std::move(route));
  }
  recompute_usage(rm);
  return rm;
}

void recompute_usage(RoutedMesh& rm) {
  rm.usage.assign(static_cast<size_t>(rm.mesh.rail_capacity()), 0);
  for (const Route& r : rm.routes) {
    for (size_t i = 1; i < r.chain.size(); ++i) {
      const auto rail = rm.mesh.find_rail(r.chain[i - 1], r.chain[i]);
      if (!rail) throw MeshError("route chain uses a missing rail");
      ++rm.usage[static_cast<size_t>(*rail)];
    }
  }
}

void recompute_lengths(RoutedMesh& rm) {
  for (Route& r : rm.routes) r.length = chain_length(rm.mesh, r.chain);
}

RoutedMesh prune(RoutedMesh rm) {
  recompute_usage(rm);
  for (int r : rm.mesh.rail_ids()) {
    if (rm.usage[static_cast<size_t>(r)] == 0) rm.mesh.remove_rail(r);
  }
  for (int v : rm.mesh.vertex_ids()) {
    if (rm.mesh.vertex(v).kind != VertexKind::kNode && rm.mesh.degree(v) == 0) {
      rm.mesh.remove_vertex(v);
    }
  }
  return rm;
}

double total_ink(const RoutedMesh& rm) {
  double ink = 0.0;
  for (int r : rm.mesh.rail_ids()) {
    if (static_cast<size_t>(r) < rm.usage.size() && rm.usage[static_cast<size_t>(r)] > 0) {
      ink += rm.mesh.rail(r).length;
    }
  }
  return ink;
}

std::vector<Face> enumerate_faces(const Mesh& m) {
  std::vector<std::vector<int>> order(static_cast<size_t>(m.vertex_capacity()));
  for (int v : m.vertex_ids()) order[static_cast<size_t>(v)] = ccw_neighbors(m, v);

  std::set<std::pair<int, int>> seen;
  std::vector<Face> faces;
  for (int r : m.rail_ids()) {
    for (int side = 0; side < 2; ++side) {
      const int a0 = side == 0 ? m.rail(r).a : m.rail(r).b;
      const int b0 = m.other_end(r, a0);
      if (seen.count({a0, b0})) continue;
      Face f;
      int a = a0, b = b0;
      while (seen.insert({a, b}).second) {
        f.cycle.push_back(a);
        const auto& nb = order[static_cast<size_t>(b)];
        const auto it = std::find(nb.begin(), nb.end(), a);
        const size_t i = static_cast<size_t>(it - nb.begin());
        const int next = nb[(i + nb.size() - 1) % nb.size()];
        a = b;
        b = next;
      }
      double area = 0.0;
      for (size_t i = 0; i < f.cycle.size(); ++i) {
        const Point p = m.vertex(f.cycle[i]).pos;
        const Point q = m.vertex(f.cycle[(i + 1) % f.cycle.size()]).pos;
        area += p.x * q.y - q.x * p.y;
      }
      f.signed_area = area / 2.0;
      faces.push_back(std::move(f));
    }
  }
  return faces;
}

double face_width(const Mesh& m, const Face& f) {
  const size_t k = f.cycle.size();
  double best = kInf;
  for (size_t i = 0; i < k; ++i) {
    const int a0 = f.cycle[i], a1 = f.cycle[(i + 1) % k];
    for (size_t j = i + 1; j < k; ++j) {
      const int b0 = f.cycle[j], b1 = f.cycle[(j + 1) % k];
      if (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) continue;
      best = std::min(best, seg_seg_dist({m.vertex(a0).pos, m.vertex(a1).pos},
                                         {m.vertex(b0).pos, m.vertex(b1).pos}));
    }
  }
  return best;
}

namespace {

bool simple_cycle(const Face& f) {
  std::set<int> s(f.cycle.begin(), f.cycle.end());
  return s.size() == f.cycle.size();
}

bool free_of_nodes(const Mesh& m, const Face& f, bool detours_too) {
  for (int v : f.cycle) {
    const Vertex& vx = m.vertex(v);
    if (vx.kind == VertexKind::kNode) return false;
    if (detours_too && (vx.owner >= 0 || vx.port)) return false;
  }
  return true;
}

// The way from a to b around the cycle that avoids the direct a-b side.
std::vector<int> around(const Face& f, int a, int b) {
  const size_t k = f.cycle.size();
  const size_t ia = static_cast<size_t>(std::find(f.cycle.begin(), f.cycle.end(), a) - f.cycle.begin());
  std::vector<int> fwd, bwd;
  for (size_t s = 0; s <= k; ++s) {
    const int v = f.cycle[(ia + s) % k];
    fwd.push_back(v);
    if (v == b) break;
  }
  for (size_t s = 0; s <= k; ++s) {
    const int v = f.cycle[(ia + k - s) % k];
    bwd.push_back(v);
    if (v == b) break;
  }
  return fwd.size() > bwd.size() ? fwd : bwd;
}

// Face on the far side of directed side a->b, found by walking from b->a.
const Face* face_of_half_edge(const std::vector<Face>& faces, int a, int b) {
  for (const Face& f : faces) {
    const size_t k = f.cycle.size();
    for (size_t i = 0; i < k; ++i) {
      if (f.cycle[i] == a && f.cycle[(i + 1) % k] == b) return &f;
    }
  }
  return nullptr;
}

}  // namespace

RoutedMesh refine_faces(RoutedMesh rm, const ModConfig& cfg) {
  rm = prune(std::move(rm));
  std::set<std::vector<int>> skipped;
  for (;;) {
    const std::vector<Face> faces = enumerate_faces(rm.mesh);
    bool changed = false;
    for (const Face& f : faces) {
      if (f.signed_area <= 0.0 || !simple_cycle(f) || !free_of_nodes(rm.mesh, f, true)) continue;
      if (skipped.count(f.cycle)) continue;
      if (!(face_width(rm.mesh, f) < cfg.thin_width)) continue;

      // Longest side of the face.
      const size_t k = f.cycle.size();
      int a = -1, b = -1;
      double longest = -1.0;
      for (size_t i = 0; i < k; ++i) {
        const int p = f.cycle[i], q = f.cycle[(i + 1) % k];
        const double len = dist_e(rm.mesh.vertex(p).pos, rm.mesh.vertex(q).pos);
        if (len > longest) {
          longest = len;
          a = p;
          b = q;
        }
      }
      const Face* other = face_of_half_edge(faces, b, a);
      if (other == &f) {
        skipped.insert(f.cycle);
        continue;  // bridge
      }
      std::vector<int> detour = around(f, a, b);
      if (other && simple_cycle(*other) && free_of_nodes(rm.mesh, *other, false)) {
        std::vector<int> alt = around(*other, a, b);
        const double l1 = chain_length(rm.mesh, detour);
        const double l2 = chain_length(rm.mesh, alt);
        if (l2 < l1 || (l2 == l1 && alt < detour)) detour = std::move(alt);
      }
      std::vector<int> reversed(detour.rbegin(), detour.rend());

      for (Route& r : rm.routes) {
        std::vector<int> next;
        for (size_t i = 0; i < r.chain.size(); ++i) {
          if (i + 1 < r.chain.size() && r.chain[i] == a && r.chain[i + 1] == b) {
            next.insert(next.end(), detour.begin(), detour.end() - 1);
          } else if (i + 1 < r.chain.size() && r.chain[i] == b && r.chain[i + 1] == a) {
            next.insert(next.end(), reversed.begin(), reversed.end() - 1);
          } else {
            next.push_back(r.chain[i]);
          }
        }
        remove_loops(next);
        r.chain = std::move(next);
      }
      rm.mesh.remove_rail(*rm.mesh.find_rail(a, b));
      recompute_lengths(rm);
      rm = prune(std::move(rm));
      changed = true;
      break;
    }
    if (!changed) break;
  }
  return rm;
}

RoutedMesh median_pass(RoutedMesh rm, const ModConfig& cfg) {
  rm = prune(std::move(rm));
  Mesh& m = rm.mesh;
  const double stop = 1e-6 * m.boundary().diagonal();
  for (int iter = 0; iter < cfg.median_iters; ++iter) {
    double moved = 0.0;
    for (int j : m.vertex_ids()) {
      if (!is_plain_junction(m.vertex(j)) || m.degree(j) < 2) continue;
      const std::vector<Point> nbrs = arms_of(m, j);
      const Point from = m.vertex(j).pos;
      const Point target = geometric_median(nbrs);
      if (dist_e(from, target) <= stop * 1e-3) continue;
      const Profile before = move_profile(m, j, cfg);
      const double ink_before = sum_of_distances(nbrs, from);
      auto feasible = [&](double t) {
        const Point p = from + t * (target - from);
        if (p == from) return false;
        if (sum_of_distances(nbrs, p) > ink_before) return false;
        m.move_vertex(j, p);
        const bool ok = move_is_planar(m, j) && accept(before, move_profile(m, j, cfg), cfg);
        m.move_vertex(j, from);
        return ok;
      };
      double t = 0.0;
      if (feasible(1.0)) {
        t = 1.0;
      } else {
        double lo = 0.0, hi = 1.0;
        for (int step = 0; step < 32; ++step) {
          const double mid = 0.5 * (lo + hi);
          (feasible(mid) ? lo : hi) = mid;
        }
        t = lo;
      }
      if (t > 0.0) {
        const Point p = t == 1.0 ? target : from + t * (target - from);
        m.move_vertex(j, p);
        moved = std::max(moved, dist_e(from, p));
      }
    }
    if (moved < stop) break;
  }
  recompute_lengths(rm);
  return rm;
}

RoutedMesh shortcut_pass(RoutedMesh rm, const ModConfig& cfg) {
  rm = prune(std::move(rm));
  Mesh& m = rm.mesh;
  for (bool changed = true; changed;) {
    changed = false;
    for (int j : m.vertex_ids()) {
      if (!is_plain_junction(m.vertex(j)) || m.degree(j) != 2) continue;
      const int ra = m.incident(j)[0], rc = m.incident(j)[1];
      const int a = m.other_end(ra, j), c = m.other_end(rc, j);
      const auto existing = m.find_rail(a, c);

      Profile before;
      Profile after;
      add_angles(m.vertex(j).pos, arms_of(m, j), cfg.alpha, before);
      for (int end : {a, c}) {
        add_angles(m.vertex(end).pos, arms_of(m, end), cfg.alpha, before);
        std::vector<Point> arms;
        for (int r : m.incident(end)) {
          const int w = m.other_end(r, end);
          if (w != j) arms.push_back(m.vertex(w).pos);
        }
        if (!existing) arms.push_back(m.vertex(end == a ? c : a).pos);
        add_angles(m.vertex(end).pos, arms, cfg.alpha, after);
      }
      const Point pj = m.vertex(j).pos;
      for (int r : m.rail_ids()) {
        if (r == ra || r == rc) continue;
        add_clear(point_seg_dist(pj, m.segment(r)), cfg.beta, before);
      }
      for (int v : m.vertex_ids()) {
        if (v == j) continue;
        for (int r : {ra, rc}) {
          const Rail& rl = m.rail(r);
          if (v != rl.a && v != rl.b) add_clear(point_seg_dist(m.vertex(v).pos, m.segment(r)), cfg.beta, before);
        }
        if (!existing && v != a && v != c) {
          add_clear(point_seg_dist(m.vertex(v).pos, {m.vertex(a).pos, m.vertex(c).pos}), cfg.beta, after);
        }
      }
      if (!accept(before, after, cfg)) continue;
      if (!existing && !segment_is_free(m, a, c, {ra, rc}, j)) continue;

      m.remove_rail(ra);
      m.remove_rail(rc);
      m.remove_vertex(j);
      m.add_rail(a, c);
      for (Route& r : rm.routes) {
        r.chain.erase(std::remove(r.chain.begin(), r.chain.end(), j), r.chain.end());
      }
      changed = true;
    }
  }
  recompute_lengths(rm);
  recompute_usage(rm);
  return rm;
}

namespace {

// Angles at `verts`, plus clearances between every vertex and each rail that
// touches `verts`, and between `verts` and every other rail.
Profile local_profile(const Mesh& m, const std::vector<int>& verts, const ModConfig& cfg) {
  Profile p;
  std::set<std::pair<int, int>> pairs;
  for (int v : verts) {
    if (!m.vertex_alive(v)) continue;
    add_angles(m.vertex(v).pos, arms_of(m, v), cfg.alpha, p);
    for (int r : m.rail_ids()) {
      const Rail& rl = m.rail(r);
      if (rl.a == v || rl.b == v) {
        for (int w : m.vertex_ids()) {
          if (w != rl.a && w != rl.b) pairs.emplace(w, r);
        }
      } else {
        pairs.emplace(v, r);
      }
    }
  }
  for (const auto& [v, r] : pairs) add_clear(point_seg_dist(m.vertex(v).pos, m.segment(r)), cfg.beta, p);
  return p;
}

bool try_straighten(RoutedMesh& rm, int a, int b, int c, const ModConfig& cfg) {
  const Mesh& m = rm.mesh;
  if (!is_plain_junction(m.vertex(b)) || a == c) return false;
  std::vector<std::pair<size_t, size_t>> users;
  for (size_t ri = 0; ri < rm.routes.size(); ++ri) {
    const auto& ch = rm.routes[ri].chain;
    for (size_t k = 1; k + 1 < ch.size(); ++k) {
      if (ch[k] == b && ((ch[k - 1] == a && ch[k + 1] == c) || (ch[k - 1] == c && ch[k + 1] == a))) {
        users.emplace_back(ri, k);
      }
    }
  }
  const int rab = *m.find_rail(a, b), rbc = *m.find_rail(b, c);
  const bool drop_ab = rm.usage[static_cast<size_t>(rab)] == static_cast<int>(users.size());
  const bool drop_bc = rm.usage[static_cast<size_t>(rbc)] == static_cast<int>(users.size());
  const auto existing = m.find_rail(a, c);
  const double added = existing ? 0.0 : dist_e(m.vertex(a).pos, m.vertex(c).pos);
  const double removed = (drop_ab ? m.rail(rab).length : 0.0) + (drop_bc ? m.rail(rbc).length : 0.0);
  if (added > removed) return false;

  Mesh next = m;
  if (drop_ab) next.remove_rail(rab);
  if (drop_bc) next.remove_rail(rbc);
  if (next.degree(b) == 0) next.remove_vertex(b);
  const int rac = next.add_rail(a, c);
  if (!existing && !segment_is_free(next, a, c, {rac}, -1)) return false;
  if (!accept(local_profile(m, {a, b, c}, cfg), local_profile(next, {a, b, c}, cfg), cfg)) return false;

  rm.mesh = std::move(next);
  for (auto it = users.rbegin(); it != users.rend(); ++it) {
    auto& ch = rm.routes[it->first].chain;
    ch.erase(ch.begin() + static_cast<std::ptrdiff_t>(it->second));
  }
  recompute_usage(rm);
  return true;
}

}  // namespace

RoutedMesh straighten_bends(RoutedMesh rm, const ModConfig& cfg) {
  rm = prune(std::move(rm));
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t ri = 0; ri < rm.routes.size(); ++ri) {
      size_t k = 1;
      while (k + 1 < rm.routes[ri].chain.size()) {
        const auto& ch = rm.routes[ri].chain;
        if (try_straighten(rm, ch[k - 1], ch[k], ch[k + 1], cfg)) {
          changed = true;
          k = std::max<size_t>(1, k - 1);
        } else {
          ++k;
        }
      }
    }
  }
  recompute_lengths(rm);
  return rm;
}

RoutedMesh optimize_routes(RoutedMesh rm, const ModConfig& cfg) {
  rm = prune(std::move(rm));
  rm = refine_faces(std::move(rm), cfg);
  rm = median_pass(std::move(rm), cfg);
  rm = shortcut_pass(std::move(rm), cfg);
  return rm;
}

Polyline route_polyline(const Mesh& m, const Route& r) {
  Polyline pl;
  pl.reserve(r.chain.size());
  for (int v : r.chain) pl.push_back(m.vertex(v).pos);
  return pl;
}

std::vector<std::string> route_issues(const RoutedMesh& rm) {
  std::vector<std::string> issues;
  const Mesh& m = rm.mesh;
  std::vector<int> usage(static_cast<size_t>(m.rail_capacity()), 0);
  for (const Route& r : rm.routes) {
    const std::string tag = "route " + std::to_string(r.edge) + ": ";
    if (r.chain.size() < 2) {
      issues.push_back(tag + "chain too short");
      continue;
    }
    if (r.chain.front() != m.node_vertex(r.u) || r.chain.back() != m.node_vertex(r.v)) {
      issues.push_back(tag + "wrong endpoints");
    }
    for (size_t i = 0; i < r.chain.size(); ++i) {
      const int v = r.chain[i];
      if (v < 0 || v >= m.vertex_capacity() || !m.vertex_alive(v)) {
        issues.push_back(tag + "dead vertex");
        break;
      }
      if (i > 0 && i + 1 < r.chain.size() && m.vertex(v).kind == VertexKind::kNode) {
        issues.push_back(tag + "passes through node " + std::to_string(m.vertex(v).node));
      }
      if (i > 0) {
        const auto rail = m.find_rail(r.chain[i - 1], v);
        if (!rail) {
          issues.push_back(tag + "missing rail");
        } else {
          ++usage[static_cast<size_t>(*rail)];
        }
      }
    }
  }
  for (int r : m.rail_ids()) {
    const int have = static_cast<size_t>(r) < rm.usage.size() ? rm.usage[static_cast<size_t>(r)] : 0;
    if (have != usage[static_cast<size_t>(r)]) {
      issues.push_back("usage of rail " + std::to_string(r) + " out of date");
    }
  }
  return issues;
}

ConstraintReport constraint_report(const Mesh& m, const ModConfig& cfg) {
  ConstraintReport rep;
  Profile angles;
  for (int v : m.vertex_ids()) add_angles(m.vertex(v).pos, arms_of(m, v), cfg.alpha, angles);
  rep.angle_violations = angles.count;
  rep.min_angle = std::min(180.0, angles.min_angle);
  Profile clear;
  const std::vector<int> rails = m.rail_ids();
  for (int v : m.vertex_ids()) {
    const Point p = m.vertex(v).pos;
    for (int r : rails) {
      const Rail& rl = m.rail(r);
      if (rl.a != v && rl.b != v) add_clear(point_seg_dist(p, m.segment(r)), cfg.beta, clear);
    }
  }
  rep.clearance_violations = clear.count;
  rep.min_clearance = clear.min_clear;
  rep.planar = planarity_issues(m).empty();
  return rep;
}

}  // namespace gmaps
