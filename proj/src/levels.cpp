#include "gmaps/levels.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gmaps/error.h"

namespace gmaps {

std::vector<LevelGraph> level_graphs(const InputGraph& g, const LevelAssignment& a, int k) {
  if (static_cast<int>(a.size()) != g.node_count()) throw ValidationError("assignment size mismatch");
  std::vector<LevelGraph> out;
  for (int i = 1; i <= k; ++i) {
    LevelGraph lg;
    lg.level = i;
    for (int v = 0; v < g.node_count(); ++v) {
      if (a[static_cast<size_t>(v)] <= i) lg.nodes.push_back(v);
    }
    for (int e = 0; e < g.edge_count(); ++e) {
      const auto [u, v] = g.edges()[static_cast<size_t>(e)];
      if (a[static_cast<size_t>(u)] <= i && a[static_cast<size_t>(v)] <= i) lg.edges.push_back(e);
    }
    out.push_back(std::move(lg));
  }
  return out;
}

namespace {

// Replaces every run of h's octagon vertices in the chain by port, hv, port.
void collapse_runs(std::vector<int>& chain, const Mesh& m, int h, int hv) {
  std::vector<int> out;
  size_t i = 0;
  while (i < chain.size()) {
    if (m.vertex(chain[i]).owner != h) {
      out.push_back(chain[i++]);
      continue;
    }
    size_t j = i;
    while (j < chain.size() && m.vertex(chain[j]).owner == h) ++j;
    const int first = chain[i], last = chain[j - 1];
    if (j - i >= 2 && m.vertex(first).port && m.vertex(last).port) {
      out.push_back(first);
      out.push_back(hv);
      out.push_back(last);
    } else {
      out.insert(out.end(), chain.begin() + static_cast<std::ptrdiff_t>(i),
                 chain.begin() + static_cast<std::ptrdiff_t>(j));
    }
    i = j;
  }
  chain = std::move(out);
}

}  // namespace

LevelBundle derive_level_mesh(const LevelBundle& finer, const LevelGraph& coarser, const LevelOptions& opt) {
  LevelBundle b;
  b.graph = coarser;
  b.routed = finer.routed;
  RoutedMesh& rm = b.routed;
  Mesh& m = rm.mesh;

  const std::set<int> edges(coarser.edges.begin(), coarser.edges.end());
  std::erase_if(rm.routes, [&](const Route& r) { return !edges.count(r.edge); });

  const std::set<int> keep(coarser.nodes.begin(), coarser.nodes.end());
  for (int h : finer.graph.nodes) {
    if (keep.count(h)) continue;
    const int hv = m.node_vertex(h);
    if (hv < 0) continue;
    m.demote_node(hv);
    if (opt.avoid_hidden_nodes) continue;

    for (Route& r : rm.routes) collapse_runs(r.chain, m, h, hv);
    std::vector<int> ports;
    for (int v : m.vertex_ids()) {
      const Vertex& vx = m.vertex(v);
      if (vx.owner != h) continue;
      // Octagon sides go; spokes from hv to the ports stay.
      for (int r : std::vector<int>(m.incident(v))) {
        if (m.vertex(m.other_end(r, v)).owner == h) m.remove_rail(r);
      }
      if (vx.port) ports.push_back(v);
    }
    for (int p : ports) {
      Vertex& vx = m.mutable_vertex(p);
      vx.owner = -1;
      vx.port = false;
    }
  }
  for (const Route& r : rm.routes) {
    for (size_t i = 1; i < r.chain.size(); ++i) m.add_rail(r.chain[i - 1], r.chain[i]);
  }
  rm = prune(std::move(rm));
  recompute_lengths(rm);
  return b;
}

LevelBundle simplify_routes(LevelBundle b, const ModConfig& cfg) {
  b.routed = straighten_bends(std::move(b.routed), cfg);
  return b;
}

namespace {

const Route* route_for(const RoutedMesh& rm, int edge) {
  for (const Route& r : rm.routes) {
    if (r.edge == edge) return &r;
  }
  return nullptr;
}

}  // namespace

TransitionSet build_transitions(const LevelBundle& coarse, const LevelBundle& fine) {
  TransitionSet ts;
  ts.from_level = coarse.graph.level;
  for (int e : coarse.graph.edges) {
    const Route* a = route_for(coarse.routed, e);
    const Route* b = route_for(fine.routed, e);
    if (!a || !b) throw ValidationError("edge " + std::to_string(e) + " has no route at both levels");
    const Polyline pa = route_polyline(coarse.routed.mesh, *a);
    const Polyline pb = route_polyline(fine.routed.mesh, *b);
    std::vector<double> params = arc_params(pa);
    const std::vector<double> more = arc_params(pb);
    params.insert(params.end(), more.begin(), more.end());
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    ts.pairs.push_back({e, sample_at(pa, params), sample_at(pb, params)});
  }
  return ts;
}

Polyline interpolate(const TransitionPair& p, double t) {
  Polyline out;
  out.reserve(p.from.size());
  for (size_t i = 0; i < p.from.size(); ++i) {
    out.push_back({std::lerp(p.from[i].x, p.to[i].x, t), std::lerp(p.from[i].y, p.to[i].y, t)});
  }
  return out;
}

bool control_covers(const Polyline& control, const Polyline& stored, double tol) {
  if (control.empty() || stored.empty()) return control.empty() && stored.empty();
  if (!(control.front() == stored.front()) || !(control.back() == stored.back())) return false;
  size_t j = 0;
  for (const Point& p : control) {
    if (j < stored.size() && p == stored[j]) {
      ++j;
      continue;
    }
    if (j == 0 || j >= stored.size()) return false;
    if (point_seg_dist(p, {stored[j - 1], stored[j]}) > tol) return false;
  }
  return j == stored.size();
}

bool segment_meets_rect(const Segment& s, const Rect& r) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {s.a.x - r.min.x, r.max.x - s.a.x, s.a.y - r.min.y, r.max.y - s.a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  return true;
}

LevelTileMetrics tile_metrics(const LevelBundle& b, const TileTree& t) {
  LevelTileMetrics out;
  const int z = std::min(b.graph.level, t.height);
  out.level = b.graph.level;
  const auto& ids = t.levels[static_cast<size_t>(z - 1)];
  std::map<int, size_t> slot;
  for (int id : ids) {
    slot[id] = out.tiles.size();
    out.tiles.push_back({id, 0, 0});
  }
  for (int v : b.graph.nodes) ++out.tiles[slot.at(t.point_tile[static_cast<size_t>(z - 1)][static_cast<size_t>(v)])].visible;
  const Mesh& m = b.routed.mesh;
  for (int r : m.rail_ids()) {
    const Segment s = m.segment(r);
    for (TileStat& ts : out.tiles) {
      if (segment_meets_rect(s, t.tiles[static_cast<size_t>(ts.tile)].rect)) ++ts.rail_crossings;
    }
  }
  const int cx = t.columns(z), cy = t.rows(z);
  const int wx = std::min(2, cx), wy = std::min(2, cy);
  for (int iy = 0; iy + wy <= cy; ++iy) {
    for (int ix = 0; ix + wx <= cx; ++ix) {
      ViewportStat vs{ix, iy, 0};
      for (int dy = 0; dy < wy; ++dy) {
        for (int dx = 0; dx < wx; ++dx) vs.visible += out.tiles[static_cast<size_t>((iy + dy) * cx + ix + dx)].visible;
      }
      out.viewports.push_back(vs);
    }
  }
  for (const TileStat& ts : out.tiles) out.max_tile = std::max(out.max_tile, ts.visible);
  for (const ViewportStat& vs : out.viewports) out.max_viewport = std::max(out.max_viewport, vs.visible);
  return out;
}

}  // namespace gmaps
