#include "gmaps/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "gmaps/error.h"

namespace gmaps {

std::optional<int> InputGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Point> InputGraph::positions() const {
  std::vector<Point> pts;
  pts.reserve(nodes_.size());
  for (const Node& n : nodes_) pts.push_back(n.pos);
  return pts;
}

void InputGraph::set_positions(const std::vector<Point>& pts) {
  if (pts.size() != nodes_.size()) {
    throw ValidationError("set_positions: size mismatch");
  }
  for (size_t i = 0; i < pts.size(); ++i) nodes_[i].pos = pts[i];
}

InputGraph validate(const RawGraph& raw) {
  InputGraph g;
  std::map<std::pair<double, double>, std::string> seen_pos;
  size_t ranked = 0;
  for (const RawNode& rn : raw.nodes) {
    if (rn.id.empty()) throw ValidationError("empty node id");
    if (!is_finite(rn.pos)) {
      throw ValidationError("non-finite position for node '" + rn.id + "'");
    }
    if (rn.rank && (!std::isfinite(*rn.rank) || *rn.rank < 0)) {
      throw ValidationError("invalid rank for node '" + rn.id + "'");
    }
    if (g.index_.count(rn.id)) throw ValidationError("duplicate id '" + rn.id + "'");
    auto [it, fresh] = seen_pos.emplace(std::make_pair(rn.pos.x, rn.pos.y), rn.id);
    if (!fresh) {
      throw ValidationError("coincident positions: '" + it->second + "' and '" +
                            rn.id + "'");
    }
    if (rn.rank) ++ranked;
    g.index_.emplace(rn.id, static_cast<int>(g.nodes_.size()));
    g.nodes_.push_back(Node{rn.id, rn.pos, rn.rank});
  }
  if (ranked != 0 && ranked != raw.nodes.size()) {
    throw ValidationError("partial ranks: either every node has a rank or none does");
  }

  g.adj_.assign(g.nodes_.size(), {});
  std::set<std::pair<int, int>> seen_edges;
  for (const auto& [a, b] : raw.edges) {
    auto ia = g.index_of(a);
    auto ib = g.index_of(b);
    if (!ia) throw ValidationError("edge references unknown node '" + a + "'");
    if (!ib) throw ValidationError("edge references unknown node '" + b + "'");
    if (*ia == *ib) throw ValidationError("self-loop at '" + a + "'");
    const std::pair<int, int> key{std::min(*ia, *ib), std::max(*ia, *ib)};
    if (!seen_edges.insert(key).second) {
      throw ValidationError("duplicate edge '" + a + "'-'" + b + "'");
    }
    g.edges_.push_back(key);
    g.adj_[static_cast<size_t>(key.first)].push_back(key.second);
    g.adj_[static_cast<size_t>(key.second)].push_back(key.first);
  }
  return g;
}

Ranking pagerank(const InputGraph& g, double damping, double eps) {
  const int n = g.node_count();
  if (n == 0) throw ValidationError("pagerank: empty graph");
  const auto& adj = g.adjacency();
  const double base = (1.0 - damping) / n;

  Ranking rank(static_cast<size_t>(n), 1.0 / n);
  Ranking next(static_cast<size_t>(n));
  for (int iter = 0; iter < 100000; ++iter) {
    double dangling = 0.0;
    for (int v = 0; v < n; ++v) {
      if (adj[static_cast<size_t>(v)].empty()) dangling += rank[static_cast<size_t>(v)];
    }
    std::fill(next.begin(), next.end(), base + damping * dangling / n);
    for (int u = 0; u < n; ++u) {
      const auto& out = adj[static_cast<size_t>(u)];
      if (out.empty()) continue;
      const double share = damping * rank[static_cast<size_t>(u)] / static_cast<double>(out.size());
      for (int v : out) next[static_cast<size_t>(v)] += share;
    }
    double change = 0.0;
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
      change += std::abs(next[static_cast<size_t>(v)] - rank[static_cast<size_t>(v)]);
      total += next[static_cast<size_t>(v)];
    }
    for (double& r : next) r /= total;
    rank.swap(next);
    if (change < eps) break;
  }
  return rank;
}

Ranking resolve_ranks(const InputGraph& g, double damping, double eps) {
  if (g.node_count() > 0 && g.node(0).rank) {
    Ranking r;
    r.reserve(static_cast<size_t>(g.node_count()));
    for (const Node& n : g.nodes()) r.push_back(*n.rank);
    return r;
  }
  return pagerank(g, damping, eps);
}

Rect bounding_rect(const InputGraph& g) {
  if (g.node_count() == 0) throw ValidationError("bounding_rect: empty graph");
  const std::vector<Point> pts = g.positions();
  return bounding_rect(std::span<const Point>(pts));
}

double min_pairwise_distance(std::span<const Point> pts) {
  if (pts.size() < 2) return 0.0;
  // Sweep by x; only points within the current best x-distance can improve.
  std::vector<Point> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < sorted.size(); ++i) {
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[j].x - sorted[i].x >= best) break;
      best = std::min(best, dist_e(sorted[i], sorted[j]));
    }
  }
  return best;
}

double mean_nearest_neighbor_distance(std::span<const Point> pts) {
  if (pts.size() < 2) return 0.0;
  double total = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < pts.size(); ++j) {
      if (i != j) best = std::min(best, dist_e(pts[i], pts[j]));
    }
    total += best;
  }
  return total / static_cast<double>(pts.size());
}

}  // namespace gmaps
