#include "gmaps/zoom.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "gmaps/error.h"

namespace gmaps {

TileMode parse_tile_mode(const std::string& s) {
  if (s == "1d") return TileMode::k1D;
  if (s == "2d") return TileMode::k2D;
  throw ValidationError("unknown tile mode '" + s + "' (expected 1d or 2d)");
}

const char* to_string(TileMode m) { return m == TileMode::k1D ? "1d" : "2d"; }

int TileTree::columns(int level) const { return 1 << (level - 1); }

int TileTree::rows(int level) const { return mode == TileMode::k1D ? 1 : 1 << (level - 1); }

int TileTree::at(int level, int ix, int iy) const {
  return levels[static_cast<size_t>(level - 1)][static_cast<size_t>(iy * columns(level) + ix)];
}

TileTree build_tile_tree(std::span<const Point> pts, int height, TileMode mode) {
  const Rect root = pts.empty() ? Rect{} : bounding_rect(pts);
  return build_tile_tree(pts, root, height, mode);
}

TileTree build_tile_tree(std::span<const Point> pts, const Rect& root, int height, TileMode mode) {
  if (height < 1) throw ValidationError("tile tree height must be at least 1");
  if (height > 16) throw ValidationError("tile tree height must be at most 16");
  TileTree t;
  t.height = height;
  t.mode = mode;
  t.root = root;
  t.point_count = static_cast<int>(pts.size());
  t.levels.resize(static_cast<size_t>(height));
  t.point_tile.assign(static_cast<size_t>(height), std::vector<int>(pts.size(), -1));

  for (int z = 1; z <= height; ++z) {
    const int cx = t.columns(z), cy = t.rows(z);
    const double w = root.width() / cx, h = root.height() / cy;
    for (int iy = 0; iy < cy; ++iy) {
      for (int ix = 0; ix < cx; ++ix) {
        Tile tile;
        tile.level = z;
        tile.ix = ix;
        tile.iy = iy;
        tile.rect.min = {root.min.x + ix * w, root.min.y + iy * h};
        tile.rect.max = {ix + 1 == cx ? root.max.x : root.min.x + (ix + 1) * w,
                         iy + 1 == cy ? root.max.y : root.min.y + (iy + 1) * h};
        if (z > 1) {
          const int pix = ix / 2, piy = mode == TileMode::k1D ? 0 : iy / 2;
          tile.parent = t.at(z - 1, pix, piy);
          t.tiles[static_cast<size_t>(tile.parent)].children.push_back(static_cast<int>(t.tiles.size()));
        }
        t.levels[static_cast<size_t>(z - 1)].push_back(static_cast<int>(t.tiles.size()));
        t.tiles.push_back(std::move(tile));
      }
    }
  }

  // Cell indices at the deepest level; ancestors drop low bits.
  const int leaf_cx = t.columns(height), leaf_cy = t.rows(height);
  auto cell = [](double v, double lo, double extent, int cells) {
    if (extent <= 0.0) return 0;
    const int i = static_cast<int>(std::floor((v - lo) / extent * cells));
    return std::clamp(i, 0, cells - 1);
  };
  for (size_t p = 0; p < pts.size(); ++p) {
    const int lx = cell(pts[p].x, root.min.x, root.width(), leaf_cx);
    const int ly = cell(pts[p].y, root.min.y, root.height(), leaf_cy);
    for (int z = 1; z <= height; ++z) {
      const int shift = height - z;
      const int id = t.at(z, lx >> shift, mode == TileMode::k1D ? 0 : ly >> shift);
      t.point_tile[static_cast<size_t>(z - 1)][p] = id;
      t.tiles[static_cast<size_t>(id)].points.push_back(static_cast<int>(p));
    }
  }
  return t;
}

FlowNetwork build_flow_network(const TileTree& t, int quota) {
  if (quota < 0) throw ValidationError("quota must be non-negative");
  FlowNetwork net;
  const int n = t.point_count;
  const int inf = std::max(n, 1);
  const size_t tiles = t.tiles.size();
  net.supply = n;
  net.split_arc.assign(tiles, -1);
  net.sink_arc.assign(tiles, -1);
  net.tree_arc.assign(tiles, -1);
  net.dashed.assign(tiles, {});
  std::vector<int> in(tiles, -1), out(tiles, -1);

  auto arc = [&](int from, int to, int cap, long long cost) {
    net.arcs.push_back({from, to, cap, cost});
    return static_cast<int>(net.arcs.size()) - 1;
  };
  for (size_t i = 0; i < tiles; ++i) {
    const Tile& tile = t.tiles[i];
    if (tile.points.empty()) continue;
    in[i] = net.node_count++;
    const bool leaf = tile.level == t.height;
    if (leaf) {
      out[i] = in[i];
      net.sink_arc[i] = arc(in[i], net.sink, static_cast<int>(tile.points.size()), 0);
    } else {
      out[i] = net.node_count++;
      net.split_arc[i] = arc(in[i], out[i], quota, 0);
    }
    if (tile.parent < 0) {
      net.root_arc = arc(net.source, in[i], inf, 0);
    } else {
      net.tree_arc[i] = arc(out[static_cast<size_t>(tile.parent)], in[i], inf, 0);
      for (int k = 1; k <= static_cast<int>(tile.points.size()); ++k) {
        net.dashed[i].push_back(arc(net.source, in[i], 1, 2LL * k - 1));
      }
    }
  }
  return net;
}

FlowResult solve_mcmf(const FlowNetwork& net) {
  // Residual edges: 2i forward, 2i+1 backward.
  const int nv = net.node_count;
  const size_t ne = net.arcs.size();
  std::vector<int> residual(2 * ne);
  std::vector<std::vector<int>> out(static_cast<size_t>(nv));
  for (size_t i = 0; i < ne; ++i) {
    residual[2 * i] = net.arcs[i].cap;
    residual[2 * i + 1] = 0;
    out[static_cast<size_t>(net.arcs[i].from)].push_back(static_cast<int>(2 * i));
    out[static_cast<size_t>(net.arcs[i].to)].push_back(static_cast<int>(2 * i + 1));
  }
  auto head = [&](int e) {
    const FlowArc& a = net.arcs[static_cast<size_t>(e / 2)];
    return e % 2 == 0 ? a.to : a.from;
  };
  auto cost = [&](int e) {
    const long long c = net.arcs[static_cast<size_t>(e / 2)].cost;
    return e % 2 == 0 ? c : -c;
  };

  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> pot(static_cast<size_t>(nv), 0);
  FlowResult res;
  for (;;) {
    std::vector<long long> dist(static_cast<size_t>(nv), kInf);
    std::vector<int> via(static_cast<size_t>(nv), -1);
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<size_t>(net.source)] = 0;
    pq.emplace(0, net.source);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[static_cast<size_t>(v)]) continue;
      for (int e : out[static_cast<size_t>(v)]) {
        if (residual[static_cast<size_t>(e)] <= 0) continue;
        const int w = head(e);
        const long long nd = d + cost(e) + pot[static_cast<size_t>(v)] - pot[static_cast<size_t>(w)];
        if (nd < dist[static_cast<size_t>(w)]) {
          dist[static_cast<size_t>(w)] = nd;
          via[static_cast<size_t>(w)] = e;
          pq.emplace(nd, w);
        }
      }
    }
    if (dist[static_cast<size_t>(net.sink)] >= kInf) break;
    for (int v = 0; v < nv; ++v) {
      if (dist[static_cast<size_t>(v)] < kInf) pot[static_cast<size_t>(v)] += dist[static_cast<size_t>(v)];
    }
    int push = std::numeric_limits<int>::max();
    for (int v = net.sink; v != net.source; v = head(via[static_cast<size_t>(v)] ^ 1)) {
      push = std::min(push, residual[static_cast<size_t>(via[static_cast<size_t>(v)])]);
    }
    for (int v = net.sink; v != net.source; v = head(via[static_cast<size_t>(v)] ^ 1)) {
      const int e = via[static_cast<size_t>(v)];
      residual[static_cast<size_t>(e)] -= push;
      residual[static_cast<size_t>(e ^ 1)] += push;
      res.cost += push * cost(e);
    }
    res.value += push;
  }
  res.flow.resize(ne);
  for (size_t i = 0; i < ne; ++i) res.flow[i] = residual[2 * i + 1];
  return res;
}

std::vector<int> dashed_inflow(const TileTree& t, const FlowNetwork& net, const FlowResult& f) {
  std::vector<int> x(t.tiles.size(), 0);
  for (size_t i = 0; i < t.tiles.size(); ++i) {
    for (int a : net.dashed[i]) x[i] += f.flow[static_cast<size_t>(a)];
  }
  if (net.root_arc >= 0) x[static_cast<size_t>(t.levels[0][0])] = f.flow[static_cast<size_t>(net.root_arc)];
  return x;
}

LevelAssignment assignment_from_flow(const TileTree& t, const FlowNetwork& net,
                                     const FlowResult& f, const Ranking& ranks) {
  if (f.value < t.point_count) {
    throw InfeasibleError("no feasible visualization at this quota: flow reaches " +
                          std::to_string(f.value) + " of " + std::to_string(t.point_count) +
                          " points");
  }
  const std::vector<int> x = dashed_inflow(t, net, f);
  LevelAssignment g(static_cast<size_t>(t.point_count), 0);
  for (int z = t.height; z >= 1; --z) {
    for (int id : t.levels[static_cast<size_t>(z - 1)]) {
      int want = x[static_cast<size_t>(id)];
      if (want == 0) continue;
      std::vector<int> open;
      for (int p : t.tiles[static_cast<size_t>(id)].points) {
        if (g[static_cast<size_t>(p)] == 0) open.push_back(p);
      }
      std::sort(open.begin(), open.end(), [&](int a, int b) {
        const double ra = ranks[static_cast<size_t>(a)], rb = ranks[static_cast<size_t>(b)];
        return ra < rb || (ra == rb && a > b);
      });
      if (static_cast<int>(open.size()) < want) throw InfeasibleError("flow does not match tile contents");
      for (int k = 0; k < want; ++k) g[static_cast<size_t>(open[static_cast<size_t>(k)])] = z;
    }
  }
  for (int v : g) {
    if (v == 0) throw InfeasibleError("flow left a point without a level");
  }
  return g;
}

std::vector<int> visible_counts(const TileTree& t, const LevelAssignment& g) {
  std::vector<int> s(t.tiles.size(), 0);
  for (size_t i = 0; i < t.tiles.size(); ++i) {
    for (int p : t.tiles[i].points) s[i] += g[static_cast<size_t>(p)] <= t.tiles[i].level;
  }
  return s;
}

std::vector<int> tile_deltas(const TileTree& t, const LevelAssignment& g) {
  std::vector<int> d(t.tiles.size(), 0);
  for (size_t i = 0; i < t.tiles.size(); ++i) {
    if (t.tiles[i].parent < 0) continue;
    for (int p : t.tiles[i].points) d[i] += g[static_cast<size_t>(p)] == t.tiles[i].level;
  }
  return d;
}

long long objective_f(const TileTree& t, const LevelAssignment& g) {
  long long f = 0;
  for (int d : tile_deltas(t, g)) f += static_cast<long long>(d) * d;
  return f;
}

std::vector<int> quota_violations(const TileTree& t, const LevelAssignment& g, int quota) {
  std::vector<int> bad;
  const std::vector<int> s = visible_counts(t, g);
  for (size_t i = 0; i < t.tiles.size(); ++i) {
    if (t.tiles[i].level < t.height && s[i] > quota) bad.push_back(static_cast<int>(i));
  }
  return bad;
}

std::vector<std::pair<int, int>> check_rank_condition(const LevelAssignment& g, const Ranking& ranks) {
  const size_t n = g.size();
  std::vector<int> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return ranks[static_cast<size_t>(a)] > ranks[static_cast<size_t>(b)] ||
           (ranks[static_cast<size_t>(a)] == ranks[static_cast<size_t>(b)] && a < b);
  });
  // Points of strictly higher rank, bucketed by level.
  std::map<int, std::vector<int>> higher;
  std::vector<std::pair<int, int>> bad;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    const double r = ranks[static_cast<size_t>(order[i])];
    while (j < n && ranks[static_cast<size_t>(order[j])] == r) ++j;
    for (size_t k = i; k < j; ++k) {
      const int q2 = order[k];
      for (auto it = higher.upper_bound(g[static_cast<size_t>(q2)]); it != higher.end(); ++it) {
        for (int q : it->second) bad.emplace_back(q, q2);
      }
    }
    for (size_t k = i; k < j; ++k) higher[g[static_cast<size_t>(order[k])]].push_back(order[k]);
    i = j;
  }
  std::sort(bad.begin(), bad.end());
  return bad;
}

std::optional<long long> brute_force_optimum(const TileTree& t, int quota) {
  const int n = t.point_count;
  if (n > 12 || t.height > 3) throw ValidationError("brute_force_optimum: instance too large");
  const int rho = t.height;
  LevelAssignment g(static_cast<size_t>(n), 1);
  std::optional<long long> best;
  for (;;) {
    if (quota_violations(t, g, quota).empty()) {
      const long long f = objective_f(t, g);
      if (!best || f < *best) best = f;
    }
    int k = 0;
    while (k < n && g[static_cast<size_t>(k)] == rho) g[static_cast<size_t>(k++)] = 1;
    if (k == n) break;
    ++g[static_cast<size_t>(k)];
  }
  return best;
}

LevelSolution solve_levels(const TileTree& t, int quota, const Ranking& ranks) {
  LevelSolution s;
  const FlowNetwork net = build_flow_network(t, quota);
  const FlowResult f = solve_mcmf(net);
  if (f.value < t.point_count) return s;
  s.feasible = true;
  s.cost = f.cost;
  s.g = assignment_from_flow(t, net, f, ranks);
  s.rank_violations = check_rank_condition(s.g, ranks);
  return s;
}

std::optional<int> min_quota(const TileTree& t, const Ranking& ranks) {
  const int n = t.point_count;
  if (n == 0) return 1;
  auto reaches_all = [&](int q) { return solve_mcmf(build_flow_network(t, q)).value == n; };
  // Flow feasibility is monotone in Q; the rank condition is not, so the
  // search only brackets the feasible range and a scan finds the first valid Q.
  int lo = 1, hi = n;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (reaches_all(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  for (int q = lo; q <= n; ++q) {
    if (solve_levels(t, q, ranks).valid()) return q;
  }
  return std::nullopt;
}

std::string to_dimacs(const FlowNetwork& net, const FlowResult* f) {
  std::ostringstream os;
  os << "n " << net.node_count << ' ' << net.arcs.size() << '\n';
  for (size_t i = 0; i < net.arcs.size(); ++i) {
    const FlowArc& a = net.arcs[i];
    os << "a " << a.from << ' ' << a.to << ' ' << a.cap << ' ' << a.cost << ' '
       << (f ? f->flow[i] : 0) << '\n';
  }
  return os.str();
}

}  // namespace gmaps
