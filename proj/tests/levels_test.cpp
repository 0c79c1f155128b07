#include "gmaps/levels.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gmaps/competition_mesh.h"
#include "gmaps/error.h"
#include "gmaps/pipeline.h"
#include "support.h"

namespace gmaps {
namespace {

InputGraph make_graph(const std::vector<Point>& pts, const std::vector<std::pair<int, int>>& edges) {
  RawGraph raw;
  for (size_t i = 0; i < pts.size(); ++i) raw.nodes.push_back({"n" + std::to_string(i), pts[i], std::nullopt});
  for (auto [a, b] : edges) raw.edges.emplace_back("n" + std::to_string(a), "n" + std::to_string(b));
  return validate(raw);
}

InputGraph random_graph(int n, std::uint64_t seed) {
  const auto pts = sanitize_general_position(testing::random_points(n, seed), seed);
  std::mt19937_64 rng(seed + 17);
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) edges.insert({static_cast<int>(rng() % static_cast<unsigned>(i)), i});
  for (int k = 0; k < n / 3; ++k) {
    const int a = static_cast<int>(rng() % static_cast<unsigned>(n));
    const int b = static_cast<int>(rng() % static_cast<unsigned>(n));
    if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
  }
  return make_graph(pts, {edges.begin(), edges.end()});
}

// Hand-built single-level bundle.
struct Manual {
  Mesh m{Rect{{-50, -50}, {50, 50}}};
  std::vector<Route> routes;

  int node(Point p, int index) {
    Vertex v;
    v.pos = p;
    v.kind = VertexKind::kNode;
    v.node = index;
    return m.add_vertex(v);
  }
  int junction(Point p) {
    Vertex v;
    v.pos = p;
    return m.add_vertex(v);
  }
  void route(int edge, int u, int v, std::vector<int> chain) {
    for (size_t i = 1; i < chain.size(); ++i) m.add_rail(chain[i - 1], chain[i]);
    routes.push_back(Route{edge, u, v, std::move(chain), 0.0});
  }
  LevelBundle bundle(int level, std::vector<int> nodes, std::vector<int> edges) {
    LevelBundle b;
    b.graph = {level, std::move(nodes), std::move(edges)};
    b.routed = RoutedMesh{m, routes, {}};
    recompute_lengths(b.routed);
    recompute_usage(b.routed);
    return b;
  }
};

TEST(LevelGraphs, AllOnTopLevel) {
  const InputGraph g = random_graph(10, 1);
  const auto levels = level_graphs(g, LevelAssignment(10, 1), 3);
  ASSERT_EQ(levels.size(), 3u);
  for (const auto& lg : levels) {
    EXPECT_EQ(lg.nodes.size(), 10u);
    EXPECT_EQ(static_cast<int>(lg.edges.size()), g.edge_count());
  }
}

TEST(LevelGraphs, OneNewNodePerLevel) {
  const InputGraph g = random_graph(6, 2);
  const auto levels = level_graphs(g, {3, 1, 6, 2, 5, 4}, 6);
  for (int i = 1; i <= 6; ++i) EXPECT_EQ(levels[static_cast<size_t>(i - 1)].nodes.size(), static_cast<size_t>(i));
}

TEST(LevelGraphs, NestedAndInduced) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const InputGraph g = random_graph(15, 100 + static_cast<std::uint64_t>(trial));
    LevelAssignment a(15);
    for (int& x : a) x = 1 + static_cast<int>(rng() % 4);
    const auto levels = level_graphs(g, a, 4);
    for (size_t i = 0; i < levels.size(); ++i) {
      const std::set<int> vs(levels[i].nodes.begin(), levels[i].nodes.end());
      if (i + 1 < levels.size()) {
        for (int v : levels[i].nodes) {
          EXPECT_TRUE(std::count(levels[i + 1].nodes.begin(), levels[i + 1].nodes.end(), v));
        }
      }
      std::set<int> induced;
      for (int e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edges()[static_cast<size_t>(e)];
        if (vs.count(u) && vs.count(v)) induced.insert(e);
      }
      EXPECT_EQ(std::set<int>(levels[i].edges.begin(), levels[i].edges.end()), induced);
    }
  }
}

LevelBundle bottom_bundle(const InputGraph& g, const ModConfig& cfg, int level) {
  const Mesh base = build_mesh_sim(g.positions());
  const double r = std::min(cfg.port_radius, 0.5 * max_port_radius(base));
  std::vector<int> nodes(static_cast<size_t>(g.node_count())), edges(static_cast<size_t>(g.edge_count()));
  for (size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<int>(i);
  for (size_t i = 0; i < edges.size(); ++i) edges[i] = static_cast<int>(i);
  return {{level, nodes, edges}, optimize_routes(route_edges(add_detours(base, r), g), cfg)};
}

TEST(DeriveLevelMesh, SameGraphIsNoOp) {
  const InputGraph g = random_graph(12, 3);
  const ModConfig cfg = default_mod_config(g.positions());
  const LevelBundle fine = bottom_bundle(g, cfg, 2);
  LevelGraph same = fine.graph;
  same.level = 1;
  const LevelBundle coarse = derive_level_mesh(fine, same);
  EXPECT_EQ(coarse.routed.mesh.rail_count(), fine.routed.mesh.rail_count());
  EXPECT_EQ(coarse.routed.mesh.vertex_count(), fine.routed.mesh.vertex_count());
  ASSERT_EQ(coarse.routed.routes.size(), fine.routed.routes.size());
  for (size_t i = 0; i < coarse.routed.routes.size(); ++i) {
    EXPECT_EQ(route_polyline(coarse.routed.mesh, coarse.routed.routes[i]),
              route_polyline(fine.routed.mesh, fine.routed.routes[i]));
  }
}

TEST(DeriveLevelMesh, EmptyNodeSetGivesEmptyMesh) {
  const InputGraph g = random_graph(8, 4);
  const ModConfig cfg = default_mod_config(g.positions());
  const LevelBundle coarse = derive_level_mesh(bottom_bundle(g, cfg, 2), LevelGraph{1, {}, {}});
  EXPECT_EQ(coarse.routed.mesh.vertex_count(), 0);
  EXPECT_EQ(coarse.routed.mesh.rail_count(), 0);
  EXPECT_TRUE(coarse.routed.routes.empty());
}

// a - b - c on one line with edges ab, bc, ac: the ac route has to bypass b.
struct ThreeInARow {
  InputGraph g = make_graph({{0, 0}, {10, 0}, {20, 0}}, {{0, 1}, {1, 2}, {0, 2}});
  ModConfig cfg;
  LevelBundle fine;
  ThreeInARow() {
    cfg = default_mod_config(g.positions());
    cfg.beta = 0.1;
    fine = bottom_bundle(g, cfg, 2);
  }
};

TEST(DeriveLevelMesh, HiddenNodeOctagonCollapses) {
  ThreeInARow t;
  const Route& ac = t.fine.routed.routes[2];
  ASSERT_EQ(ac.edge, 2);
  const Polyline before = route_polyline(t.fine.routed.mesh, ac);
  EXPECT_EQ(std::count(before.begin(), before.end(), Point{10, 0}), 0);

  const LevelBundle coarse = derive_level_mesh(t.fine, LevelGraph{1, {0, 2}, {2}});
  ASSERT_EQ(coarse.routed.routes.size(), 1u);
  const Polyline after = route_polyline(coarse.routed.mesh, coarse.routed.routes[0]);
  EXPECT_EQ(std::count(after.begin(), after.end(), Point{10, 0}), 1);
  EXPECT_TRUE(route_issues(coarse.routed).empty());
  EXPECT_TRUE(planarity_issues(coarse.routed.mesh).empty());
  for (int v : coarse.routed.mesh.vertex_ids()) EXPECT_NE(coarse.routed.mesh.vertex(v).owner, 1);
  EXPECT_EQ(coarse.routed.mesh.node_vertex(1), -1);

  const LevelBundle straight = simplify_routes(coarse, t.cfg);
  // Straight along y = 0 between the ports of the two visible ends.
  const Polyline simple = route_polyline(straight.routed.mesh, straight.routed.routes[0]);
  ASSERT_EQ(simple.size(), 4u);
  for (const Point& p : simple) EXPECT_EQ(p.y, 0.0);
  EXPECT_DOUBLE_EQ(polyline_length(simple), 20.0);
}

TEST(DeriveLevelMesh, AvoidHiddenKeepsDetour) {
  ThreeInARow t;
  LevelBundle coarse = derive_level_mesh(t.fine, LevelGraph{1, {0, 2}, {2}}, LevelOptions{true});
  coarse = simplify_routes(coarse, t.cfg);
  const Polyline pl = route_polyline(coarse.routed.mesh, coarse.routed.routes[0]);
  for (const Point& p : pl) EXPECT_FALSE(p == (Point{10, 0}));
  EXPECT_GT(polyline_length(pl), 20.0);
}

TEST(SimplifyRoutes, CollinearJunctionRemoved) {
  Manual b;
  const int a = b.node({0, 0}, 0), c = b.node({10, 0}, 1), j = b.junction({5, 0});
  b.route(0, 0, 1, {a, j, c});
  ModConfig cfg;
  cfg.beta = 1.0;
  const LevelBundle out = simplify_routes(b.bundle(1, {0, 1}, {0}), cfg);
  EXPECT_EQ(out.routed.routes[0].chain, (std::vector<int>{a, c}));
  EXPECT_FALSE(out.routed.mesh.vertex_alive(j));
}

TEST(SimplifyRoutes, BendNearForeignNodeKept) {
  Manual b;
  const int a = b.node({0, 0}, 0), c = b.node({10, 0}, 1), j = b.junction({5, 5});
  b.node({5, 0.1}, 2);
  b.route(0, 0, 1, {a, j, c});
  ModConfig cfg;
  cfg.beta = 1.0;
  cfg.alpha = 10.0;
  const LevelBundle out = simplify_routes(b.bundle(1, {0, 1, 2}, {0}), cfg);
  EXPECT_EQ(out.routed.routes[0].chain, (std::vector<int>{a, j, c}));

  cfg.beta = 0.05;
  const LevelBundle loose = simplify_routes(b.bundle(1, {0, 1, 2}, {0}), cfg);
  EXPECT_EQ(loose.routed.routes[0].chain, (std::vector<int>{a, c}));
}

TEST(SimplifyRoutes, SharedBendNeedsAllUsersOrNoInkGain) {
  // Two routes share a-j; only one turns at j towards c. Straightening that
  // one would keep a-j alive and add a-c, adding ink.
  Manual b;
  const int a = b.node({0, 0}, 0), c = b.node({10, 0}, 1), d = b.node({5, 10}, 2), j = b.junction({5, 3});
  b.route(0, 0, 1, {a, j, c});
  b.route(1, 0, 2, {a, j, d});
  ModConfig cfg;
  cfg.alpha = 5.0;
  const LevelBundle out = simplify_routes(b.bundle(1, {0, 1, 2}, {0, 1}), cfg);
  EXPECT_EQ(out.routed.routes[0].chain, (std::vector<int>{a, j, c}));
  EXPECT_EQ(out.routed.routes[1].chain, (std::vector<int>{a, j, d}));
}

TEST(SimplifyRoutes, RandomInstancesNeverGetWorse) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const InputGraph g = random_graph(18, 40 + seed);
    const ModConfig cfg = default_mod_config(g.positions());
    const LevelBundle fine = bottom_bundle(g, cfg, 2);
    std::mt19937_64 rng(seed);
    LevelAssignment a(18);
    for (int& x : a) x = 1 + static_cast<int>(rng() % 2);
    const auto graphs = level_graphs(g, a, 2);
    const LevelBundle coarse = derive_level_mesh(fine, graphs[0]);
    const LevelBundle simple = simplify_routes(coarse, cfg);
    ASSERT_EQ(simple.routed.routes.size(), coarse.routed.routes.size());
    for (size_t i = 0; i < simple.routed.routes.size(); ++i) {
      EXPECT_LE(simple.routed.routes[i].length, coarse.routed.routes[i].length + 1e-9);
    }
    EXPECT_LE(total_ink(simple.routed), total_ink(coarse.routed) + 1e-9);
    EXPECT_TRUE(route_issues(simple.routed).empty());
    EXPECT_TRUE(planarity_issues(simple.routed.mesh).empty());
    // No route interior touches a visible node.
    const Mesh& m = simple.routed.mesh;
    for (const Route& r : simple.routed.routes) {
      for (size_t k = 1; k < r.chain.size(); ++k) {
        const Segment s{m.vertex(r.chain[k - 1]).pos, m.vertex(r.chain[k]).pos};
        for (int v : graphs[0].nodes) {
          if (v == r.u || v == r.v) continue;
          EXPECT_GT(point_seg_dist(g.node(v).pos, s), 0.0);
        }
      }
    }
  }
}

TEST(Transitions, IdenticalRoutesGiveStaticFrames) {
  Manual b;
  const int a = b.node({0, 0}, 0), c = b.node({10, 0}, 1), j = b.junction({5, 5});
  b.route(0, 0, 1, {a, j, c});
  const LevelBundle lo = b.bundle(1, {0, 1}, {0});
  const LevelBundle hi = b.bundle(2, {0, 1}, {0});
  const TransitionSet ts = build_transitions(lo, hi);
  ASSERT_EQ(ts.pairs.size(), 1u);
  for (double t : {0.0, 0.3, 0.5, 1.0}) EXPECT_EQ(interpolate(ts.pairs[0], t), (Polyline{{0, 0}, {5, 5}, {10, 0}}));
}

TEST(Transitions, StraightToLShape) {
  Manual lo_b, hi_b;
  {
    const int a = lo_b.node({0, 0}, 0), c = lo_b.node({10, 10}, 1);
    lo_b.route(0, 0, 1, {a, c});
  }
  {
    const int a = hi_b.node({0, 0}, 0), c = hi_b.node({10, 10}, 1), j = hi_b.junction({10, 0});
    hi_b.route(0, 0, 1, {a, j, c});
  }
  const TransitionSet ts = build_transitions(lo_b.bundle(1, {0, 1}, {0}), hi_b.bundle(2, {0, 1}, {0}));
  const TransitionPair& p = ts.pairs[0];
  EXPECT_EQ(p.from, (Polyline{{0, 0}, {5, 5}, {10, 10}}));
  EXPECT_EQ(p.to, (Polyline{{0, 0}, {10, 0}, {10, 10}}));
  EXPECT_EQ(interpolate(p, 0.0), p.from);
  EXPECT_EQ(interpolate(p, 1.0), p.to);
  EXPECT_EQ(interpolate(p, 0.5), (Polyline{{0, 0}, {7.5, 2.5}, {10, 10}}));
  EXPECT_TRUE(control_covers(p.from, {{0, 0}, {10, 10}}, 1e-12));
  EXPECT_TRUE(control_covers(p.to, {{0, 0}, {10, 0}, {10, 10}}, 1e-12));
  EXPECT_FALSE(control_covers(p.to, {{0, 0}, {10, 10}}, 1e-12));
}

TEST(Transitions, MissingEdgeThrows) {
  Manual b;
  const int a = b.node({0, 0}, 0), c = b.node({10, 0}, 1);
  b.route(0, 0, 1, {a, c});
  const LevelBundle lo = b.bundle(1, {0, 1}, {0, 1});
  EXPECT_THROW(build_transitions(lo, b.bundle(2, {0, 1}, {0})), ValidationError);
}

// Closed segment meets closed rect iff an endpoint is inside or the segment
// meets one of the four sides.
bool meets_oracle(const Segment& s, const Rect& r) {
  if (r.contains(s.a) || r.contains(s.b)) return true;
  const Point c[4] = {r.min, {r.max.x, r.min.y}, r.max, {r.min.x, r.max.y}};
  for (int i = 0; i < 4; ++i) {
    if (seg_seg_dist(s, {c[i], c[(i + 1) % 4]}) == 0.0) return true;
  }
  return false;
}

TEST(TileMetrics, RectTestMatchesOracle) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> u(0, 20);
  for (int i = 0; i < 3000; ++i) {
    const Segment s{{static_cast<double>(u(rng)), static_cast<double>(u(rng))},
                    {static_cast<double>(u(rng)), static_cast<double>(u(rng))}};
    if (s.a == s.b) continue;
    const Rect r{{5, 5}, {12, 9}};
    EXPECT_EQ(segment_meets_rect(s, r), meets_oracle(s, r)) << s.a.x << "," << s.a.y << " " << s.b.x << "," << s.b.y;
  }
}

TEST(TileMetrics, SingleNode) {
  Manual b;
  b.node({3, 3}, 0);
  const std::vector<Point> pts{{3, 3}};
  const TileTree t = build_tile_tree(pts, 1, TileMode::k2D);
  const LevelTileMetrics tm = tile_metrics(b.bundle(1, {0}, {}), t);
  ASSERT_EQ(tm.tiles.size(), 1u);
  EXPECT_EQ(tm.tiles[0].visible, 1);
  EXPECT_EQ(tm.max_viewport, 1);
}

TEST(TileMetrics, CrossingsMatchOracle) {
  const InputGraph g = random_graph(15, 9);
  const ModConfig cfg = default_mod_config(g.positions());
  const LevelBundle b = bottom_bundle(g, cfg, 3);
  const TileTree t = build_tile_tree(g.positions(), 3, TileMode::k2D);
  const LevelTileMetrics tm = tile_metrics(b, t);
  ASSERT_EQ(tm.tiles.size(), 16u);
  for (const TileStat& ts : tm.tiles) {
    int expect = 0;
    for (int r : b.routed.mesh.rail_ids()) expect += meets_oracle(b.routed.mesh.segment(r), t.tiles[static_cast<size_t>(ts.tile)].rect);
    EXPECT_EQ(ts.rail_crossings, expect);
  }
  EXPECT_EQ(tm.viewports.size(), 9u);
}

TEST(TileMetrics, QuotaAndViewportBoundsFromPipeline) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const InputGraph g = random_graph(16, 70 + seed);
    BuildConfig cfg;
    cfg.levels = 2;
    cfg.seed = seed;
    const BuildResult r = run_pipeline(g, cfg);
    for (const LevelTileMetrics& tm : r.tiles) {
      if (tm.level >= cfg.levels) continue;
      // Recount from positions.
      for (const TileStat& ts : tm.tiles) {
        int count = 0;
        for (int v : r.levels[static_cast<size_t>(tm.level - 1)].graph.nodes) {
          count += r.tree.point_tile[static_cast<size_t>(tm.level - 1)][static_cast<size_t>(v)] == ts.tile;
        }
        EXPECT_EQ(ts.visible, count);
        EXPECT_LE(ts.visible, r.quota);
      }
      EXPECT_LE(tm.max_viewport, 4 * r.quota);
    }
  }
}

}  // namespace
}  // namespace gmaps
