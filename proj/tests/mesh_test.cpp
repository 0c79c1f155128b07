#include "gmaps/competition_mesh.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gmaps/error.h"
#include "support.h"

namespace gmaps {
namespace {

const double kStretchBound = 2.0 + std::sqrt(2.0);

struct RayExtent {
  int node;
  Point dir;
  Point src;
  Point tip;
};

// Walks from each node along collinear rails. In general position no two
// rays share a line, so the walk ends exactly at the ray's tip.
std::vector<RayExtent> ray_extents(const Mesh& m) {
  std::vector<RayExtent> out;
  const Point dirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int v : m.vertex_ids()) {
    if (m.vertex(v).kind != VertexKind::kNode) continue;
    for (const Point d : dirs) {
      int cur = v;
      for (bool moved = true; moved;) {
        moved = false;
        for (int r : m.incident(cur)) {
          const int w = m.other_end(r, cur);
          const Point step = m.vertex(w).pos - m.vertex(cur).pos;
          const bool along = (d.x != 0 && step.y == 0 && step.x * d.x > 0) ||
                             (d.y != 0 && step.x == 0 && step.y * d.y > 0);
          if (along) {
            cur = w;
            moved = true;
            break;
          }
        }
      }
      if (cur != v) out.push_back({m.vertex(v).node, d, m.vertex(v).pos, m.vertex(cur).pos});
    }
  }
  return out;
}

double reach(const RayExtent& r, Point p) { return dist_m(r.src, p); }

bool covers(const RayExtent& r, Point p) {
  return std::min(r.src.x, r.tip.x) <= p.x && p.x <= std::max(r.src.x, r.tip.x) &&
         std::min(r.src.y, r.tip.y) <= p.y && p.y <= std::max(r.src.y, r.tip.y);
}

// Checks the growth rule against the final ray extents: every tip off the
// boundary lies on a perpendicular ray that got there first (horizontal wins
// ties).
void expect_growth_rule(const Mesh& m) {
  const auto rays = ray_extents(m);
  for (const RayExtent& r : rays) {
    if (m.boundary().on_boundary(r.tip)) continue;
    bool stopped = false;
    for (const RayExtent& o : rays) {
      if ((o.dir.x == 0) == (r.dir.x == 0) || !covers(o, r.tip)) continue;
      const double to = reach(o, r.tip);
      const double tr = reach(r, r.tip);
      if (to < tr || (to == tr && r.dir.x == 0)) stopped = true;
    }
    EXPECT_TRUE(stopped) << "ray of node " << r.node << " stops at (" << r.tip.x << ", "
                         << r.tip.y << ") without a cause";
  }
}

void expect_monotone_witness(const Mesh& m, int v, int quadrant) {
  const std::vector<int> path = monotone_path_witness(m, v, quadrant);
  ASSERT_FALSE(path.empty());
  EXPECT_EQ(path.front(), v);
  const double sx = (quadrant == 1 || quadrant == 4) ? 1 : -1;
  const double sy = (quadrant == 1 || quadrant == 2) ? 1 : -1;
  for (size_t i = 1; i < path.size(); ++i) {
    ASSERT_TRUE(m.find_rail(path[i - 1], path[i]));
    const Point d = m.vertex(path[i]).pos - m.vertex(path[i - 1]).pos;
    EXPECT_GE(d.x * sx, 0.0);
    EXPECT_GE(d.y * sy, 0.0);
  }
  const Point end = m.vertex(path.back()).pos;
  const Rect& b = m.boundary();
  EXPECT_TRUE(end.x == (sx > 0 ? b.max.x : b.min.x) || end.y == (sy > 0 ? b.max.y : b.min.y));
}

void expect_mesh_invariants(const Mesh& m, int n) {
  const MeshReport r = mesh_report(m);
  EXPECT_EQ(r.nodes, n);
  EXPECT_LE(r.junctions, 4 * n);
  EXPECT_LE(r.straight_runs, 4 * n);
  EXPECT_TRUE(r.axis_aligned);
  EXPECT_TRUE(r.planar);
  EXPECT_LE(stretch_factor(m), kStretchBound + 1e-9);
}

const std::vector<Point> kTwo{{0, 0}, {4, 2}};

TEST(MeshSim, TwoPointRace) {
  const Mesh m = build_mesh_sim(kTwo);
  EXPECT_EQ(m.junction_count(), 2);
  EXPECT_EQ(m.rail_count(), 4);
  const std::vector<std::array<double, 4>> want{
      {0, 0, 0, 2}, {0, 0, 4, 0}, {0, 2, 4, 2}, {4, 0, 4, 2}};
  EXPECT_EQ(rail_signature(m), want);
  EXPECT_NEAR(stretch_factor(m), 6.0 / std::sqrt(20.0), 1e-12);
  EXPECT_NEAR(stretch_factor(m), 1.3416, 1e-4);
}

TEST(MeshSim, TwoPointsWithinNBound) {
  const std::vector<Point> pts{{1, 7}, {5, 2}};
  const Mesh m = build_mesh_sim(pts);
  EXPECT_LE(m.junction_count(), 8);
  EXPECT_LE(m.rail_count(), 8);
}

TEST(MeshSim, Errors) {
  EXPECT_THROW(build_mesh_sim(std::vector<Point>{{0, 0}}), GeometryError);
  EXPECT_THROW(build_mesh_sim(std::vector<Point>{{0, 0}, {0, 0}}), GeometryError);
}

TEST(MeshSim, CollinearRaysMeetHeadOn) {
  // Equal y: the facing horizontal rays meet halfway and both stop.
  const std::vector<Point> pts{{0, 0}, {4, 0}, {2, 3}};
  const Mesh m = build_mesh_sim(pts);
  EXPECT_TRUE(mesh_report(m).planar);
  EXPECT_LE(stretch_factor(m), kStretchBound + 1e-9);
}

TEST(MeshSim, RandomInstancesSatisfyInvariants) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto pts = testing::random_points(50, seed);
    const Mesh m = build_mesh_sim(pts);
    expect_mesh_invariants(m, 50);
    expect_growth_rule(m);
  }
}

TEST(MeshSim, TieRulesAllProduceValidMeshes) {
  // A grid forces simultaneous perpendicular hits.
  std::vector<Point> pts;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) pts.push_back({i * 2.0 + (j % 2), j * 2.0 + (i % 2)});
  }
  for (TieRule t : {TieRule::kHorizontalWins, TieRule::kVerticalWins, TieRule::kLowerIndexWins}) {
    const Mesh m = build_mesh_sim(pts, t);
    EXPECT_TRUE(mesh_report(m).planar) << to_string(t);
    EXPECT_LE(stretch_factor(m), kStretchBound + 1e-9) << to_string(t);
  }
  EXPECT_EQ(parse_tie_rule("vertical"), TieRule::kVerticalWins);
  EXPECT_THROW(parse_tie_rule("diagonal"), ValidationError);
}

TEST(MeshFast, TwoPointsMatchSimulation) {
  EXPECT_EQ(rail_signature(build_mesh_fast(kTwo)), rail_signature(build_mesh_sim(kTwo)));
}

TEST(MeshFast, TopRayStopsAtCloserConeNeighbour) {
  // a sits in the steep right cone and is closer to w's horizontal line than
  // b in the steep left cone.
  const Point w{0, 0}, a{1, 2}, b{-1, 3};
  const std::vector<Point> pts{w, a, b};
  ASSERT_TRUE(in_general_position(pts));
  const Mesh m = build_mesh_fast(pts);
  bool found = false;
  for (const auto& s : rail_signature(m)) {
    if (s[0] == 0 && s[1] == 0 && s[2] == 0) {
      EXPECT_EQ(s[3], a.y);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(rail_signature(m), rail_signature(build_mesh_sim(pts)));
}

TEST(MeshFast, BoundaryRayStopsAtEarlierTip) {
  // t is topmost, so its left ray runs along R(P); a's up ray reaches the top
  // edge at time 2, before t's ray gets to x = -5 at time 5.
  const std::vector<Point> pts{{0, 10}, {-5, 8}, {-9, 2}};
  const Mesh m = build_mesh_fast(pts);
  EXPECT_EQ(rail_signature(m), rail_signature(build_mesh_sim(pts)));
  for (const auto& s : rail_signature(m)) {
    EXPECT_FALSE(s[1] == 10 && s[3] == 10 && s[0] < -5) << s[0] << " " << s[2];
  }
}

TEST(MeshFast, RequiresGeneralPosition) {
  EXPECT_THROW(build_mesh_fast(std::vector<Point>{{0, 0}, {4, 0}, {2, 3}}), GeometryError);
}

TEST(MeshFast, SanitizedInstancesSatisfyInvariants) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto pts = sanitize_general_position(testing::random_points(50, seed), seed);
    const Mesh m = build_mesh_fast(pts);
    expect_mesh_invariants(m, 50);
    for (int v = 0; v < 50; ++v) {
      for (int q = 1; q <= 4; ++q) expect_monotone_witness(m, v, q);
    }
  }
}

TEST(ConeIndex, Membership) {
  EXPECT_EQ(cone_index({0, 0}, {2, 1}), 0);
  EXPECT_EQ(cone_index({0, 0}, {1, 0}), 0);
  EXPECT_EQ(cone_index({0, 0}, {1, 1}), 1);
  EXPECT_EQ(cone_index({0, 0}, {0, 1}), 2);
  EXPECT_EQ(cone_index({0, 0}, {-1, 1}), 3);
  EXPECT_EQ(cone_index({0, 0}, {-1, 0}), 4);
  EXPECT_EQ(cone_index({0, 0}, {-1, -1}), 5);
  EXPECT_EQ(cone_index({0, 0}, {0, -1}), 6);
  EXPECT_EQ(cone_index({0, 0}, {1, -1}), 7);
}

TEST(ConeIndex, MatchesAngle) {
  const auto pts = testing::random_points(300, 3);
  for (size_t i = 1; i < pts.size(); ++i) {
    const Point d = pts[i] - pts[0];
    double deg = std::atan2(d.y, d.x) * 180.0 / M_PI;
    if (deg < 0) deg += 360.0;
    EXPECT_EQ(cone_index(pts[0], pts[i]), static_cast<int>(deg / 45.0));
  }
}

TEST(ConeNeighbors, NearestWinsAndSinglePoint) {
  const std::vector<Point> pts{{0, 0}, {2, 1}, {3, 1}};
  const ConeNeighborTable t = cone_neighbors(pts);
  EXPECT_EQ(t.nearest[0][0], 1);
  const ConeNeighborTable one = cone_neighbors(std::vector<Point>{{5, 5}});
  for (const auto& e : one.nearest[0]) EXPECT_FALSE(e);
}

TEST(ConeNeighbors, MatchesScan) {
  const auto pts = testing::random_points(60, 11);
  const ConeNeighborTable t = cone_neighbors(pts);
  for (size_t i = 0; i < pts.size(); ++i) {
    for (int c = 0; c < 8; ++c) {
      double best = 1e300;
      for (size_t j = 0; j < pts.size(); ++j) {
        if (i != j && cone_index(pts[i], pts[j]) == c) best = std::min(best, dist_m(pts[i], pts[j]));
      }
      const auto& e = t.nearest[i][static_cast<size_t>(c)];
      if (best == 1e300) {
        EXPECT_FALSE(e);
      } else {
        ASSERT_TRUE(e);
        EXPECT_EQ(dist_m(pts[i], pts[static_cast<size_t>(*e)]), best);
      }
    }
  }
}

TEST(DeltaY, Examples) {
  EXPECT_EQ(delta_y(std::vector<Point>{{0, 0}, {1, 1}, {2, 1}, {3, 4}}), 1.0);
  EXPECT_EQ(delta_y(std::vector<Point>{{0, 0}, {1, 10}}), 10.0);
  EXPECT_THROW(delta_y(std::vector<Point>{{0, 1}, {1, 1}}), GeometryError);
}

TEST(DeltaY, MatchesAllPairs) {
  const auto pts = testing::random_points(100, 5);
  double best = 1e300;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = 0; j < pts.size(); ++j) {
      if (pts[i].y != pts[j].y) best = std::min(best, std::abs(pts[i].y - pts[j].y));
    }
  }
  EXPECT_EQ(delta_y(pts), best);
}

TEST(Sanitize, LeavesGeneralPositionAlone) {
  EXPECT_EQ(sanitize_general_position(kTwo, 1), kTwo);
}

TEST(Sanitize, BreaksDegeneraciesWithinBudget) {
  const std::vector<Point> grid{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}};
  ASSERT_FALSE(in_general_position(grid));
  const auto out = sanitize_general_position(grid, 42);
  EXPECT_TRUE(in_general_position(out));
  const double budget = 1e-7 * bounding_rect(grid).diagonal();
  for (size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LE(std::abs(out[i].x - grid[i].x), budget);
    EXPECT_LE(std::abs(out[i].y - grid[i].y), budget);
  }
  EXPECT_EQ(out, sanitize_general_position(grid, 42));
}

TEST(Witness, TwoPointMesh) {
  const Mesh m = build_mesh_sim(kTwo);
  expect_monotone_witness(m, m.node_vertex(0), 1);
  // (0,0) is the bottom-left corner; quadrant 3 points outside.
  EXPECT_EQ(monotone_path_witness(m, m.node_vertex(0), 3), std::vector<int>{m.node_vertex(0)});
}

TEST(Witness, RandomSimulationMeshes) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Mesh m = build_mesh_sim(testing::random_points(50, seed));
    for (int v = 0; v < 50; ++v) {
      for (int q = 1; q <= 4; ++q) expect_monotone_witness(m, v, q);
    }
  }
}

TEST(Stretch, SingleNodeIsZero) {
  Mesh m(Rect{{0, 0}, {1, 1}});
  Vertex v;
  v.kind = VertexKind::kNode;
  v.node = 0;
  m.add_vertex(v);
  EXPECT_EQ(stretch_factor(m), 0.0);
}

TEST(Stretch, DisconnectedThrows) {
  Mesh m(Rect{{0, 0}, {1, 1}});
  for (int i = 0; i < 2; ++i) {
    Vertex v;
    v.kind = VertexKind::kNode;
    v.node = i;
    v.pos = {static_cast<double>(i), 0};
    m.add_vertex(v);
  }
  EXPECT_THROW(stretch_factor(m), MeshError);
}

}  // namespace
}  // namespace gmaps
