#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gmaps/geometry.h"
#include "gmaps/graph.h"

namespace gmaps {

// 2D splits every tile into a 2x2 grid; 1D splits only along x.
enum class TileMode : std::uint8_t { k1D, k2D };

TileMode parse_tile_mode(const std::string& s);
const char* to_string(TileMode m);

struct Tile {
  int level = 1;  // 1 = root
  int ix = 0;
  int iy = 0;
  Rect rect;
  int parent = -1;
  std::vector<int> children;
  std::vector<int> points;  // indices of points inside, ascending
};

struct TileTree {
  int height = 1;
  TileMode mode = TileMode::k2D;
  Rect root;
  int point_count = 0;
  std::vector<Tile> tiles;
  std::vector<std::vector<int>> levels;      // levels[z-1]: tile ids, row-major
  std::vector<std::vector<int>> point_tile;  // point_tile[z-1][p]: tile containing p

  int columns(int level) const;
  int rows(int level) const;
  // Tile id at grid position (ix, iy) of a level.
  int at(int level, int ix, int iy) const;
};

// Tiles are half-open on their max edges, except along the root's max edges.
TileTree build_tile_tree(std::span<const Point> pts, int height, TileMode mode);
TileTree build_tile_tree(std::span<const Point> pts, const Rect& root, int height, TileMode mode);

struct FlowArc {
  int from = 0;
  int to = 0;
  int cap = 0;
  long long cost = 0;
};

// Source feeds the root for free and every other tile through unit arcs of
// marginal cost 1, 3, 5, ... Non-leaf tiles pass at most Q units; leaves drain
// into the sink with capacity equal to their point count. Tiles without points
// are left out.
struct FlowNetwork {
  int node_count = 2;
  int source = 0;
  int sink = 1;
  int supply = 0;
  std::vector<FlowArc> arcs;
  int root_arc = -1;
  std::vector<int> split_arc;             // per tile, -1 for leaves and empty tiles
  std::vector<int> sink_arc;              // per tile, -1 for non-leaves and empty tiles
  std::vector<int> tree_arc;              // per tile: arc from the parent, -1 if none
  std::vector<std::vector<int>> dashed;   // per tile: its unit source arcs
};

FlowNetwork build_flow_network(const TileTree& t, int quota);

struct FlowResult {
  std::vector<int> flow;  // per arc
  int value = 0;
  long long cost = 0;
};

// Successive shortest augmenting paths with node potentials: a maximum flow of
// minimum cost.
FlowResult solve_mcmf(const FlowNetwork& net);

// Units entering each tile straight from the source.
std::vector<int> dashed_inflow(const TileTree& t, const FlowNetwork& net, const FlowResult& f);

// Level per point, 1..height.
using LevelAssignment = std::vector<int>;

// Deepest level first, each tile hands its source inflow to its lowest-ranked
// unassigned points (ties: higher index first). Throws InfeasibleError if the
// flow does not reach every point.
LevelAssignment assignment_from_flow(const TileTree& t, const FlowNetwork& net,
                                     const FlowResult& f, const Ranking& ranks);

// Points of each tile visible at the tile's own level.
std::vector<int> visible_counts(const TileTree& t, const LevelAssignment& g);

// Per tile: points that first become visible there when zooming in from the
// parent. Zero for the root.
std::vector<int> tile_deltas(const TileTree& t, const LevelAssignment& g);

long long objective_f(const TileTree& t, const LevelAssignment& g);

// Non-leaf tiles whose visible count exceeds the quota.
std::vector<int> quota_violations(const TileTree& t, const LevelAssignment& g, int quota);

// Pairs (q, q') with rank(q) > rank(q') but g(q) > g(q').
std::vector<std::pair<int, int>> check_rank_condition(const LevelAssignment& g, const Ranking& ranks);

// Minimum F over every assignment meeting the quota; nullopt if none does.
// Exhaustive, so limited to at most 12 points and height 3.
std::optional<long long> brute_force_optimum(const TileTree& t, int quota);

struct LevelSolution {
  bool feasible = false;  // the flow reaches every point
  LevelAssignment g;
  long long cost = 0;
  std::vector<std::pair<int, int>> rank_violations;

  bool valid() const { return feasible && rank_violations.empty(); }
};

LevelSolution solve_levels(const TileTree& t, int quota, const Ranking& ranks);

// Smallest Q in [1, n] whose solution is feasible and satisfies the rank
// condition. Binary search finds the smallest flow-feasible Q, then a scan
// upward finds the first rank-valid one.
std::optional<int> min_quota(const TileTree& t, const Ranking& ranks);

// Text dump: "n <nodes> <arcs>", then "a <from> <to> <cap> <cost> <flow>".
std::string to_dimacs(const FlowNetwork& net, const FlowResult* f = nullptr);

}  // namespace gmaps
