#pragma once

#include <vector>

#include "gmaps/graph.h"
#include "gmaps/routing.h"
#include "gmaps/zoom.h"

namespace gmaps {

struct LevelGraph {
  int level = 1;
  std::vector<int> nodes;  // node indices, ascending
  std::vector<int> edges;  // indices into InputGraph::edges(), ascending
};

// Level i keeps the nodes with g <= i and every edge between them.
std::vector<LevelGraph> level_graphs(const InputGraph& g, const LevelAssignment& a, int k);

struct LevelBundle {
  LevelGraph graph;
  RoutedMesh routed;
};

struct LevelOptions {
  // Keep detour octagons of hidden nodes so coarser routes still bypass their
  // positions. Off: only visible nodes are avoided.
  bool avoid_hidden_nodes = false;
};

// Coarser bundle from a finer one: routes of absent edges are dropped, hidden
// nodes become plain junctions and unused rails are pruned. Unless hidden
// nodes are avoided, each hidden node's octagon collapses: a route bypassing
// it goes port -> former node -> port instead.
LevelBundle derive_level_mesh(const LevelBundle& finer, const LevelGraph& coarser,
                              const LevelOptions& opt = {});

LevelBundle simplify_routes(LevelBundle b, const ModConfig& cfg);

// Control polylines for one edge: the coarser route and the finer one, both
// sampled at the union of their arc-length breakpoints.
struct TransitionPair {
  int edge = -1;
  Polyline from;
  Polyline to;
};

struct TransitionSet {
  int from_level = 1;
  std::vector<TransitionPair> pairs;  // by edge index
};

// Throws ValidationError if an edge of the coarser level has no route in
// either bundle.
TransitionSet build_transitions(const LevelBundle& coarse, const LevelBundle& fine);

// Pointwise linear interpolation; t = 0 and t = 1 return the controls exactly.
Polyline interpolate(const TransitionPair& p, double t);

// True if `stored` appears in `control` as a subsequence with identical first
// and last points, and every other control point lies on `stored` within tol.
bool control_covers(const Polyline& control, const Polyline& stored, double tol);

struct TileStat {
  int tile = -1;
  int visible = 0;         // nodes of the level inside the tile
  int rail_crossings = 0;  // rails meeting the closed tile rect
};

struct ViewportStat {
  int ix = 0;  // lower-left tile of the window
  int iy = 0;
  int visible = 0;
};

struct LevelTileMetrics {
  int level = 1;
  std::vector<TileStat> tiles;          // level tiles in row-major order
  std::vector<ViewportStat> viewports;  // 2x2 windows (2x1 in 1D), or the lone tile
  int max_tile = 0;
  int max_viewport = 0;
};

// Node membership follows t.point_tile, so t must be built over the graph's
// node positions in index order.
LevelTileMetrics tile_metrics(const LevelBundle& b, const TileTree& t);

// Closed segment / closed rect intersection test.
bool segment_meets_rect(const Segment& s, const Rect& r);

}  // namespace gmaps
