#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmaps/competition_mesh.h"
#include "gmaps/graph.h"
#include "gmaps/levels.h"
#include "gmaps/routing.h"
#include "gmaps/zoom.h"

namespace gmaps {

struct BuildConfig {
  int levels = 3;
  std::optional<int> quota;  // unset: smallest valid quota
  double alpha = 45.0;
  std::optional<double> beta;         // default 0.25 * min node distance
  std::optional<double> thin_width;   // default 0.1 * mean nearest-neighbour distance
  std::optional<double> port_radius;  // default 0.2 * min node distance, clamped to fit
  int median_iters = 20;
  TieRule tie = TieRule::kHorizontalWins;
  TileMode mode = TileMode::k2D;
  std::uint64_t seed = 1;
  bool avoid_hidden_nodes = false;
};

struct BuildResult {
  InputGraph graph;  // positions after the general-position sanitizer
  Ranking ranks;
  Mesh competition;
  ModConfig mod;
  TileTree tree;
  int quota = 0;
  LevelAssignment assignment;
  long long objective = 0;
  std::vector<LevelBundle> levels;  // levels[i-1] is level i
  std::vector<TransitionSet> transitions;  // transitions[i-1]: level i to i+1
  std::vector<LevelTileMetrics> tiles;
};

// validate'd graph in, every level out. Throws InfeasibleError when the quota
// admits no assignment, or when the assignment breaks the rank condition (the
// message lists the offending node pairs).
BuildResult run_pipeline(const InputGraph& g, const BuildConfig& cfg);

}  // namespace gmaps
