#include "gmaps/pipeline.h"

#include <algorithm>
#include <string>

#include "gmaps/error.h"

namespace gmaps {

namespace {

std::string pair_list(const InputGraph& g, const std::vector<std::pair<int, int>>& pairs) {
  std::string s;
  const size_t shown = std::min<size_t>(pairs.size(), 10);
  for (size_t i = 0; i < shown; ++i) {
    if (i) s += ", ";
    s += "(" + g.node(pairs[i].first).id + ", " + g.node(pairs[i].second).id + ")";
  }
  if (shown < pairs.size()) s += ", ... " + std::to_string(pairs.size() - shown) + " more";
  return s;
}

}  // namespace

BuildResult run_pipeline(const InputGraph& input, const BuildConfig& cfg) {
  if (cfg.levels < 1) throw ValidationError("levels must be at least 1");
  if (cfg.quota && *cfg.quota < 1) throw InfeasibleError("infeasible: quota must be at least 1");

  BuildResult out;
  out.graph = input;
  out.ranks = resolve_ranks(input);
  const std::vector<Point> pts = sanitize_general_position(input.positions(), cfg.seed);
  out.graph.set_positions(pts);
  const InputGraph& g = out.graph;

  out.competition = build_mesh_sim(pts, cfg.tie);
  out.mod = default_mod_config(pts);
  out.mod.alpha = cfg.alpha;
  out.mod.median_iters = cfg.median_iters;
  if (cfg.beta) out.mod.beta = *cfg.beta;
  if (cfg.thin_width) out.mod.thin_width = *cfg.thin_width;
  if (cfg.port_radius) {
    out.mod.port_radius = *cfg.port_radius;
  } else {
    out.mod.port_radius = std::min(out.mod.port_radius, 0.5 * max_port_radius(out.competition));
  }
  const Mesh detoured =
      g.node_count() >= 2 ? add_detours(out.competition, out.mod.port_radius) : out.competition;
  const RoutedMesh bottom = optimize_routes(route_edges(detoured, g), out.mod);

  out.tree = build_tile_tree(pts, cfg.levels, cfg.mode);
  if (cfg.quota) {
    out.quota = *cfg.quota;
  } else {
    const auto q = min_quota(out.tree, out.ranks);
    if (!q) throw InfeasibleError("infeasible: no quota yields a rank-consistent assignment");
    out.quota = *q;
  }
  const LevelSolution sol = solve_levels(out.tree, out.quota, out.ranks);
  if (!sol.feasible) {
    throw InfeasibleError("infeasible: no feasible visualization at quota " + std::to_string(out.quota));
  }
  if (!sol.rank_violations.empty()) {
    throw InfeasibleError("infeasible: rank condition fails at quota " + std::to_string(out.quota) +
                          " for " + std::to_string(sol.rank_violations.size()) +
                          " pair(s) (higher, lower): " + pair_list(g, sol.rank_violations));
  }
  out.assignment = sol.g;
  out.objective = objective_f(out.tree, out.assignment);

  const std::vector<LevelGraph> graphs = level_graphs(g, out.assignment, cfg.levels);
  out.levels.resize(static_cast<size_t>(cfg.levels));
  out.levels.back() = LevelBundle{graphs.back(), bottom};
  const LevelOptions opt{cfg.avoid_hidden_nodes};
  for (int i = cfg.levels - 1; i >= 1; --i) {
    out.levels[static_cast<size_t>(i - 1)] = simplify_routes(
        derive_level_mesh(out.levels[static_cast<size_t>(i)], graphs[static_cast<size_t>(i - 1)], opt),
        out.mod);
  }
  for (int i = 1; i < cfg.levels; ++i) {
    out.transitions.push_back(
        build_transitions(out.levels[static_cast<size_t>(i - 1)], out.levels[static_cast<size_t>(i)]));
  }
  for (const LevelBundle& b : out.levels) out.tiles.push_back(tile_metrics(b, out.tree));
  return out;
}

}  // namespace gmaps
