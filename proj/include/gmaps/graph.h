#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gmaps/geometry.h"

namespace gmaps {

// Unvalidated graph description, as read from disk.
struct RawNode {
  std::string id;
  Point pos;
  std::optional<double> rank;
};

struct RawGraph {
  std::vector<RawNode> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
};

struct Node {
  std::string id;
  Point pos;
  std::optional<double> rank;
};

// Undirected graph with distinct node positions. Nodes are addressed by index;
// edges are stored with the smaller index first, in input order.
class InputGraph {
 public:
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Node& node(int i) const { return nodes_[static_cast<size_t>(i)]; }

  std::optional<int> index_of(const std::string& id) const;
  std::vector<Point> positions() const;
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

  // Replaces node positions (used by the general-position sanitizer).
  void set_positions(const std::vector<Point>& pts);

 private:
  friend InputGraph validate(const RawGraph& raw);

  std::vector<Node> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
  std::unordered_map<std::string, int> index_;
};

// Rank per node index; higher means more important.
using Ranking = std::vector<double>;

// Checks ids, positions and edges. Throws ValidationError naming the first
// violation.
InputGraph validate(const RawGraph& raw);

// Power iteration on the graph with every edge taken as two arcs. Dangling
// nodes spread their mass uniformly.
Ranking pagerank(const InputGraph& g, double damping = 0.85, double eps = 1e-10);

// Explicit ranks when every node carries one, PageRank otherwise.
Ranking resolve_ranks(const InputGraph& g, double damping = 0.85, double eps = 1e-10);

Rect bounding_rect(const InputGraph& g);

double min_pairwise_distance(std::span<const Point> pts);
double mean_nearest_neighbor_distance(std::span<const Point> pts);

}  // namespace gmaps
