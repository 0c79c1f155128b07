#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gmaps/geometry.h"

namespace gmaps {

enum class VertexKind : std::uint8_t { kNode, kJunction, kBoundary };

const char* to_string(VertexKind k);

struct Vertex {
  Point pos;
  VertexKind kind = VertexKind::kJunction;
  // Graph node index for kNode vertices.
  int node = -1;
  // Graph node whose detour polygon this vertex belongs to, or -1.
  int owner = -1;
  bool port = false;
};

struct Rail {
  int a = -1;
  int b = -1;
  double length = 0.0;
};

// Planar straight-line graph over node vertices and junctions. Ids are stable:
// removing a vertex or rail leaves a hole rather than renumbering.
class Mesh {
 public:
  Mesh() = default;
  explicit Mesh(Rect boundary) : boundary_(boundary) {}

  const Rect& boundary() const { return boundary_; }

  int add_vertex(const Vertex& v);
  // Adds rail a-b, or returns the existing one.
  int add_rail(int a, int b);
  void remove_rail(int r);
  // The vertex must have no incident rails.
  void remove_vertex(int v);
  void move_vertex(int v, Point p);
  // Turns a node vertex into a plain junction.
  void demote_node(int v);
  Vertex& mutable_vertex(int v) { return vertices_[static_cast<size_t>(v)]; }

  std::optional<int> find_rail(int a, int b) const;
  int other_end(int r, int v) const;

  const Vertex& vertex(int v) const { return vertices_[static_cast<size_t>(v)]; }
  const Rail& rail(int r) const { return rails_[static_cast<size_t>(r)]; }
  Segment segment(int r) const {
    return {vertex(rail(r).a).pos, vertex(rail(r).b).pos};
  }
  const std::vector<int>& incident(int v) const { return incident_[static_cast<size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(incident(v).size()); }

  bool vertex_alive(int v) const { return vertex_alive_[static_cast<size_t>(v)]; }
  bool rail_alive(int r) const { return rail_alive_[static_cast<size_t>(r)]; }
  int vertex_capacity() const { return static_cast<int>(vertices_.size()); }
  int rail_capacity() const { return static_cast<int>(rails_.size()); }
  int vertex_count() const { return live_vertices_; }
  int rail_count() const { return live_rails_; }
  std::vector<int> vertex_ids() const;
  std::vector<int> rail_ids() const;

  // Vertex id of graph node i, or -1.
  int node_vertex(int node) const;
  int node_count() const;
  int junction_count() const;

  double total_length() const;

 private:
  static std::uint64_t key(int a, int b);

  Rect boundary_;
  std::vector<Vertex> vertices_;
  std::vector<bool> vertex_alive_;
  std::vector<std::vector<int>> incident_;
  std::vector<Rail> rails_;
  std::vector<bool> rail_alive_;
  std::unordered_map<std::uint64_t, int> rail_index_;
  std::unordered_map<int, int> node_vertex_;
  int live_vertices_ = 0;
  int live_rails_ = 0;
};

// Number of maximal straight segments: rails merged through vertices where two
// incident rails continue each other in opposite directions.
int straight_run_count(const Mesh& m);

struct PlanarityIssue {
  int rail_a = -1;
  int rail_b = -1;   // -1 when the issue is a vertex lying on rail_a
  int vertex = -1;
};

// Pairs of rails that meet anywhere other than a shared endpoint, and vertices
// lying in the relative interior of a rail. Empty means planar.
std::vector<PlanarityIssue> planarity_issues(const Mesh& m);

// Shortest-path distances from one vertex (Dijkstra over rail lengths).
// Vertices flagged in `banned` are never entered.
std::vector<double> shortest_distances(const Mesh& m, int source,
                                       const std::vector<char>* banned = nullptr);

}  // namespace gmaps
