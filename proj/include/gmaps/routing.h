#pragma once

#include <span>
#include <string>
#include <vector>

#include "gmaps/graph.h"
#include "gmaps/mesh.h"

namespace gmaps {

struct ModConfig {
  double alpha = 45.0;      // minimum angle between consecutive rails at a vertex, degrees
  double beta = 0.0;        // minimum clearance between a vertex and a non-incident rail
  double thin_width = 0.0;  // faces narrower than this are refined away
  int median_iters = 20;
  double port_radius = 0.0;  // circumradius of the detour octagon around each node
};

// alpha 45, beta 0.25 * min pairwise distance, thin_width 0.1 * mean
// nearest-neighbour distance, port_radius 0.2 * min pairwise distance.
ModConfig default_mod_config(std::span<const Point> nodes);

// Largest port radius add_detours accepts on m (exclusive bound).
double max_port_radius(const Mesh& m);

struct Route {
  int edge = -1;  // index into InputGraph::edges()
  int u = -1;     // graph node indices
  int v = -1;
  std::vector<int> chain;  // mesh vertex ids from u's vertex to v's vertex
  double length = 0.0;
};

struct RoutedMesh {
  Mesh mesh;
  std::vector<Route> routes;
  std::vector<int> usage;  // per rail id: number of routes traversing it
};

// Surrounds every node vertex with a regular octagon. Each incident rail is
// split where it crosses the octagon (a port) and the octagon sides become
// rails. Octagon vertices carry owner = node index.
Mesh add_detours(const Mesh& m, double port_radius);

// Shortest path per graph edge that never enters a node vertex other than its
// own endpoints. Among equal-length paths the lexicographically smallest
// vertex sequence wins.
RoutedMesh route_edges(const Mesh& m, const InputGraph& g);

void recompute_usage(RoutedMesh& rm);
void recompute_lengths(RoutedMesh& rm);

// Drops unused rails and isolated non-node vertices.
RoutedMesh prune(RoutedMesh rm);

// Sum of lengths of rails used by at least one route, each counted once.
double total_ink(const RoutedMesh& rm);

RoutedMesh refine_faces(RoutedMesh rm, const ModConfig& cfg);
RoutedMesh median_pass(RoutedMesh rm, const ModConfig& cfg);
RoutedMesh shortcut_pass(RoutedMesh rm, const ModConfig& cfg);

// Replaces bends a-b-c at plain junctions b by the chord a-c, for every route
// taking that bend at once. A replacement must keep the mesh planar, must not
// add ink, and must pass the same angle/clearance guard as the other passes.
// Repeats until no bend can be straightened.
RoutedMesh straighten_bends(RoutedMesh rm, const ModConfig& cfg);

// Runs prune, refine_faces, median_pass and shortcut_pass in that order.
RoutedMesh optimize_routes(RoutedMesh rm, const ModConfig& cfg);

Polyline route_polyline(const Mesh& m, const Route& r);

// Problems with the routes: broken chains, wrong endpoints, foreign node
// vertices in a chain interior, usage counts out of date. Empty means valid.
std::vector<std::string> route_issues(const RoutedMesh& rm);

struct ConstraintReport {
  int angle_violations = 0;
  int clearance_violations = 0;
  double min_angle = 180.0;   // degrees, over consecutive rail pairs at every vertex
  double min_clearance = 0.0;  // over vertex / non-incident rail pairs; +inf if none
  bool planar = true;
};

ConstraintReport constraint_report(const Mesh& m, const ModConfig& cfg);

// Plain junctions are the only vertices the modification passes may move or
// remove: not nodes, not detour octagon vertices.
bool is_plain_junction(const Vertex& v);

// Face refinement helpers, exposed for testing.
struct Face {
  std::vector<int> cycle;  // vertex ids, counter-clockwise for bounded faces
  double signed_area = 0.0;
};

std::vector<Face> enumerate_faces(const Mesh& m);

// Smallest distance between two rails of the face that share no vertex;
// +inf when every pair is adjacent.
double face_width(const Mesh& m, const Face& f);

}  // namespace gmaps
