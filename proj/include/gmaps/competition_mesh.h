#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmaps/geometry.h"
#include "gmaps/mesh.h"

namespace gmaps {

// Resolution of two perpendicular rays reaching the same point at the same
// time. Collinear rays meeting head-on always both stop.
enum class TieRule : std::uint8_t { kHorizontalWins, kVerticalWins, kLowerIndexWins };

TieRule parse_tie_rule(const std::string& s);
const char* to_string(TieRule t);

// Distinct x, distinct y and distinct x+y / x-y values. The last two rule out
// pairs at exactly 45 degrees, which sit on cone boundaries.
bool in_general_position(std::span<const Point> pts);

// Returns pts unchanged when already in general position; otherwise jitters
// every coordinate by at most 1e-7 times the bounding diagonal until it is.
std::vector<Point> sanitize_general_position(std::span<const Point> pts, std::uint64_t seed);

// Ground-truth construction: four rays per point grow at unit speed and stop
// on first contact with another ray, a point, or the bounding rectangle.
// Vertex i of the result is point i.
Mesh build_mesh_sim(std::span<const Point> points, TieRule tie = TieRule::kHorizontalWins);

// Phased construction (vertical rays from cone neighbours, then horizontal
// rays by sweeping). Requires general position.
Mesh build_mesh_fast(std::span<const Point> points);

// Index 0..7 of the 45-degree cone around w that contains p; cone 0 spans
// [0, 45) degrees and the rest follow counter-clockwise.
int cone_index(Point w, Point p);

struct ConeNeighborTable {
  // nearest[i][c]: Manhattan-nearest point in cone c of point i.
  std::vector<std::array<std::optional<int>, 8>> nearest;
};

ConeNeighborTable cone_neighbors(std::span<const Point> points);

// Smallest positive difference between two y coordinates.
double delta_y(std::span<const Point> points);

// Quadrants are numbered 1..4 counter-clockwise starting at (+x, +y).
// Returns a vertex chain from `vertex` that is monotone in both axes and ends
// on the side of the bounding rectangle the quadrant faces. Throws MeshError if
// none exists.
std::vector<int> monotone_path_witness(const Mesh& m, int vertex, int quadrant);

// Max over node pairs of mesh distance over Euclidean distance.
double stretch_factor(const Mesh& m);

struct MeshReport {
  int nodes = 0;
  int junctions = 0;
  int rails = 0;
  int straight_runs = 0;
  bool axis_aligned = true;
  bool planar = true;
};

MeshReport mesh_report(const Mesh& m);

// Canonical sorted list of rail segments (x0, y0, x1, y1) for comparing two
// constructions.
std::vector<std::array<double, 4>> rail_signature(const Mesh& m);

}  // namespace gmaps
