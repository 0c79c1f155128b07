#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gmaps/geometry.h"

namespace gmaps::testing {

// Uniform points in [0, 100)^2.
inline std::vector<Point> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    pts.push_back({x, u(rng)});
  }
  return pts;
}

}  // namespace gmaps::testing
