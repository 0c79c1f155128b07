#pragma once

#include <stdexcept>
#include <string>

namespace gmaps {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input graphs, configs and manifests.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Degenerate geometry (overlapping segments, zero-length arms).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// A mesh or routing structure that violates its own invariants.
class MeshError : public Error {
 public:
  using Error::Error;
};

// No level assignment exists for the requested quota.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmaps
