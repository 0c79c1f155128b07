#pragma once

#include <string>

#include <json.hpp>

#include "gmaps/pipeline.h"

namespace gmaps {

using Json = nlohmann::json;

inline constexpr int kManifestFormatVersion = 1;

// Single JSON document with everything the viewer draws: node table, per-level
// vertices/rails/routes/tiles, transition control pairs, the competition mesh
// and summary metrics. Object keys are sorted, so dumps are deterministic.
Json to_manifest(const BuildResult& r, const BuildConfig& cfg);

std::string dump_manifest(const Json& m);

// Parses and checks the format version and the top-level sections. Throws
// ValidationError("malformed manifest: ...").
Json parse_manifest(const std::string& text);
Json read_manifest_file(const std::string& path);

// Ink, dilation, F, stretch, per-tile and per-viewport node counts, rail
// crossings per tile and junction degree histograms, recomputed from the
// manifest's geometry alone.
Json metrics_report(const Json& m);

// Level i (1-based): visible nodes as disks scaled by rank, hidden nodes as
// small gray dots, one <line> per rail. Throws ValidationError on a bad level.
std::string render_svg(const Json& m, int level);

}  // namespace gmaps
