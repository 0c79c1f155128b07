#pragma once

#include <string>

#include "gmaps/graph.h"

namespace gmaps {

// {"nodes": [{"id", "x", "y", "rank"?}], "edges": [[id, id], ...]}. Ids may be
// strings or integers.
RawGraph parse_graph_json(const std::string& text);

// Edge list: one "a<TAB>b" per line. Positions: "id<TAB>x<TAB>y[<TAB>rank]".
// Blank lines and lines starting with '#' are skipped.
RawGraph parse_graph_tsv(const std::string& edges, const std::string& positions);

std::string read_text_file(const std::string& path);

// JSON when positions_path is empty, TSV otherwise.
RawGraph load_graph(const std::string& path, const std::string& positions_path = "");

}  // namespace gmaps
