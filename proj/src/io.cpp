#include "gmaps/io.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gmaps/error.h"

namespace gmaps {

namespace {

std::string id_of(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.dump();
  throw ValidationError("node id must be a string or an integer, got " + j.dump());
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string f;
  while (std::getline(ss, f, '\t')) out.push_back(f);
  return out;
}

double number(const std::string& s, int line) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ValidationError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
  return v;
}

template <typename F>
void each_line(const std::string& text, F&& f) {
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    f(fields(line), no);
  }
}

}  // namespace

RawGraph parse_graph_json(const std::string& text) {
  RawGraph g;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& n : j.at("nodes")) {
      RawNode node;
      node.id = id_of(n.at("id"));
      node.pos = {n.at("x").get<double>(), n.at("y").get<double>()};
      if (n.contains("rank") && !n.at("rank").is_null()) node.rank = n.at("rank").get<double>();
      g.nodes.push_back(std::move(node));
    }
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ValidationError("edge must be a pair of ids: " + e.dump());
        g.edges.emplace_back(id_of(e.at(0)), id_of(e.at(1)));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad graph JSON: ") + e.what());
  }
  return g;
}

RawGraph parse_graph_tsv(const std::string& edges, const std::string& positions) {
  RawGraph g;
  each_line(positions, [&](const std::vector<std::string>& f, int no) {
    if (f.size() != 3 && f.size() != 4) {
      throw ValidationError("positions line " + std::to_string(no) + ": expected id, x, y[, rank]");
    }
    RawNode n;
    n.id = f[0];
    n.pos = {number(f[1], no), number(f[2], no)};
    if (f.size() == 4) n.rank = number(f[3], no);
    g.nodes.push_back(std::move(n));
  });
  each_line(edges, [&](const std::vector<std::string>& f, int no) {
    if (f.size() != 2) throw ValidationError("edges line " + std::to_string(no) + ": expected two ids");
    g.edges.emplace_back(f[0], f[1]);
  });
  return g;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RawGraph load_graph(const std::string& path, const std::string& positions_path) {
  if (positions_path.empty()) return parse_graph_json(read_text_file(path));
  return parse_graph_tsv(read_text_file(path), read_text_file(positions_path));
}

}  // namespace gmaps
