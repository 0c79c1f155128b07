#include "gmaps/manifest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gmaps/error.h"

namespace gmaps {

namespace {

Json point_json(Point p) { return Json::array({p.x, p.y}); }

Json polyline_json(const Polyline& pl) {
  Json a = Json::array();
  for (const Point& p : pl) a.push_back(point_json(p));
  return a;
}

// Vertices as [x, y, node] (node -1 for junctions) with ids compacted in
// mesh-id order, rails as index pairs.
Json mesh_json(const Mesh& m, std::map<int, int>* index_out = nullptr) {
  std::map<int, int> index;
  Json verts = Json::array();
  for (int v : m.vertex_ids()) {
    index[v] = static_cast<int>(verts.size());
    const Vertex& vx = m.vertex(v);
    verts.push_back(Json::array({vx.pos.x, vx.pos.y, vx.kind == VertexKind::kNode ? vx.node : -1}));
  }
  Json rails = Json::array();
  for (int r : m.rail_ids()) rails.push_back(Json::array({index[m.rail(r).a], index[m.rail(r).b]}));
  if (index_out) *index_out = std::move(index);
  return Json{{"vertices", verts}, {"rails", rails}};
}

double max_dilation(const RoutedMesh& rm) {
  double worst = 0.0;
  for (const Route& r : rm.routes) {
    const double d = dist_e(rm.mesh.vertex(r.chain.front()).pos, rm.mesh.vertex(r.chain.back()).pos);
    worst = std::max(worst, r.length / d);
  }
  return worst;
}

Point json_point(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Polyline json_polyline(const Json& j) {
  Polyline pl;
  for (const Json& p : j) pl.push_back(json_point(p));
  return pl;
}

Mesh json_mesh(const Json& j, const Rect& boundary) {
  Mesh m(boundary);
  for (const Json& v : j.at("vertices")) {
    Vertex vx;
    vx.pos = {v.at(0).get<double>(), v.at(1).get<double>()};
    vx.node = v.at(2).get<int>();
    if (vx.node >= 0) vx.kind = VertexKind::kNode;
    m.add_vertex(vx);
  }
  for (const Json& r : j.at("rails")) m.add_rail(r.at(0).get<int>(), r.at(1).get<int>());
  return m;
}

Rect json_rect(const Json& j) {
  return {{j.at(0).get<double>(), j.at(1).get<double>()}, {j.at(2).get<double>(), j.at(3).get<double>()}};
}

}  // namespace

Json to_manifest(const BuildResult& r, const BuildConfig& cfg) {
  const InputGraph& g = r.graph;
  Json m;
  m["format_version"] = kManifestFormatVersion;
  m["config"] = {
      {"levels", cfg.levels},
      {"quota", r.quota},
      {"quota_mode", cfg.quota ? "explicit" : "auto"},
      {"alpha", r.mod.alpha},
      {"beta", r.mod.beta},
      {"thin_width", r.mod.thin_width},
      {"port_radius", r.mod.port_radius},
      {"median_iters", r.mod.median_iters},
      {"mode", to_string(cfg.mode)},
      {"tie", to_string(cfg.tie)},
      {"seed", cfg.seed},
      {"avoid_hidden_nodes", cfg.avoid_hidden_nodes},
  };
  const Rect& root = r.tree.root;
  m["bounds"] = Json::array({root.min.x, root.min.y, root.max.x, root.max.y});

  Json nodes = Json::array();
  for (int v = 0; v < g.node_count(); ++v) {
    nodes.push_back({{"id", g.node(v).id},
                     {"x", g.node(v).pos.x},
                     {"y", g.node(v).pos.y},
                     {"rank", r.ranks[static_cast<size_t>(v)]},
                     {"level", r.assignment[static_cast<size_t>(v)]}});
  }
  m["nodes"] = nodes;
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back(Json::array({u, v}));
  m["edges"] = edges;
  m["competition_mesh"] = mesh_json(r.competition);

  Json levels = Json::array();
  Json ink = Json::array(), dilation = Json::array(), max_tile = Json::array(), max_view = Json::array();
  for (size_t i = 0; i < r.levels.size(); ++i) {
    const LevelBundle& b = r.levels[i];
    std::map<int, int> index;
    Json lv = mesh_json(b.routed.mesh, &index);
    lv["level"] = b.graph.level;
    lv["nodes"] = b.graph.nodes;
    lv["edges"] = b.graph.edges;
    Json routes = Json::array();
    for (const Route& rt : b.routed.routes) {
      routes.push_back({{"edge", rt.edge}, {"polyline", polyline_json(route_polyline(b.routed.mesh, rt))}});
    }
    lv["routes"] = routes;
    const LevelTileMetrics& tm = r.tiles[i];
    Json tiles = Json::array();
    for (const TileStat& ts : tm.tiles) {
      const Tile& t = r.tree.tiles[static_cast<size_t>(ts.tile)];
      tiles.push_back({{"ix", t.ix},
                       {"iy", t.iy},
                       {"rect", Json::array({t.rect.min.x, t.rect.min.y, t.rect.max.x, t.rect.max.y})},
                       {"visible", ts.visible},
                       {"rail_crossings", ts.rail_crossings}});
    }
    lv["tiles"] = tiles;
    Json views = Json::array();
    for (const ViewportStat& vs : tm.viewports) views.push_back({{"ix", vs.ix}, {"iy", vs.iy}, {"visible", vs.visible}});
    lv["viewports"] = views;
    const double level_ink = total_ink(b.routed);
    lv["ink"] = level_ink;
    levels.push_back(lv);
    ink.push_back(level_ink);
    dilation.push_back(max_dilation(b.routed));
    max_tile.push_back(tm.max_tile);
    max_view.push_back(tm.max_viewport);
  }
  m["levels"] = levels;

  Json transitions = Json::array();
  for (const TransitionSet& ts : r.transitions) {
    Json pairs = Json::array();
    for (const TransitionPair& p : ts.pairs) {
      pairs.push_back({{"edge", p.edge}, {"from", polyline_json(p.from)}, {"to", polyline_json(p.to)}});
    }
    transitions.push_back({{"from_level", ts.from_level}, {"to_level", ts.from_level + 1}, {"pairs", pairs}});
  }
  m["transitions"] = transitions;

  m["metrics"] = {
      {"objective_f", r.objective},
      {"stretch_factor", stretch_factor(r.competition)},
      {"ink", ink},
      {"max_dilation", dilation},
      {"max_tile_visible", max_tile},
      {"max_viewport_visible", max_view},
  };
  return m;
}

std::string dump_manifest(const Json& m) { return m.dump(1) + "\n"; }

Json parse_manifest(const std::string& text) {
  Json m;
  try {
    m = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  if (!m.is_object()) throw ValidationError("malformed manifest: not an object");
  if (m.value("format_version", 0) != kManifestFormatVersion) {
    throw ValidationError("malformed manifest: unsupported format_version");
  }
  for (const char* key : {"config", "bounds", "nodes", "edges", "competition_mesh", "levels", "transitions"}) {
    if (!m.contains(key)) throw ValidationError(std::string("malformed manifest: missing '") + key + "'");
  }
  return m;
}

Json read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

Json metrics_report(const Json& m) {
  try {
    const int k = m.at("config").at("levels").get<int>();
    const TileMode mode = parse_tile_mode(m.at("config").at("mode").get<std::string>());
    const Rect root = json_rect(m.at("bounds"));
    std::vector<Point> pts;
    LevelAssignment g;
    for (const Json& n : m.at("nodes")) {
      pts.push_back({n.at("x").get<double>(), n.at("y").get<double>()});
      g.push_back(n.at("level").get<int>());
    }
    const TileTree tree = build_tile_tree(pts, root, k, mode);

    Json rep;
    rep["nodes"] = static_cast<int>(pts.size());
    rep["edges"] = m.at("edges").size();
    rep["quota"] = m.at("config").at("quota");
    rep["objective_f"] = objective_f(tree, g);
    rep["stretch_factor"] = stretch_factor(json_mesh(m.at("competition_mesh"), root));
    rep["stretch_bound"] = 2.0 + std::sqrt(2.0);

    Json levels = Json::array();
    for (const Json& lv : m.at("levels")) {
      const int i = lv.at("level").get<int>();
      const Json& verts = lv.at("vertices");
      std::vector<Point> vp;
      std::vector<int> vnode, degree(verts.size(), 0);
      for (const Json& v : verts) {
        vp.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        vnode.push_back(v.at(2).get<int>());
      }
      double ink = 0.0;
      std::vector<Segment> rails;
      for (const Json& r : lv.at("rails")) {
        const int a = r.at(0).get<int>(), b = r.at(1).get<int>();
        rails.push_back({vp[static_cast<size_t>(a)], vp[static_cast<size_t>(b)]});
        ink += dist_e(rails.back().a, rails.back().b);
        ++degree[static_cast<size_t>(a)];
        ++degree[static_cast<size_t>(b)];
      }
      std::map<int, int> hist;
      for (size_t v = 0; v < vp.size(); ++v) {
        if (vnode[v] < 0) ++hist[degree[v]];
      }
      Json hist_json = Json::object();
      for (const auto& [d, c] : hist) hist_json[std::to_string(d)] = c;

      double dil = 0.0;
      for (const Json& rt : lv.at("routes")) {
        const Polyline pl = json_polyline(rt.at("polyline"));
        dil = std::max(dil, polyline_length(pl) / dist_e(pl.front(), pl.back()));
      }

      const int z = std::min(i, k);
      const int cx = tree.columns(z), cy = tree.rows(z);
      std::vector<int> visible(static_cast<size_t>(cx * cy), 0), crossings(visible.size(), 0);
      for (size_t p = 0; p < pts.size(); ++p) {
        if (g[p] > i) continue;
        const Tile& t = tree.tiles[static_cast<size_t>(tree.point_tile[static_cast<size_t>(z - 1)][p])];
        ++visible[static_cast<size_t>(t.iy * cx + t.ix)];
      }
      for (int iy = 0; iy < cy; ++iy) {
        for (int ix = 0; ix < cx; ++ix) {
          const Rect& rect = tree.tiles[static_cast<size_t>(tree.at(z, ix, iy))].rect;
          for (const Segment& s : rails) crossings[static_cast<size_t>(iy * cx + ix)] += segment_meets_rect(s, rect);
        }
      }
      int max_view = 0;
      const int wx = std::min(2, cx), wy = std::min(2, cy);
      for (int iy = 0; iy + wy <= cy; ++iy) {
        for (int ix = 0; ix + wx <= cx; ++ix) {
          int s = 0;
          for (int dy = 0; dy < wy; ++dy) {
            for (int dx = 0; dx < wx; ++dx) s += visible[static_cast<size_t>((iy + dy) * cx + ix + dx)];
          }
          max_view = std::max(max_view, s);
        }
      }
      levels.push_back({{"level", i},
                        {"visible_nodes", std::count_if(g.begin(), g.end(), [&](int x) { return x <= i; })},
                        {"routes", lv.at("routes").size()},
                        {"rails", rails.size()},
                        {"ink", ink},
                        {"max_dilation", dil},
                        {"max_tile_visible", *std::max_element(visible.begin(), visible.end())},
                        {"max_viewport_visible", max_view},
                        {"rail_crossings_per_tile", crossings},
                        {"max_tile_rail_crossings", *std::max_element(crossings.begin(), crossings.end())},
                        {"junction_degree_histogram", hist_json}});
    }
    rep["levels"] = levels;
    return rep;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Json& m, int level) {
  const Json& levels = m.at("levels");
  if (level < 1 || level > static_cast<int>(levels.size())) {
    throw ValidationError("level " + std::to_string(level) + " out of range 1.." + std::to_string(levels.size()));
  }
  const Json& lv = levels.at(static_cast<size_t>(level - 1));
  const Rect root = json_rect(m.at("bounds"));
  const double span = std::max({root.width(), root.height(), 1e-12});
  const double size = 800.0, margin = 20.0, scale = (size - 2 * margin) / span;
  auto sx = [&](double x) { return fmt(margin + (x - root.min.x) * scale); };
  auto sy = [&](double y) { return fmt(size - margin - (y - root.min.y) * scale); };

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const Json& n : m.at("nodes")) {
    const double r = n.at("rank").get<double>();
    lo = first ? r : std::min(lo, r);
    hi = first ? r : std::max(hi, r);
    first = false;
  }

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  const Json& verts = lv.at("vertices");
  for (const Json& r : lv.at("rails")) {
    const Json& a = verts.at(r.at(0).get<size_t>());
    const Json& b = verts.at(r.at(1).get<size_t>());
    os << "<line x1=\"" << sx(a.at(0).get<double>()) << "\" y1=\"" << sy(a.at(1).get<double>()) << "\" x2=\""
       << sx(b.at(0).get<double>()) << "\" y2=\"" << sy(b.at(1).get<double>())
       << "\" stroke=\"#4a6fa5\" stroke-width=\"1.5\"/>\n";
  }
  for (const Json& n : m.at("nodes")) {
    const double x = n.at("x").get<double>(), y = n.at("y").get<double>();
    if (n.at("level").get<int>() > level) {
      os << "<circle class=\"hidden\" cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"1.5\" fill=\"#bbbbbb\"/>\n";
    } else {
      const double w = hi > lo ? (n.at("rank").get<double>() - lo) / (hi - lo) : 0.5;
      os << "<circle class=\"node\" cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"" << fmt(3.0 + 7.0 * w)
         << "\" fill=\"#d9534f\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace gmaps
