#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gmaps/error.h"
#include "gmaps/io.h"
#include "gmaps/manifest.h"
#include "gmaps/pipeline.h"
#include "gmaps/server.h"

namespace fs = std::filesystem;

namespace {

gmaps::ManifestServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw gmaps::Error("cannot write '" + p.string() + "'");
  out << text;
}

void print_text_report(const gmaps::Json& rep) {
  std::cout << "nodes " << rep["nodes"] << ", edges " << rep["edges"] << ", quota " << rep["quota"] << "\n";
  std::cout << "objective F " << rep["objective_f"] << "\n";
  std::cout << "mesh stretch " << rep["stretch_factor"].get<double>() << " (bound "
            << rep["stretch_bound"].get<double>() << ")\n";
  for (const auto& lv : rep["levels"]) {
    std::cout << "level " << lv["level"] << ": " << lv["visible_nodes"] << " nodes, " << lv["routes"] << " routes, "
              << lv["rails"] << " rails, ink " << lv["ink"].get<double>() << ", max dilation "
              << lv["max_dilation"].get<double>() << ", max tile " << lv["max_tile_visible"] << ", max viewport "
              << lv["max_viewport_visible"] << ", max rails per tile " << lv["max_tile_rail_crossings"]
              << ", junction degrees " << lv["junction_degree_histogram"].dump() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level graph map builder"};
  app.require_subcommand(1);

  gmaps::BuildConfig cfg;
  std::string input, positions, out_dir = "out", quota = "auto", mode = "2d", tie = "horizontal";
  double alpha = 45.0, beta = 0.0, thin = 0.0, port = 0.0;
  bool no_svg = false;
  auto* build = app.add_subcommand("build", "Run the pipeline and write manifest.json plus level SVGs");
  build->add_option("--input", input, "Graph JSON, or a TSV edge list with --positions")->required();
  build->add_option("--positions", positions, "TSV positions file (id, x, y[, rank])");
  build->add_option("--levels", cfg.levels, "Number of zoom levels")->check(CLI::PositiveNumber);
  build->add_option("--quota", quota, "Node quota per tile, or auto");
  build->add_option("--alpha", alpha, "Minimum rail angle in degrees");
  auto* beta_opt = build->add_option("--beta", beta, "Minimum vertex/rail clearance");
  auto* thin_opt = build->add_option("--thin-face", thin, "Faces narrower than this are refined");
  auto* port_opt = build->add_option("--port-radius", port, "Detour octagon radius");
  build->add_option("--median-iters", cfg.median_iters, "Median pass iterations");
  build->add_option("--seed", cfg.seed, "Seed for the general-position sanitizer");
  build->add_option("--mode", mode, "Tile tree mode")->check(CLI::IsMember({"1d", "2d"}));
  build->add_option("--tie", tie, "Ray tie rule")->check(CLI::IsMember({"horizontal", "vertical", "index"}));
  build->add_flag("--avoid-hidden", cfg.avoid_hidden_nodes, "Coarser routes keep bypassing hidden nodes");
  build->add_flag("--no-svg", no_svg, "Skip the per-level SVGs");
  build->add_option("--out", out_dir, "Output directory");

  std::string manifest_path;
  bool as_json = false;
  auto* metrics = app.add_subcommand("metrics", "Report metrics recomputed from a manifest");
  metrics->add_option("manifest", manifest_path, "manifest.json")->required();
  metrics->add_flag("--json", as_json, "Print the report as JSON");

  int level = 1;
  std::string svg_out;
  auto* svg = app.add_subcommand("svg", "Render one level of a manifest as SVG");
  svg->add_option("manifest", manifest_path, "manifest.json")->required();
  svg->add_option("--level", level, "Level, 1-based")->required();
  svg->add_option("-o,--output", svg_out, "Output file (default stdout)");

  std::string serve_dir, assets, host = "127.0.0.1";
  int port_no = 8080;
  auto* serve = app.add_subcommand("serve", "Serve a build directory over HTTP");
  serve->add_option("dir", serve_dir, "Build directory containing manifest.json")->required();
  serve->add_option("--port", port_no, "TCP port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--assets", assets, "Directory of viewer assets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      if (quota != "auto") {
        try {
          size_t used = 0;
          cfg.quota = std::stoi(quota, &used);
          if (used != quota.size()) throw std::invalid_argument(quota);
        } catch (const std::exception&) {
          throw gmaps::ValidationError("--quota must be an integer or auto, got '" + quota + "'");
        }
      }
      cfg.alpha = alpha;
      if (*beta_opt) cfg.beta = beta;
      if (*thin_opt) cfg.thin_width = thin;
      if (*port_opt) cfg.port_radius = port;
      cfg.mode = gmaps::parse_tile_mode(mode);
      cfg.tie = gmaps::parse_tie_rule(tie);
      const gmaps::InputGraph g = gmaps::validate(gmaps::load_graph(input, positions));
      const gmaps::BuildResult r = gmaps::run_pipeline(g, cfg);
      const gmaps::Json m = gmaps::to_manifest(r, cfg);
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / "manifest.json", gmaps::dump_manifest(m));
      if (!no_svg) {
        for (int i = 1; i <= cfg.levels; ++i) {
          write_file(fs::path(out_dir) / ("level_" + std::to_string(i) + ".svg"), gmaps::render_svg(m, i));
        }
      }
      std::cout << "built " << cfg.levels << " level(s), quota " << r.quota << ", F " << r.objective << " -> "
                << (fs::path(out_dir) / "manifest.json").string() << "\n";
    } else if (*metrics) {
      const gmaps::Json rep = gmaps::metrics_report(gmaps::read_manifest_file(manifest_path));
      if (as_json) {
        std::cout << rep.dump(1) << "\n";
      } else {
        print_text_report(rep);
      }
    } else if (*svg) {
      const std::string doc = gmaps::render_svg(gmaps::read_manifest_file(manifest_path), level);
      if (svg_out.empty()) {
        std::cout << doc;
      } else {
        write_file(svg_out, doc);
      }
    } else if (*serve) {
      gmaps::ManifestServer server(serve_dir, assets);
      const int bound = server.bind(host, port_no);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving " << serve_dir << " on http://" << host << ":" << bound << "/" << std::endl;
      server.listen();
      g_server = nullptr;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
