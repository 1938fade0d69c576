#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sarfmap/sarfmap.hpp"
#include "sarfmap/serve.hpp"

namespace {

using namespace sarfmap;

int run_map(const RunConfig& config, const std::string& report_path) {
  auto result = run_pipeline(config);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::string report = result.cluster_report + "\npatterns\n" + result.pattern_report;
  if (!report_path.empty()) {
    write_file(report_path, report);
  } else if (config.verbosity > 0 || (config.out_map.empty() && config.out_svg.empty())) {
    std::cout << report;
  }
  if (config.verbosity > 0) {
    std::cerr << "blocks " << result.map.blocks.size() << ", streets " << result.map.streets.size() << ", links "
              << result.map.links.size() << ", street passes " << result.map.energy_history.size() << '\n';
  }
  return 0;
}

int run_cluster(const RunConfig& config, bool show_dendrogram, bool show_tree) {
  auto c = cluster_graph_text(read_file(config.input_path), config);
  std::cout << cluster_report(c);
  if (c.pre_weighted) std::cout << "# pre-weighted class edges; dedication scoring skipped\n";
  if (show_dendrogram) std::cout << "\ndendrogram\n" << dendrogram_to_text(c.dendrogram, c.graph);
  if (show_tree) {
    auto tree = build_feature_tree(c.dendrogram, c.partition, config.contraction_ratio);
    std::cout << "\nfeature tree\n" << feature_tree_to_text(tree);
  }
  return 0;
}

int run_render(const std::string& in, const std::string& out, const SvgOptions& options) {
  auto doc = parse_map_document(read_file(in));
  auto svg = render_svg(doc, options);
  if (out.empty() || out == "-") {
    std::cout << svg;
  } else {
    write_file(out, svg);
  }
  return 0;
}

int run_serve(const std::string& in, const std::string& host, int port, const std::string& assets) {
  MapServer server(read_file(in), assets.empty() ? std::nullopt : std::optional<std::string>(assets));
  int bound = server.bind(host, port);
  std::cerr << "serving " << in << " at http://" << host << ":" << bound << kMapPath << '\n';
  server.run();
  return 0;
}

int run_synth(const std::string& kind, std::uint64_t seed, const std::string& out) {
  std::string text;
  if (kind == "planted") {
    text = serialize_member_graph(synthetic::planted_partition(seed).graph);
  } else if (kind == "swing") {
    text = serialize_member_graph(synthetic::swing_like_fixture(seed));
  } else {
    throw Error("unknown fixture '" + kind + "' (planted, swing)");
  }
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sarfmap: feature-clustered city maps of software dependency graphs"};
  app.require_subcommand(1);

  RunConfig config;
  std::string report_path;
  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input,-i", config.input_path, "dependency graph file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--penalty-a", config.layout.penalty_a, "depth penalty for ties and reversed edges")
        ->capture_default_str();
    cmd->add_option("--balance-b", config.layout.balance_b, "depth/width balance for in-order edges")
        ->capture_default_str();
    cmd->add_option("--contraction-ratio", config.contraction_ratio, "feature tree flattening ratio")
        ->capture_default_str();
  };

  auto* map = app.add_subcommand("map", "cluster, lay out and annotate; write map document and SVG");
  add_input(map);
  map->add_option("--out-map", config.out_map, "map document (.sarfmap)");
  map->add_option("--out-svg", config.out_svg, "top-down SVG");
  map->add_option("--out-report", report_path, "cluster and pattern report");
  map->add_option("--overlay", config.overlay_paths, "overlay CSV: class_id,channel,value")->check(CLI::ExistingFile);
  map->add_option("--bindings", config.manifest_paths, "binding manifest file")->check(CLI::ExistingFile);
  map->add_option("--bind", config.bindings, "<channel>=<attribute>[:sqrt]");
  map->add_option("--max-cluster-warn", config.max_cluster_warn, "warn about clusters larger than this")
      ->capture_default_str();
  map->add_flag("--fixed-height", config.fixed_height, "render every building at the same height");
  map->add_flag("-v,--verbose", config.verbosity, "print progress to stderr");

  auto* cluster = app.add_subcommand("cluster", "clustering only: report, dendrogram and feature tree");
  add_input(cluster);
  bool show_dendrogram = false, show_tree = false;
  cluster->add_flag("--dendrogram", show_dendrogram, "print the merge tree");
  cluster->add_flag("--tree", show_tree, "print the feature tree");

  auto* render = app.add_subcommand("render", "render a map document to SVG");
  std::string render_in, render_out;
  SvgOptions svg;
  std::string channel;
  render->add_option("map", render_in, "map document")->required()->check(CLI::ExistingFile);
  render->add_option("--out,-o", render_out, "output SVG (default stdout)");
  render->add_option("--scale", svg.scale, "pixels per map unit")->capture_default_str();
  render->add_option("--channel", channel, "colour buildings by this overlay channel");
  render->add_flag("--fixed-height", svg.fixed_height, "equal building footprints");
  render->add_flag("!--no-links", svg.links, "omit dependency links");
  render->add_flag("!--no-keywords", svg.keywords, "omit keyword labels");

  auto* serve = app.add_subcommand("serve", "serve a map document to the viewer over HTTP");
  std::string serve_in, host = "127.0.0.1", assets;
  int port = 8080;
  serve->add_option("map", serve_in, "map document")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", port, "listen port")->capture_default_str();
  serve->add_option("--host", host, "listen address")->capture_default_str();
  serve->add_option("--assets", assets, "viewer assets directory, mounted at /assets");

  auto* synth = app.add_subcommand("synth", "write a synthetic dependency graph");
  std::string kind = "planted", synth_out;
  std::uint64_t seed = 1;
  synth->add_option("kind", kind, "planted | swing")->capture_default_str();
  synth->add_option("--seed", seed)->capture_default_str();
  synth->add_option("--out,-o", synth_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*map) return run_map(config, report_path);
    if (*cluster) return run_cluster(config, show_dendrogram, show_tree);
    if (*render) {
      if (!channel.empty()) svg.channel = channel;
      return run_render(render_in, render_out, svg);
    }
    if (*serve) return run_serve(serve_in, host, port, assets);
    if (*synth) return run_synth(kind, seed, synth_out);
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
