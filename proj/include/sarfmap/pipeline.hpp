#pragma once

#include <cstddef>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sarfmap/annotate.hpp"
#include "sarfmap/block_layout.hpp"
#include "sarfmap/clustering.hpp"
#include "sarfmap/errors.hpp"
#include "sarfmap/feature_tree.hpp"
#include "sarfmap/graph_model.hpp"
#include "sarfmap/map_document.hpp"
#include "sarfmap/street_layout.hpp"
#include "sarfmap/svg.hpp"

namespace sarfmap {

struct RunConfig {
  std::string input_path;
  std::string out_map;
  std::string out_svg;
  std::vector<std::string> overlay_paths;   // CSV channel files
  std::vector<std::string> manifest_paths;  // binding manifests
  std::vector<std::string> bindings;        // "<channel>=<attribute>[:sqrt]"
  LayoutConfig layout;
  DependencyWeights dependency_weights;
  double contraction_ratio = 0.01;
  std::size_t max_cluster_warn = 150;
  StreetConfig streets;
  LinkConfig links;
  KeywordConfig keywords;
  PatternConfig patterns;
  SvgOptions svg;
  bool fixed_height = false;
  int verbosity = 0;
};

struct PipelineInput {
  std::string graph_text;
  std::vector<std::string> overlay_texts;
  std::vector<std::string> manifest_texts;
};

struct ClusteringResult {
  ClassGraph graph;
  Dendrogram dendrogram;
  Partition partition;
  double modularity = 0.0;
  bool pre_weighted = false;  // cdep records only; dedication scoring skipped
};

struct PipelineResult {
  ClusteringResult clustering;
  FeatureTree tree;
  CityMap map;
  MapDocument document;
  std::string map_bytes;
  std::string svg;
  std::string cluster_report;
  std::string pattern_report;
  std::vector<std::string> warnings;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << bytes;
  if (!out) throw Error("failed writing '" + path + "'");
}

// Steps 1 and 2: graph construction and clustering.
inline ClusteringResult cluster_graph_text(const std::string& text, const RunConfig& config = {}) {
  MemberGraph members = parse_member_graph(text);
  if (members.empty()) throw Error("empty graph");
  ClusteringResult result{aggregate_to_class_graph(members, config.dependency_weights), {}, {}, 0.0,
                          members.dependencies.empty() && !members.class_dependencies.empty()};
  result.dendrogram = agglomerate(result.graph);
  result.partition = cut_dendrogram(result.dendrogram, result.graph);
  if (result.graph.total_weight() > 0.0) result.modularity = modularity(result.graph, result.partition);
  return result;
}

inline std::string cluster_report(const ClusteringResult& c) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "classes %zu\nedges %zu\ntotal_weight %.6f\nclusters %zu\nmodularity %.6f\n",
                c.graph.size(), c.graph.edge_count(), c.graph.total_weight(), c.partition.cluster_count(),
                c.modularity);
  out += line;
  auto clusters = c.partition.clusters();
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    std::snprintf(line, sizeof line, "cluster %zu size %zu:", k, clusters[k].size());
    out += line;
    for (auto i : clusters[k]) out += " " + c.graph.entity(i).id;
    out += '\n';
  }
  return out;
}

inline std::string pattern_report(const CityMap& map) {
  std::string out;
  for (const auto& p : map.patterns) {
    out += "block " + std::to_string(p.block) + " " + to_string(p.pattern);
    for (std::size_t i = 0; i < p.dominant_packages.size(); ++i)
      out += (i == 0 ? " " : ",") + (p.dominant_packages[i].empty() ? std::string("(root)") : p.dominant_packages[i]);
    out += '\n';
  }
  return out;
}

// Steps 1-5 on in-memory inputs. Nothing here depends on time, addresses or
// hash-table iteration order, so equal inputs give equal bytes.
inline PipelineResult run_pipeline(const PipelineInput& input, const RunConfig& config) {
  config.layout.validate();
  PipelineResult result;
  result.clustering = cluster_graph_text(input.graph_text, config);
  const auto& graph = result.clustering.graph;
  const auto& partition = result.clustering.partition;
  if (!(graph.total_weight() > 0.0)) result.warnings.push_back("graph has no inter-class dependencies");

  auto clusters = partition.clusters();
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    if (clusters[k].size() > config.max_cluster_warn)
      result.warnings.push_back("cluster " + std::to_string(k) + " has " + std::to_string(clusters[k].size()) +
                                " classes (more than " + std::to_string(config.max_cluster_warn) + ")");
  }

  result.tree = build_feature_tree(result.clustering.dendrogram, partition, config.contraction_ratio);
  std::vector<BlockLayout> blocks;
  blocks.reserve(clusters.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) blocks.push_back(layout_block(graph, clusters[k], k, config.layout));

  CityMap map = layout_streets(result.tree, blocks, graph, config.streets);
  map = place_separators(std::move(map), config.streets.separator_width);
  map.links = route_links(map, graph, config.links);
  map.keywords = extract_keywords(map, graph, config.keywords);
  std::vector<std::string> package_of;
  for (const auto& c : graph.classes()) package_of.push_back(c.package);
  for (const auto& b : map.blocks) map.patterns.push_back(classify_block_pattern(b.layout, package_of, config.patterns));

  OverlaySet overlays;
  overlays.channels[kPackageChannel] = package_channel(graph);
  overlays.bindings.push_back({kPackageChannel, VisualAttribute::building_color, ValueTransform::identity, 1.0});
  for (const auto& text : input.overlay_texts) {
    for (auto& [name, channel] : parse_overlay_csv(text)) {
      for (const auto& [id, value] : channel.values)
        if (!graph.index_of(id)) result.warnings.push_back("overlay channel '" + name + "' names unknown class '" + id + "'");
      overlays.channels[name] = std::move(channel);
    }
  }
  std::vector<Binding> requested;
  OverlaySet manifest;
  for (const auto& text : input.manifest_texts) parse_binding_manifest(text, manifest);
  requested = manifest.bindings;
  for (auto& [channel, palette] : manifest.palettes) overlays.palettes[channel] = palette;
  for (const auto& b : config.bindings) requested.push_back(parse_binding(b));
  for (const auto& b : requested) {
    // a later binding of the same attribute replaces the earlier one
    std::erase_if(overlays.bindings, [&](const Binding& x) { return x.attribute == b.attribute; });
    overlays.bindings.push_back(b);
  }
  map = bind_overlay(std::move(map), graph, overlays, {config.fixed_height});
  result.map = std::move(map);

  std::map<std::string, double> parameters{
      {"penalty_a", config.layout.penalty_a},
      {"balance_b", config.layout.balance_b},
      {"contraction_ratio", config.contraction_ratio},
      {"cell_size", config.streets.cell_size},
      {"street_width", config.streets.street_width},
      {"separator_width", config.streets.separator_width},
      {"link_width_scale", config.links.width_scale},
      {"link_rise_per_hop", config.links.rise_per_hop},
      {"keywords_per_block", static_cast<double>(config.keywords.per_block)},
      {"pattern_single_color", config.patterns.single_color_share},
      {"pattern_layered", config.patterns.layered_share},
      {"pattern_subgroups", config.patterns.subgroup_share},
      {"dependency_weight_call", config.dependency_weights[DependencyKind::call]},
      {"dependency_weight_field_access", config.dependency_weights[DependencyKind::field_access]},
      {"dependency_weight_inheritance", config.dependency_weights[DependencyKind::inheritance]},
      {"dependency_weight_type_reference", config.dependency_weights[DependencyKind::type_reference]},
  };
  result.document = make_map_document(result.map, graph, content_digest(input.graph_text),
                                      result.clustering.modularity, std::move(parameters));
  result.map_bytes = write_map_document(result.document);
  // render from the parsed bytes so the SVG matches what a later `render` would produce
  auto options = config.svg;
  options.fixed_height = options.fixed_height || config.fixed_height;
  result.svg = render_svg(parse_map_document(result.map_bytes), options);
  result.cluster_report = cluster_report(result.clustering);
  result.pattern_report = pattern_report(result.map);
  return result;
}

// File-based entry point: reads the inputs, runs, writes whichever outputs were requested.
inline PipelineResult run_pipeline(const RunConfig& config) {
  PipelineInput input;
  input.graph_text = read_file(config.input_path);
  for (const auto& p : config.overlay_paths) input.overlay_texts.push_back(read_file(p));
  for (const auto& p : config.manifest_paths) input.manifest_texts.push_back(read_file(p));
  auto result = run_pipeline(input, config);
  if (!config.out_map.empty()) write_file(config.out_map, result.map_bytes);
  if (!config.out_svg.empty()) write_file(config.out_svg, result.svg);
  return result;
}

}  // namespace sarfmap
