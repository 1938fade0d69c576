#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "sarfmap/city_map.hpp"
#include "sarfmap/graph_model.hpp"

namespace sarfmap {

struct LinkConfig {
  double width_scale = 2.0;     // px per unit of class-edge weight
  double rise_per_hop = 1.0;    // elevation of inter-block control points per tree hop
  double intra_elevation = 0.25;
};

namespace detail {

inline Point project_onto(const Street& street, Point p) {
  auto clamp_between = [](double v, double a, double b) { return std::clamp(v, std::min(a, b), std::max(a, b)); };
  if (street.axis == Axis::horizontal) return {clamp_between(p.x, street.start.x, street.end.x), street.start.y};
  return {street.start.x, clamp_between(p.y, street.start.y, street.end.y)};
}

}  // namespace detail

// One link per class edge. Links inside a block are direct and low; links
// between blocks pass over every street on the feature-tree path between the
// two blocks, raised in proportion to the tree distance.
inline std::vector<LinkGeometry> route_links(const CityMap& map, const ClassGraph& graph, const LinkConfig& config = {}) {
  std::map<std::size_t, std::size_t> street_of_node;
  for (const auto& s : map.streets)
    if (s.kind == StreetKind::branch && s.tree_node) street_of_node.emplace(*s.tree_node, s.id);

  std::vector<LinkGeometry> links;
  links.reserve(graph.edge_count());
  for (const auto& [key, w] : graph.edges()) {
    const auto& from = map.buildings.at(key.first);
    const auto& to = map.buildings.at(key.second);
    LinkGeometry link;
    link.source = key.first;
    link.target = key.second;
    link.weight = w;
    link.width = w * config.width_scale;
    link.start = from.center;
    link.end = to.center;
    link.intra_block = from.block == to.block;

    if (link.intra_block) {
      link.apex_elevation = config.intra_elevation;
    } else {
      const auto& tree = map.tree;
      auto la = map.blocks.at(from.block).tree_leaf;
      auto lb = map.blocks.at(to.block).tree_leaf;
      auto lca = tree.lowest_common_ancestor(la, lb);
      std::vector<std::size_t> path;
      for (auto n = *tree.nodes[la].parent; n != lca; n = *tree.nodes[n].parent) path.push_back(n);
      path.push_back(lca);
      std::vector<std::size_t> down;
      for (auto n = *tree.nodes[lb].parent; n != lca; n = *tree.nodes[n].parent) down.push_back(n);
      path.insert(path.end(), down.rbegin(), down.rend());

      link.apex_elevation = config.rise_per_hop * static_cast<double>(tree.distance(la, lb));
      Point mid{(link.start.x + link.end.x) / 2, (link.start.y + link.end.y) / 2};
      for (auto node : path) {
        auto sid = street_of_node.at(node);
        if (!link.via_streets.empty() && link.via_streets.back() == sid) continue;
        link.via_streets.push_back(sid);
        auto p = detail::project_onto(map.streets[sid], mid);
        link.control_points.push_back({p.x, p.y, link.apex_elevation});
      }
    }
    links.push_back(std::move(link));
  }
  return links;
}

}  // namespace sarfmap
