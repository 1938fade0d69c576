#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "sarfmap/block_layout.hpp"
#include "sarfmap/city_map.hpp"
#include "sarfmap/errors.hpp"
#include "sarfmap/feature_tree.hpp"
#include "sarfmap/graph_model.hpp"

namespace sarfmap {

struct StreetConfig {
  double cell_size = 1.0;
  double street_width = 1.0;
  double separator_width = 0.5;
  std::size_t max_passes = 50;
  double min_decrease = 1e-9;
};

// Sum over class edges of d_ij^2 * squared distance between building centres.
inline double street_energy(const CityMap& map, const ClassGraph& graph) {
  double h = 0.0;
  for (const auto& [key, w] : graph.edges()) {
    const auto& a = map.buildings[key.first].center;
    const auto& b = map.buildings[key.second].center;
    double dx = a.x - b.x, dy = a.y - b.y;
    h += w * w * (dx * dx + dy * dy);
  }
  return h;
}

namespace detail {

struct LocalStreet {
  std::size_t owner;  // feature-tree node
  std::optional<std::size_t> parent_owner;
  Axis axis;
  Point start;
  Point end;
  std::size_t depth;
};

struct LocalBlock {
  std::size_t cluster;
  Point origin;
  std::size_t owner;
  int side;
};

struct LocalSide {
  std::size_t owner;
  int side;
  std::vector<Rect> items;
};

struct LocalLayout {
  double width = 0.0;
  double height = 0.0;
  std::vector<LocalBlock> blocks;
  std::vector<LocalStreet> streets;  // pre-order: own street first
  std::vector<LocalSide> sides;
  std::map<std::size_t, Point> branch_origins;

  void append(const LocalLayout& child, Point at) {
    auto shift = [at](Point p) { return Point{p.x + at.x, p.y + at.y}; };
    for (auto b : child.blocks) {
      b.origin = shift(b.origin);
      blocks.push_back(b);
    }
    for (auto s : child.streets) {
      s.start = shift(s.start);
      s.end = shift(s.end);
      streets.push_back(s);
    }
    for (auto side : child.sides) {
      for (auto& r : side.items) {
        r.x += at.x;
        r.y += at.y;
      }
      sides.push_back(side);
    }
    for (const auto& [node, p] : child.branch_origins) branch_origins[node] = shift(p);
  }
};

class StreetLayoutPass {
 public:
  StreetLayoutPass(const FeatureTree& tree, const std::vector<BlockLayout>& blocks, const ClassGraph& graph,
                   const StreetConfig& config)
      : tree_(tree), blocks_(blocks), config_(config) {
    const std::size_t k = blocks.size();
    cluster_of_class_.assign(graph.size(), 0);
    for (const auto& b : blocks)
      for (const auto& p : b.placements) cluster_of_class_[p.class_index] = b.cluster;
    pull_.assign(k, std::vector<double>(k, 0.0));
    for (const auto& [key, w] : graph.edges()) {
      auto a = cluster_of_class_[key.first], b = cluster_of_class_[key.second];
      if (a == b) continue;
      pull_[a][b] += w * w;
      pull_[b][a] += w * w;
    }
  }

  struct Previous {
    std::vector<Point> centroids;  // per cluster, world
    std::map<std::size_t, Point> branch_origins;
  };

  LocalLayout run(const std::optional<Previous>& previous) {
    previous_ = &previous;
    const auto& root = tree_.nodes[tree_.root];
    std::vector<std::size_t> children = root.is_leaf() ? std::vector<std::size_t>{tree_.root} : root.children;
    return layout_branch(tree_.root, children, Axis::horizontal, 0, std::nullopt);
  }

  const std::vector<std::vector<double>>& pull() const noexcept { return pull_; }

 private:
  LocalLayout layout_leaf(std::size_t node) const {
    const auto& block = blocks_.at(*tree_.nodes[node].cluster);
    LocalLayout out;
    out.width = block.width * config_.cell_size;
    out.height = block.depth * config_.cell_size;
    out.blocks.push_back({block.cluster, {0, 0}, node, 0});
    return out;
  }

  struct Packed {
    double width = 0, height = 0;
    std::vector<std::optional<Point>> origins;  // per child
    std::vector<int> side_of;
    double side0_depth = 0;
  };

  // Packs the filled slots of both sides along the street; empty slots collapse.
  Packed pack(Axis axis, const std::vector<LocalLayout>& kids,
              const std::vector<std::vector<std::optional<std::size_t>>>& slots) const {
    Packed out;
    out.origins.assign(kids.size(), std::nullopt);
    out.side_of.assign(kids.size(), -1);
    const bool horizontal = axis == Axis::horizontal;
    auto along = [&](const LocalLayout& l) { return horizontal ? l.width : l.height; };
    auto across = [&](const LocalLayout& l) { return horizontal ? l.height : l.width; };
    double depth[2] = {0, 0}, length[2] = {0, 0};
    for (int s = 0; s < 2; ++s) {
      for (const auto& slot : slots[s]) {
        if (!slot) continue;
        depth[s] = std::max(depth[s], across(kids[*slot]));
      }
    }
    for (int s = 0; s < 2; ++s) {
      double cursor = 0;
      bool first = true;
      for (const auto& slot : slots[s]) {
        if (!slot) continue;
        if (!first) cursor += config_.separator_width;
        first = false;
        const auto& kid = kids[*slot];
        double cross = s == 0 ? depth[0] - across(kid) : depth[0] + config_.street_width;
        out.origins[*slot] = horizontal ? Point{cursor, cross} : Point{cross, cursor};
        out.side_of[*slot] = s;
        cursor += along(kid);
      }
      length[s] = cursor;
    }
    double street_length = std::max({length[0], length[1], config_.cell_size});
    double thickness = depth[0] + config_.street_width + depth[1];
    out.width = horizontal ? street_length : thickness;
    out.height = horizontal ? thickness : street_length;
    out.side0_depth = depth[0];
    return out;
  }

  static Point offset(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }

  double slot_energy(std::size_t owner, const std::vector<LocalLayout>& kids, const Packed& packed) const {
    const std::size_t k = blocks_.size();
    Point base{0, 0};
    if (*previous_) {
      auto it = (*previous_)->branch_origins.find(owner);
      if (it != (*previous_)->branch_origins.end()) base = it->second;
    }
    std::vector<std::optional<Point>> where(k);
    for (std::size_t c = 0; c < kids.size(); ++c) {
      if (!packed.origins[c]) continue;
      for (const auto& b : kids[c].blocks) {
        const auto& layout = blocks_[b.cluster];
        Point centre{b.origin.x + layout.width * config_.cell_size / 2, b.origin.y + layout.depth * config_.cell_size / 2};
        where[b.cluster] = offset(offset(base, *packed.origins[c]), centre);
      }
    }
    double h = 0;
    for (std::size_t a = 0; a < k; ++a) {
      if (!where[a]) continue;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a || pull_[a][b] == 0.0) continue;
        Point other;
        if (where[b]) {
          if (b < a) continue;  // counted from the other side
          other = *where[b];
        } else if (*previous_) {
          other = (*previous_)->centroids[b];
        } else {
          continue;
        }
        double dx = where[a]->x - other.x, dy = where[a]->y - other.y;
        h += pull_[a][b] * (dx * dx + dy * dy);
      }
    }
    return h;
  }

  LocalLayout layout_branch(std::size_t owner, const std::vector<std::size_t>& children, Axis axis,
                            std::size_t depth, std::optional<std::size_t> parent_owner) {
    const Axis child_axis = axis == Axis::horizontal ? Axis::vertical : Axis::horizontal;
    std::vector<LocalLayout> kids;
    kids.reserve(children.size());
    for (auto c : children) {
      const auto& node = tree_.nodes[c];
      kids.push_back(node.is_leaf() ? layout_leaf(c) : layout_branch(c, node.children, child_axis, depth + 1, owner));
    }

    const std::size_t per_side = (children.size() + 1) / 2;
    std::vector<std::vector<std::optional<std::size_t>>> slots(2, std::vector<std::optional<std::size_t>>(per_side));
    for (std::size_t c = 0; c < kids.size(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      int best_side = -1;
      std::size_t best_slot = 0;
      for (int s = 0; s < 2; ++s) {
        for (std::size_t slot = 0; slot < per_side; ++slot) {
          if (slots[s][slot]) continue;
          slots[s][slot] = c;
          double h = slot_energy(owner, kids, pack(axis, kids, slots));
          slots[s][slot].reset();
          if (h < best - 1e-12) {
            best = h;
            best_side = s;
            best_slot = slot;
          }
        }
      }
      slots[best_side][best_slot] = c;
    }

    auto packed = pack(axis, kids, slots);
    LocalLayout out;
    out.width = packed.width;
    out.height = packed.height;
    out.branch_origins[owner] = {0, 0};
    const double mid = packed.side0_depth + config_.street_width / 2;
    LocalStreet street{owner, parent_owner, axis, {}, {}, depth};
    if (axis == Axis::horizontal) {
      street.start = {0, mid};
      street.end = {packed.width, mid};
    } else {
      street.start = {mid, 0};
      street.end = {mid, packed.height};
    }
    out.streets.push_back(street);

    for (int s = 0; s < 2; ++s) {
      LocalSide side{owner, s, {}};
      for (const auto& slot : slots[s]) {
        if (!slot) continue;
        const auto& kid = kids[*slot];
        Point at = *packed.origins[*slot];
        side.items.push_back({at.x, at.y, kid.width, kid.height});
      }
      if (!side.items.empty()) out.sides.push_back(side);
    }
    for (std::size_t c = 0; c < kids.size(); ++c) {
      LocalLayout kid = kids[c];
      for (auto& b : kid.blocks) {
        if (b.owner == children[c] && tree_.nodes[children[c]].is_leaf()) {
          b.owner = owner;
          b.side = packed.side_of[c];
        }
      }
      out.append(kid, *packed.origins[c]);
    }
    return out;
  }

  const FeatureTree& tree_;
  const std::vector<BlockLayout>& blocks_;
  StreetConfig config_;
  std::vector<std::size_t> cluster_of_class_;
  std::vector<std::vector<double>> pull_;  // sum of d^2 between clusters, symmetric
  const std::optional<Previous>* previous_ = nullptr;
};

inline CityMap assemble_city(const FeatureTree& tree, const std::vector<BlockLayout>& blocks, const LocalLayout& local,
                             const StreetConfig& config) {
  CityMap map;
  map.cell_size = config.cell_size;
  map.tree = tree;
  map.bounds = {0, 0, local.width, local.height};

  std::map<std::size_t, std::size_t> street_of_owner;
  for (const auto& s : local.streets) {
    Street street;
    street.id = map.streets.size();
    street.axis = s.axis;
    street.kind = StreetKind::branch;
    street.start = s.start;
    street.end = s.end;
    street.width = config.street_width;
    street.depth = s.depth;
    street.tree_node = s.owner;
    if (s.parent_owner) street.parent = street_of_owner.at(*s.parent_owner);
    street_of_owner[s.owner] = street.id;
    map.streets.push_back(street);
  }
  for (const auto& side : local.sides) map.street_sides.push_back({street_of_owner.at(side.owner), side.side, side.items});

  map.blocks.resize(blocks.size());
  for (const auto& b : local.blocks) {
    auto& placed = map.blocks.at(b.cluster);
    placed.layout = blocks.at(b.cluster);
    placed.origin = b.origin;
    placed.tree_leaf = tree.leaf_of_cluster(b.cluster);
    placed.street = street_of_owner.at(b.owner);
    placed.side = b.side;
  }

  std::size_t class_count = 0;
  for (const auto& b : blocks) class_count += b.placements.size();
  map.buildings.resize(class_count);
  for (std::size_t k = 0; k < map.blocks.size(); ++k) {
    const auto& block = map.blocks[k];
    for (const auto& p : block.layout.placements) {
      auto& site = map.buildings.at(p.class_index);
      site.class_index = p.class_index;
      site.block = k;
      site.center = {block.origin.x + (p.column + 0.5) * config.cell_size,
                     block.origin.y + (p.row + 0.5) * config.cell_size};
      site.column = p.column;
      site.row = p.row;
      site.level = p.level;
      site.slope = block.layout.elevation_of(p.level);
    }
  }
  return map;
}

}  // namespace detail

// Street-and-block tree layout. Each branch of the feature tree becomes a street,
// child streets run orthogonally to their parent, and children sit in slots on
// either side of their street. Slots are chosen greedily (in child order) to
// minimise the link energy between block centroids, using the previous pass's
// positions for everything not yet placed. Whole passes repeat while the full
// per-building energy keeps decreasing.
inline CityMap layout_streets(const FeatureTree& tree, const std::vector<BlockLayout>& blocks, const ClassGraph& graph,
                              const StreetConfig& config = {}) {
  if (tree.nodes.empty()) throw ValidationError("feature tree is empty");
  for (std::size_t c = 0; c < blocks.size(); ++c)
    if (blocks[c].cluster != c) throw ValidationError("block layouts must be indexed by cluster id");

  detail::StreetLayoutPass pass(tree, blocks, graph, config);
  std::optional<detail::StreetLayoutPass::Previous> previous;
  std::optional<CityMap> best;
  std::vector<double> history;

  for (std::size_t round = 0; round < std::max<std::size_t>(config.max_passes, 1); ++round) {
    auto local = pass.run(previous);
    auto map = detail::assemble_city(tree, blocks, local, config);
    double energy = street_energy(map, graph);
    if (best && !(energy < history.back() - config.min_decrease)) break;

    detail::StreetLayoutPass::Previous next;
    next.branch_origins = local.branch_origins;
    next.centroids.resize(blocks.size());
    for (std::size_t c = 0; c < blocks.size(); ++c) next.centroids[c] = map.blocks[c].rect(config.cell_size).center();
    previous = std::move(next);
    history.push_back(energy);
    best = std::move(map);
  }
  best->energy_history = history;
  return *best;
}

// Inserts a separator street into every gap between neighbouring items on the
// same side of a street. Existing separators are replaced.
inline CityMap place_separators(CityMap map, double separator_width = 0.5) {
  std::erase_if(map.streets, [](const Street& s) { return s.kind == StreetKind::separator; });
  const std::size_t branch_count = map.streets.size();
  for (const auto& side : map.street_sides) {
    const Street street = map.streets.at(side.street);  // copy: push_back below reallocates
    if (street.id >= branch_count) continue;
    for (std::size_t k = 1; k < side.items.size(); ++k) {
      const auto& a = side.items[k - 1];
      const auto& b = side.items[k];
      Street sep;
      sep.id = map.streets.size();
      sep.kind = StreetKind::separator;
      sep.width = separator_width;
      sep.depth = street.depth + 1;
      sep.parent = street.id;
      if (street.axis == Axis::horizontal) {
        sep.axis = Axis::vertical;
        double x = (a.right() + b.x) / 2;
        double edge = side.side == 0 ? street.start.y - street.width / 2 : street.start.y + street.width / 2;
        double reach = std::max(a.height, b.height);
        sep.start = {x, edge};
        sep.end = {x, side.side == 0 ? edge - reach : edge + reach};
      } else {
        sep.axis = Axis::horizontal;
        double y = (a.bottom() + b.y) / 2;
        double edge = side.side == 0 ? street.start.x - street.width / 2 : street.start.x + street.width / 2;
        double reach = std::max(a.width, b.width);
        sep.start = {edge, y};
        sep.end = {side.side == 0 ? edge - reach : edge + reach, y};
      }
      map.streets.push_back(sep);
    }
  }
  return map;
}

}  // namespace sarfmap
