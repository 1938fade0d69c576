#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sarfmap/clustering.hpp"
#include "sarfmap/errors.hpp"

namespace sarfmap {

struct FeatureNode {
  std::optional<std::size_t> cluster;  // set for leaves
  std::vector<std::size_t> children;   // set for branches
  std::optional<std::size_t> parent;
  std::size_t class_count = 0;
  std::size_t min_class = 0;

  bool is_leaf() const noexcept { return cluster.has_value(); }
};

// n-ary tree of features: one leaf per cluster, branches derived from the part
// of the dendrogram above the cut.
struct FeatureTree {
  std::vector<FeatureNode> nodes;
  std::size_t root = 0;

  const FeatureNode& node(std::size_t id) const { return nodes.at(id); }

  std::size_t depth(std::size_t id) const {
    std::size_t d = 0;
    while (nodes.at(id).parent) {
      id = *nodes[id].parent;
      ++d;
    }
    return d;
  }

  // Leaves in depth-first child order.
  std::vector<std::size_t> leaves() const {
    std::vector<std::size_t> out, stack{root};
    while (!stack.empty()) {
      auto id = stack.back();
      stack.pop_back();
      if (nodes[id].is_leaf()) {
        out.push_back(id);
      } else {
        for (auto it = nodes[id].children.rbegin(); it != nodes[id].children.rend(); ++it) stack.push_back(*it);
      }
    }
    return out;
  }

  std::size_t leaf_of_cluster(std::size_t cluster) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].cluster == cluster) return i;
    throw ValidationError("no leaf for cluster " + std::to_string(cluster));
  }

  // Number of tree edges on the path between two nodes.
  std::size_t distance(std::size_t a, std::size_t b) const {
    std::size_t da = depth(a), db = depth(b), hops = 0;
    while (da > db) { a = *nodes[a].parent; --da; ++hops; }
    while (db > da) { b = *nodes[b].parent; --db; ++hops; }
    while (a != b) {
      a = *nodes[a].parent;
      b = *nodes[b].parent;
      hops += 2;
    }
    return hops;
  }

  std::size_t lowest_common_ancestor(std::size_t a, std::size_t b) const {
    std::size_t da = depth(a), db = depth(b);
    while (da > db) { a = *nodes[a].parent; --da; }
    while (db > da) { b = *nodes[b].parent; --db; }
    while (a != b) {
      a = *nodes[a].parent;
      b = *nodes[b].parent;
    }
    return a;
  }
};

// Builds the feature tree from a dendrogram and a cut of it. A branch directly
// below another branch is flattened into it when their merge Q values differ by
// less than contraction_ratio * |peak Q|. Children are ordered by descending
// class count, then by smallest class index. A forest gets a synthetic root.
inline FeatureTree build_feature_tree(const Dendrogram& dendrogram, const Partition& partition,
                                      double contraction_ratio = 0.01) {
  if (partition.size() != dendrogram.leaf_count)
    throw ValidationError("partition and dendrogram cover different class sets");

  const std::size_t node_count = dendrogram.node_count();
  constexpr std::size_t kMixed = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(node_count), size(node_count), min_leaf(node_count);
  for (std::size_t i = 0; i < dendrogram.leaf_count; ++i) {
    label[i] = partition.cluster_of(i);
    size[i] = 1;
    min_leaf[i] = i;
  }
  for (std::size_t k = 0; k < dendrogram.merges.size(); ++k) {
    const auto& m = dendrogram.merges[k];
    auto id = dendrogram.leaf_count + k;
    label[id] = (label[m.left] != kMixed && label[m.left] == label[m.right]) ? label[m.left] : kMixed;
    size[id] = size[m.left] + size[m.right];
    min_leaf[id] = std::min(min_leaf[m.left], min_leaf[m.right]);
  }

  auto cluster_sizes = partition.clusters();
  std::vector<std::optional<std::size_t>> cut_node(partition.cluster_count());
  for (std::size_t id = 0; id < node_count; ++id) {
    if (label[id] == kMixed || size[id] != cluster_sizes[label[id]].size()) continue;
    cut_node[label[id]] = id;
  }
  for (std::size_t c = 0; c < cut_node.size(); ++c)
    if (!cut_node[c]) throw ValidationError("partition is not a cut of the dendrogram (cluster " + std::to_string(c) + ")");
  for (std::size_t k = 0; k < dendrogram.merges.size(); ++k) {
    const auto& m = dendrogram.merges[k];
    if (label[dendrogram.leaf_count + k] != kMixed) continue;
    for (auto child : {m.left, m.right})
      if (label[child] != kMixed && cut_node[label[child]] != child)
        throw ValidationError("partition is not a cut of the dendrogram");
  }

  double peak = dendrogram.initial_q;
  for (const auto& m : dendrogram.merges) peak = std::max(peak, m.q_after_merge);
  const double threshold = contraction_ratio * std::abs(peak);

  FeatureTree tree;
  auto order_children = [&tree](std::vector<std::size_t>& children) {
    std::sort(children.begin(), children.end(), [&tree](std::size_t a, std::size_t b) {
      const auto& na = tree.nodes[a];
      const auto& nb = tree.nodes[b];
      if (na.class_count != nb.class_count) return na.class_count > nb.class_count;
      return na.min_class < nb.min_class;
    });
  };

  // Iterative post-order construction keeps deep dendrograms off the call stack.
  auto make = [&](std::size_t top) {
    struct Frame {
      std::size_t dnode;
      std::size_t tnode;
      std::vector<std::size_t> pending;  // dendrogram nodes still to expand into children
      bool expanded = false;
    };
    auto new_node = [&](std::size_t dnode) {
      FeatureNode fn;
      fn.class_count = size[dnode];
      fn.min_class = min_leaf[dnode];
      if (label[dnode] != kMixed) fn.cluster = label[dnode];
      tree.nodes.push_back(fn);
      return tree.nodes.size() - 1;
    };
    std::size_t top_id = new_node(top);
    if (label[top] != kMixed) return top_id;

    std::vector<Frame> stack;
    stack.push_back({top, top_id, {}});
    while (!stack.empty()) {
      auto& frame = stack.back();
      if (!frame.expanded) {
        frame.expanded = true;
        // Flatten close descendants into this branch.
        std::vector<std::size_t> todo{frame.dnode};
        std::vector<std::size_t> direct;
        while (!todo.empty()) {
          auto d = todo.back();
          todo.pop_back();
          const auto& m = dendrogram.merge_of(d);
          for (auto child : {m.right, m.left}) {
            bool contract = label[child] == kMixed &&
                            std::abs(dendrogram.merge_of(d).q_after_merge -
                                     dendrogram.merge_of(child).q_after_merge) < threshold;
            if (contract) {
              todo.push_back(child);
            } else {
              direct.push_back(child);
            }
          }
        }
        frame.pending = direct;
      }
      if (frame.pending.empty()) {
        order_children(tree.nodes[frame.tnode].children);
        stack.pop_back();
        continue;
      }
      auto child = frame.pending.back();
      frame.pending.pop_back();
      auto parent_id = frame.tnode;
      auto child_id = new_node(child);
      tree.nodes[child_id].parent = parent_id;
      tree.nodes[parent_id].children.push_back(child_id);
      if (label[child] == kMixed) stack.push_back({child, child_id, {}});
    }
    return top_id;
  };

  std::vector<std::size_t> tops;
  for (auto root : dendrogram.roots()) tops.push_back(make(root));
  if (tops.size() == 1) {
    tree.root = tops.front();
  } else {
    FeatureNode synthetic;
    synthetic.min_class = dendrogram.leaf_count;
    for (auto t : tops) {
      synthetic.class_count += tree.nodes[t].class_count;
      synthetic.min_class = std::min(synthetic.min_class, tree.nodes[t].min_class);
      synthetic.children.push_back(t);
    }
    tree.nodes.push_back(synthetic);
    tree.root = tree.nodes.size() - 1;
    for (auto t : tops) tree.nodes[t].parent = tree.root;
    order_children(tree.nodes[tree.root].children);
  }
  return tree;
}

inline std::string feature_tree_to_text(const FeatureTree& tree) {
  std::string out;
  struct Item {
    std::size_t id;
    std::size_t indent;
  };
  std::vector<Item> stack{{tree.root, 0}};
  while (!stack.empty()) {
    auto [id, indent] = stack.back();
    stack.pop_back();
    const auto& n = tree.nodes[id];
    out += std::string(indent * 2, ' ');
    if (n.is_leaf()) {
      out += "cluster " + std::to_string(*n.cluster) + " (" + std::to_string(n.class_count) + " classes)\n";
    } else {
      out += "branch (" + std::to_string(n.children.size()) + " children, " + std::to_string(n.class_count) +
             " classes)\n";
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back({*it, indent + 1});
    }
  }
  return out;
}

}  // namespace sarfmap
