#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sarfmap/errors.hpp"
#include "sarfmap/graph_model.hpp"

namespace sarfmap {

// Assignment of every class (by ClassGraph index) to a cluster. Cluster ids are
// dense and numbered in order of each cluster's smallest class index.
class Partition {
 public:
  Partition() = default;

  explicit Partition(const std::vector<std::size_t>& labels) {
    std::map<std::size_t, std::size_t> renumber;
    assignment_.reserve(labels.size());
    for (auto label : labels) {
      auto [it, inserted] = renumber.try_emplace(label, renumber.size());
      assignment_.push_back(it->second);
    }
    cluster_count_ = renumber.size();
  }

  std::size_t size() const noexcept { return assignment_.size(); }
  std::size_t cluster_count() const noexcept { return cluster_count_; }
  std::size_t cluster_of(std::size_t class_index) const { return assignment_.at(class_index); }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }

  std::vector<std::vector<std::size_t>> clusters() const {
    std::vector<std::vector<std::size_t>> out(cluster_count_);
    for (std::size_t i = 0; i < assignment_.size(); ++i) out[assignment_[i]].push_back(i);
    return out;
  }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> assignment_;
  std::size_t cluster_count_ = 0;
};

// Directed weighted modularity:
//   Q = (1/W) sum_{i,j} [w_ij - s_out(i) s_in(j) / W] delta(c_i, c_j)
// evaluated per cluster as sum_c [ e_c / W - S_out(c) S_in(c) / W^2 ].
inline double modularity(const ClassGraph& graph, const Partition& partition) {
  if (partition.size() != graph.size())
    throw ValidationError("partition does not cover the graph's classes");
  const double total = graph.total_weight();
  if (!(total > 0.0)) throw Error("modularity undefined: graph has zero total weight");

  const std::size_t k = partition.cluster_count();
  std::vector<double> intra(k, 0.0), s_out(k, 0.0), s_in(k, 0.0);
  for (const auto& [key, w] : graph.edges()) {
    auto cs = partition.cluster_of(key.first);
    if (cs == partition.cluster_of(key.second)) intra[cs] += w;
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    s_out[partition.cluster_of(i)] += graph.out_strength(i);
    s_in[partition.cluster_of(i)] += graph.in_strength(i);
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) q += intra[c] / total - (s_out[c] * s_in[c]) / (total * total);
  return q;
}

struct MergeStep {
  std::size_t left;   // dendrogram node ids; leaves are class indices
  std::size_t right;
  std::size_t merge_order;
  double q_after_merge;

  bool operator==(const MergeStep&) const = default;
};

// Binary merge tree. Node ids 0..leaf_count-1 are leaves (class indices); merge
// k creates node leaf_count + k.
struct Dendrogram {
  std::size_t leaf_count = 0;
  double initial_q = 0.0;  // Q of the all-singletons partition
  std::vector<MergeStep> merges;

  std::size_t node_count() const noexcept { return leaf_count + merges.size(); }
  bool is_leaf(std::size_t node) const noexcept { return node < leaf_count; }
  const MergeStep& merge_of(std::size_t node) const { return merges.at(node - leaf_count); }

  std::vector<std::size_t> roots() const {
    std::vector<bool> has_parent(node_count(), false);
    for (const auto& m : merges) has_parent[m.left] = has_parent[m.right] = true;
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < node_count(); ++n)
      if (!has_parent[n]) out.push_back(n);
    return out;
  }

  std::vector<std::size_t> leaves_under(std::size_t node) const {
    std::vector<std::size_t> out, stack{node};
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (is_leaf(n)) {
        out.push_back(n);
      } else {
        stack.push_back(merge_of(n).right);
        stack.push_back(merge_of(n).left);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Q after each step: index 0 is the singleton partition, index k is after k merges.
  std::vector<double> q_history() const {
    std::vector<double> out{initial_q};
    for (const auto& m : merges) out.push_back(m.q_after_merge);
    return out;
  }

  bool operator==(const Dendrogram&) const = default;
};

// Greedy agglomeration (CNM-style) on directed weighted modularity. Only pairs of
// clusters joined by at least one edge are merge candidates; merging continues
// past the modularity peak until every connected component is a single root.
// Ties within 1e-12 of the best gain go to the pair with the smallest
// (min class index, max class index) of the two clusters' representatives.
inline Dendrogram agglomerate(const ClassGraph& graph) {
  if (graph.empty()) throw ValidationError("cannot cluster an empty graph");

  struct Link {
    double out = 0.0;  // weight from this cluster to the neighbour
    double in = 0.0;   // weight from the neighbour to this cluster
  };
  struct Cluster {
    bool active = true;
    std::size_t node = 0;
    double s_out = 0.0;
    double s_in = 0.0;
    std::map<std::size_t, Link> neighbours;
  };

  const std::size_t n = graph.size();
  const double total = graph.total_weight();
  Dendrogram dendrogram;
  dendrogram.leaf_count = n;
  if (!(total > 0.0)) return dendrogram;

  // Clusters live in the slot of their smallest class index.
  std::vector<Cluster> clusters(n);
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    clusters[i].node = i;
    clusters[i].s_out = graph.out_strength(i);
    clusters[i].s_in = graph.in_strength(i);
    q -= clusters[i].s_out * clusters[i].s_in / (total * total);
  }
  for (const auto& [key, w] : graph.edges()) {
    auto [s, t] = key;
    clusters[s].neighbours[t].out += w;
    clusters[t].neighbours[s].in += w;
  }
  dendrogram.initial_q = q;

  auto gain = [&](std::size_t a, std::size_t b, const Link& link) {
    const auto& ca = clusters[a];
    const auto& cb = clusters[b];
    return (link.out + link.in) / total - (ca.s_out * cb.s_in + cb.s_out * ca.s_in) / (total * total);
  };

  constexpr double kTieTolerance = 1e-12;
  for (std::size_t step = 0;; ++step) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (!clusters[a].active) continue;
      for (const auto& [b, link] : clusters[a].neighbours) {
        if (b <= a) continue;
        best = std::max(best, gain(a, b, link));
        any = true;
      }
    }
    if (!any) break;

    std::size_t pick_a = n, pick_b = n;
    double pick_gain = 0.0;
    for (std::size_t a = 0; a < n && pick_a == n; ++a) {
      if (!clusters[a].active) continue;
      for (const auto& [b, link] : clusters[a].neighbours) {
        if (b <= a) continue;
        double g = gain(a, b, link);
        if (g >= best - kTieTolerance) {
          pick_a = a;
          pick_b = b;
          pick_gain = g;
          break;
        }
      }
    }

    auto& keep = clusters[pick_a];
    auto& gone = clusters[pick_b];
    q += pick_gain;
    const std::size_t new_node = n + step;
    dendrogram.merges.push_back({keep.node, gone.node, step, q});

    keep.neighbours.erase(pick_b);
    for (const auto& [x, link] : gone.neighbours) {
      if (x == pick_a) continue;
      auto& mine = keep.neighbours[x];
      mine.out += link.out;
      mine.in += link.in;
      auto& theirs = clusters[x].neighbours;
      auto moved = theirs.at(pick_b);
      theirs.erase(pick_b);
      theirs[pick_a].out += moved.out;
      theirs[pick_a].in += moved.in;
    }
    keep.s_out += gone.s_out;
    keep.s_in += gone.s_in;
    keep.node = new_node;
    gone.neighbours.clear();
    gone.active = false;
  }
  return dendrogram;
}

// Merge step with the highest Q over the agglomeration history; the earliest
// step wins ties.
inline std::size_t best_cut_step(const Dendrogram& dendrogram) {
  auto history = dendrogram.q_history();
  std::size_t best = 0;
  for (std::size_t k = 1; k < history.size(); ++k)
    if (history[k] > history[best] + 1e-12) best = k;
  return best;
}

// Partition obtained by applying the first `steps` merges.
inline Partition partition_after(const Dendrogram& dendrogram, std::size_t steps) {
  const std::size_t n = dendrogram.leaf_count;
  std::vector<std::size_t> parent(dendrogram.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < steps && k < dendrogram.merges.size(); ++k) {
    const auto& m = dendrogram.merges[k];
    parent[find(m.left)] = n + k;
    parent[find(m.right)] = n + k;
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = find(i);
  return Partition(labels);
}

inline Partition cut_dendrogram(const Dendrogram& dendrogram, const ClassGraph& graph) {
  if (dendrogram.leaf_count != graph.size()) throw ValidationError("dendrogram was not built from this graph");
  return partition_after(dendrogram, best_cut_step(dendrogram));
}

// Nested-list dump, e.g. "((a,b)@0.25,c)@0.4". One line per root.
inline std::string dendrogram_to_text(const Dendrogram& dendrogram, const ClassGraph& graph) {
  std::vector<std::string> text(dendrogram.node_count());
  for (std::size_t i = 0; i < dendrogram.leaf_count; ++i) text[i] = graph.entity(i).id;
  for (std::size_t k = 0; k < dendrogram.merges.size(); ++k) {
    const auto& m = dendrogram.merges[k];
    char q[32];
    std::snprintf(q, sizeof q, "%.6f", m.q_after_merge);
    text[dendrogram.leaf_count + k] = "(" + text[m.left] + "," + text[m.right] + ")@" + q;
  }
  std::string out;
  for (auto root : dendrogram.roots()) out += text[root] + "\n";
  return out;
}

}  // namespace sarfmap
