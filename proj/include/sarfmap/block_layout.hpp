#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "sarfmap/errors.hpp"
#include "sarfmap/graph_model.hpp"

namespace sarfmap {

struct LayoutConfig {
  double penalty_a = 2.0;  // tie / reversed penalty
  double balance_b = 0.3;  // depth vs. width balance for in-order edges

  void validate() const {
    if (!(penalty_a > 0.0) || !(balance_b > 0.0)) throw ValidationError("layout constants a and b must be positive");
  }
};

// The subgraph induced by one cluster. Local node ids follow ascending class index.
struct BlockGraph {
  struct Edge {
    std::size_t source;
    std::size_t target;
    double weight;
  };

  std::vector<std::size_t> classes;  // local id -> ClassGraph index
  std::vector<Edge> edges;           // sorted by (source, target)
  std::vector<std::vector<ClassGraph::Arc>> out;
  std::vector<std::vector<ClassGraph::Arc>> in;

  std::size_t size() const noexcept { return classes.size(); }

  static BlockGraph induced(const ClassGraph& graph, std::span<const std::size_t> members) {
    BlockGraph block;
    block.classes.assign(members.begin(), members.end());
    std::sort(block.classes.begin(), block.classes.end());
    block.classes.erase(std::unique(block.classes.begin(), block.classes.end()), block.classes.end());
    const std::size_t n = block.classes.size();
    block.out.assign(n, {});
    block.in.assign(n, {});
    auto local = [&](std::size_t global) -> std::optional<std::size_t> {
      auto it = std::lower_bound(block.classes.begin(), block.classes.end(), global);
      if (it == block.classes.end() || *it != global) return std::nullopt;
      return static_cast<std::size_t>(it - block.classes.begin());
    };
    for (std::size_t s = 0; s < n; ++s) {
      for (const auto& arc : graph.out_arcs(block.classes[s])) {
        if (auto t = local(arc.node)) {
          block.edges.push_back({s, *t, arc.weight});
          block.out[s].push_back({*t, arc.weight});
          block.in[*t].push_back({s, arc.weight});
        }
      }
    }
    return block;
  }

  // Builds a block graph directly from local edges; handy for small hand-made cases.
  static BlockGraph from_edges(std::size_t n, std::span<const Edge> edges) {
    BlockGraph block;
    block.classes.resize(n);
    std::iota(block.classes.begin(), block.classes.end(), 0);
    block.out.assign(n, {});
    block.in.assign(n, {});
    block.edges.assign(edges.begin(), edges.end());
    std::sort(block.edges.begin(), block.edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.source, a.target) < std::tie(b.source, b.target); });
    for (const auto& e : block.edges) {
      if (e.source >= n || e.target >= n || e.source == e.target) throw ValidationError("invalid block edge");
      block.out[e.source].push_back({e.target, e.weight});
      block.in[e.target].push_back({e.source, e.weight});
    }
    return block;
  }
};

struct Level {
  std::size_t index = 0;             // 0 is the northmost level
  std::vector<std::size_t> members;  // local ids, ascending

  bool operator==(const Level&) const = default;
};

struct LevelDecomposition {
  std::vector<Level> levels;
  std::vector<int> level_of;      // local id -> level index
  std::size_t cycle_breaks = 0;   // times the greedy cycle-removal step fired
};

// Greedy level decomposition: repeatedly strip sources into the upper levels and
// (non-source) sinks into the lower levels. When neither exists, the single node
// with the largest out-degree minus in-degree (smallest id on ties) is treated as
// a source. Result is upper levels followed by lower levels.
inline LevelDecomposition greedy_level_decomposition(const BlockGraph& graph) {
  const std::size_t n = graph.size();
  if (n == 0) throw ValidationError("level decomposition needs at least one node");

  std::vector<std::set<std::size_t>> ins(n), outs(n);
  for (const auto& e : graph.edges) {
    outs[e.source].insert(e.target);
    ins[e.target].insert(e.source);
  }
  std::vector<bool> alive(n, true);
  std::size_t remaining = n;
  std::vector<std::vector<std::size_t>> up, low;
  LevelDecomposition result;

  while (remaining > 0) {
    std::vector<std::size_t> upper, lower;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && ins[v].empty()) upper.push_back(v);
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && !ins[v].empty() && outs[v].empty()) lower.push_back(v);
    if (upper.empty() && lower.empty()) {
      std::size_t pick = n;
      long best = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        long score = static_cast<long>(outs[v].size()) - static_cast<long>(ins[v].size());
        if (pick == n || score > best) {
          pick = v;
          best = score;
        }
      }
      upper.push_back(pick);
      ++result.cycle_breaks;
    }
    for (const auto* group : {&upper, &lower}) {
      for (auto c : *group) {
        alive[c] = false;
        --remaining;
        for (auto v : outs[c]) ins[v].erase(c);
        for (auto v : ins[c]) outs[v].erase(c);
        outs[c].clear();
        ins[c].clear();
      }
    }
    if (!upper.empty()) up.push_back(std::move(upper));
    if (!lower.empty()) low.insert(low.begin(), std::move(lower));
  }

  result.level_of.assign(n, 0);
  for (auto* part : {&up, &low}) {
    for (auto& members : *part) {
      Level level{result.levels.size(), std::move(members)};
      for (auto v : level.members) result.level_of[v] = static_cast<int>(level.index);
      result.levels.push_back(std::move(level));
    }
  }
  return result;
}

// Sum over cross-level neighbours of (d (x_i - x_j))^2, i.e. f(x_i | i).
inline double horizontal_energy(const BlockGraph& graph, std::span<const int> level_of, std::span<const double> x,
                                std::size_t i, double xi) {
  double f = 0.0;
  for (const auto& arc : graph.in[i])
    if (level_of[arc.node] != level_of[i]) f += std::pow(arc.weight * (xi - x[arc.node]), 2);
  for (const auto& arc : graph.out[i])
    if (level_of[arc.node] != level_of[i]) f += std::pow(arc.weight * (xi - x[arc.node]), 2);
  return f;
}

// Closed-form minimiser of f(x_i | i) for fixed neighbours: the d^2-weighted mean of
// the cross-level neighbours' positions. Empty when i has no such neighbour.
inline std::optional<double> horizontal_target(const BlockGraph& graph, std::span<const int> level_of,
                                               std::span<const double> x, std::size_t i) {
  double num = 0.0, den = 0.0;
  for (const auto* arcs : {&graph.in[i], &graph.out[i]}) {
    for (const auto& arc : *arcs) {
      if (level_of[arc.node] == level_of[i]) continue;
      double w2 = arc.weight * arc.weight;
      num += w2 * x[arc.node];
      den += w2;
    }
  }
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

struct HorizontalArrangement {
  std::vector<int> column;           // local id -> grid column
  std::vector<double> continuous_x;  // local id -> minimiser of f given final neighbour columns
  std::size_t sweeps = 0;
};

// Alternating row sweeps (north to south, then back). Each row moves its
// buildings to the d^2-weighted mean of their cross-level neighbours, then
// snaps them to distinct integer columns in order of that target (ties by id).
// Stops when a sweep changes nothing, or after 100 sweeps.
inline HorizontalArrangement arrange_horizontal(const BlockGraph& graph, std::span<const int> level_of,
                                                const std::vector<std::vector<std::size_t>>& rows, int width) {
  const std::size_t n = graph.size();
  HorizontalArrangement out;
  out.column.assign(n, 0);
  std::vector<double> x(n, 0.0);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) > width) throw ValidationError("row wider than block");
    int offset = (width - static_cast<int>(row.size())) / 2;
    for (std::size_t k = 0; k < row.size(); ++k) {
      out.column[row[k]] = offset + static_cast<int>(k);
      x[row[k]] = out.column[row[k]];
    }
  }

  constexpr std::size_t kMaxSweeps = 100;
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    for (std::size_t step = 0; step < rows.size(); ++step) {
      const auto& row = rows[sweep % 2 == 0 ? step : rows.size() - 1 - step];
      keyed.clear();
      for (auto v : row) keyed.emplace_back(horizontal_target(graph, level_of, x, v).value_or(x[v]), v);
      std::sort(keyed.begin(), keyed.end());
      const int k = static_cast<int>(keyed.size());
      int previous = -1;
      for (int idx = 0; idx < k; ++idx) {
        auto [target, v] = keyed[idx];
        long snapped = std::lround(target);
        long lo = previous + 1;
        long hi = width - (k - idx);
        int col = static_cast<int>(std::clamp(snapped, lo, hi));
        if (col != out.column[v]) changed = true;
        out.column[v] = col;
        previous = col;
      }
      for (auto v : row) x[v] = out.column[v];
    }
    out.sweeps = sweep + 1;
    if (!changed) break;
  }

  out.continuous_x.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.continuous_x[v] = horizontal_target(graph, level_of, x, v).value_or(x[v]);
  return out;
}

// Penalty over all block edges i -> j (i depends on j), y growing southward:
//   y_i >= y_j (tie or reversed): d_ij (|y_i - y_j| + a)
//   y_i <  y_j (in order):        d_ij b |y_i - y_j|
inline double depth_penalty(const BlockGraph& graph, std::span<const int> row_of, const LayoutConfig& config) {
  double g = 0.0;
  for (const auto& e : graph.edges) {
    double dy = std::abs(row_of[e.source] - row_of[e.target]);
    if (row_of[e.source] >= row_of[e.target]) {
      g += e.weight * (dy + config.penalty_a);
    } else {
      g += e.weight * config.balance_b * dy;
    }
  }
  return g;
}

struct Placement {
  std::size_t class_index = 0;
  int column = 0;
  int row = 0;
  int level = 0;

  bool operator==(const Placement&) const = default;
};

struct BlockLayout {
  std::size_t cluster = 0;
  int depth = 1;
  int width = 1;
  int level_count = 1;
  double penalty = 0.0;
  std::size_t cycle_breaks = 0;
  std::vector<Placement> placements;  // ascending class index
  std::vector<double> continuous_x;   // parallel to placements

  // Ground elevation step for a level: the top level sits highest.
  int elevation_of(int level) const noexcept { return level_count - 1 - level; }

  bool operator==(const BlockLayout&) const = default;
};

// Dealing order for rows: by level, then by column in a one-row-per-level arrangement.
inline std::vector<std::size_t> block_order(const BlockGraph& graph, const LevelDecomposition& levels) {
  std::vector<std::vector<std::size_t>> rows;
  std::size_t widest = 1;
  for (const auto& level : levels.levels) {
    rows.push_back(level.members);
    widest = std::max(widest, level.members.size());
  }
  auto prior = arrange_horizontal(graph, levels.level_of, rows, static_cast<int>(widest));
  std::vector<std::size_t> order(graph.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(levels.level_of[a], prior.column[a], a) < std::tie(levels.level_of[b], prior.column[b], b);
  });
  return order;
}

// Lays the block out with exactly `depth` rows: buildings are dealt in `order`
// into rows whose sizes differ by at most one, width = ceil(n / depth).
inline BlockLayout layout_with_depth(const BlockGraph& graph, const LevelDecomposition& levels,
                                     std::span<const std::size_t> order, const LayoutConfig& config, int depth) {
  const std::size_t n = graph.size();
  if (depth < 1 || static_cast<std::size_t>(depth) > n) throw ValidationError("block depth out of range");
  const std::size_t d = static_cast<std::size_t>(depth);
  const int width = static_cast<int>((n + d - 1) / d);
  const std::size_t base = n / d, extra = n % d;

  std::vector<std::vector<std::size_t>> rows(d);
  std::vector<int> row_of(n, 0);
  std::size_t cursor = 0;
  for (std::size_t r = 0; r < d; ++r) {
    std::size_t count = base + (r < extra ? 1 : 0);
    for (std::size_t k = 0; k < count; ++k, ++cursor) {
      rows[r].push_back(order[cursor]);
      row_of[order[cursor]] = static_cast<int>(r);
    }
  }
  auto arrangement = arrange_horizontal(graph, levels.level_of, rows, width);

  BlockLayout layout;
  layout.depth = depth;
  layout.width = width;
  layout.level_count = static_cast<int>(levels.levels.size());
  layout.cycle_breaks = levels.cycle_breaks;
  layout.penalty = depth_penalty(graph, row_of, config);
  for (std::size_t v = 0; v < n; ++v) {
    layout.placements.push_back({graph.classes[v], arrangement.column[v], row_of[v], levels.level_of[v]});
    layout.continuous_x.push_back(arrangement.continuous_x[v]);
  }
  return layout;
}

// Tries every depth 1..n and keeps the one with the smallest penalty (smaller
// depth on ties).
inline BlockLayout optimize_depth(const BlockGraph& graph, const LevelDecomposition& levels,
                                  const LayoutConfig& config, std::size_t cluster = 0) {
  config.validate();
  auto order = block_order(graph, levels);
  std::optional<BlockLayout> best;
  for (int depth = 1; depth <= static_cast<int>(graph.size()); ++depth) {
    auto candidate = layout_with_depth(graph, levels, order, config, depth);
    if (!best || candidate.penalty < best->penalty) best = std::move(candidate);
  }
  best->cluster = cluster;
  return *best;
}

inline BlockLayout layout_block(const ClassGraph& graph, std::span<const std::size_t> members, std::size_t cluster,
                                const LayoutConfig& config = {}) {
  auto block = BlockGraph::induced(graph, members);
  auto levels = greedy_level_decomposition(block);
  return optimize_depth(block, levels, config, cluster);
}

}  // namespace sarfmap
