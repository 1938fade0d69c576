#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sarfmap/block_layout.hpp"
#include "test_support.hpp"

using namespace sarfmap;

namespace {

BlockGraph block(std::size_t n, std::vector<BlockGraph::Edge> edges) { return BlockGraph::from_edges(n, edges); }

std::vector<std::vector<std::size_t>> members(const LevelDecomposition& d) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& l : d.levels) out.push_back(l.members);
  return out;
}

}  // namespace

TEST(Levels, Chain) {
  auto d = greedy_level_decomposition(block(3, {{0, 1, 1}, {1, 2, 1}}));
  EXPECT_EQ(members(d), (std::vector<std::vector<std::size_t>>{{0}, {1}, {2}}));
  EXPECT_EQ(d.cycle_breaks, 0u);
}

TEST(Levels, TwoCycle) {
  auto d = greedy_level_decomposition(block(2, {{0, 1, 1}, {1, 0, 1}}));
  EXPECT_EQ(members(d), (std::vector<std::vector<std::size_t>>{{0}, {1}}));
  EXPECT_EQ(d.cycle_breaks, 1u);
}

TEST(Levels, IsolatedNode) {
  auto d = greedy_level_decomposition(block(1, {}));
  EXPECT_EQ(members(d), (std::vector<std::vector<std::size_t>>{{0}}));
}

TEST(Levels, SourcesUpSinksDown) {
  // 0 -> 2, 1 -> 2, 2 -> 3, 2 -> 4
  auto d = greedy_level_decomposition(block(5, {{0, 2, 1}, {1, 2, 1}, {2, 3, 1}, {2, 4, 1}}));
  EXPECT_EQ(members(d), (std::vector<std::vector<std::size_t>>{{0, 1}, {2}, {3, 4}}));
}

TEST(Levels, CycleBreakPrefersLargestOutMinusIn) {
  // 3-cycle 0->1->2->0 plus 2->1: node 2 has out 2, in 1
  auto d = greedy_level_decomposition(block(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {2, 1, 1}}));
  ASSERT_GE(d.levels.size(), 1u);
  EXPECT_EQ(d.levels[0].members, (std::vector<std::size_t>{2}));
}

TEST(Horizontal, SingleUpperNeighbour) {
  auto g = block(2, {{0, 1, 1}});
  std::vector<int> level{0, 1};
  std::vector<double> x{2.0, 0.0};
  EXPECT_DOUBLE_EQ(*horizontal_target(g, level, x, 1), 2.0);
}

TEST(Horizontal, WeightedMeanOfNeighbours) {
  // neighbours at x=0 with d=3 and x=4 with d=1
  auto g = block(3, {{0, 2, 3}, {1, 2, 1}});
  std::vector<int> level{0, 0, 1};
  std::vector<double> x{0.0, 4.0, 0.0};
  EXPECT_NEAR(*horizontal_target(g, level, x, 2), 0.4, 1e-12);
  EXPECT_NEAR(*horizontal_target(g, level, x, 2), oracle::weighted_minimum({{0.0, 3.0}, {4.0, 1.0}}), 1e-6);
  // the target is a minimum of f
  double at = horizontal_energy(g, level, x, 2, 0.4);
  EXPECT_LT(at, horizontal_energy(g, level, x, 2, 0.41));
  EXPECT_LT(at, horizontal_energy(g, level, x, 2, 0.39));
}

TEST(Horizontal, SameLevelNeighboursIgnored) {
  auto g = block(2, {{0, 1, 1}});
  std::vector<int> level{0, 0};
  std::vector<double> x{5.0, 1.0};
  EXPECT_FALSE(horizontal_target(g, level, x, 1).has_value());
}

TEST(Horizontal, UnconnectedBuildingKeepsCentredColumn) {
  auto g = block(4, {{1, 2, 1}});
  std::vector<int> level{0, 1, 1, 2};
  auto a = arrange_horizontal(g, level, {{0}, {1, 2}, {3}}, 3);
  EXPECT_EQ(a.column[0], 1);
  EXPECT_EQ(a.column[3], 1);
  EXPECT_DOUBLE_EQ(a.continuous_x[0], 1.0);
}

TEST(Horizontal, ColumnsInjectivePerRowAndContinuousIsClosedForm) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    auto og = oracle::random_graph(rng, 12, 0.2);
    std::vector<BlockGraph::Edge> edges;
    for (const auto& e : og.edges) edges.push_back({e.source, e.target, e.weight});
    auto g = block(12, edges);
    auto levels = greedy_level_decomposition(g);
    auto layout = optimize_depth(g, levels, {}, 0);
    std::set<std::pair<int, int>> cells;
    std::vector<double> x(12);
    std::vector<int> row_level(12);
    for (std::size_t v = 0; v < 12; ++v) {
      const auto& p = layout.placements[v];
      EXPECT_TRUE(cells.insert({p.column, p.row}).second);
      EXPECT_GE(p.column, 0);
      EXPECT_LT(p.column, layout.width);
      x[v] = p.column;
      row_level[v] = p.level;
    }
    for (std::size_t v = 0; v < 12; ++v) {
      std::vector<std::pair<double, double>> nb;
      for (const auto& e : og.edges) {
        if (e.source == v && row_level[e.target] != row_level[v]) nb.push_back({x[e.target], e.weight});
        if (e.target == v && row_level[e.source] != row_level[v]) nb.push_back({x[e.source], e.weight});
      }
      double expected = x[v];
      if (!nb.empty()) {
        double num = 0, den = 0;
        for (auto [pos, d] : nb) {
          num += d * d * pos;
          den += d * d;
        }
        expected = num / den;
      }
      EXPECT_NEAR(layout.continuous_x[v], expected, 1e-9);
    }
  }
}

TEST(DepthPenalty, PlugInValues) {
  LayoutConfig config;  // a = 2, b = 0.3
  auto g = block(2, {{0, 1, 1}});
  std::vector<int> in_order{0, 1}, tie{0, 0}, reversed{1, 0};
  EXPECT_DOUBLE_EQ(depth_penalty(g, in_order, config), 0.3);
  EXPECT_DOUBLE_EQ(depth_penalty(g, tie, config), 2.0);
  EXPECT_DOUBLE_EQ(depth_penalty(g, reversed, config), 3.0);
  EXPECT_DOUBLE_EQ(oracle::depth_penalty({{0, 1, 1}}, in_order, 2, 0.3), 0.3);
}

TEST(DepthPenalty, DefaultsAreTwoAndPointThree) {
  LayoutConfig config;
  EXPECT_DOUBLE_EQ(config.penalty_a, 2.0);
  EXPECT_DOUBLE_EQ(config.balance_b, 0.3);
  EXPECT_THROW((LayoutConfig{0.0, 0.3}.validate()), ValidationError);
}

TEST(OptimizeDepth, ChainStacksVertically) {
  auto g = block(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  auto levels = greedy_level_decomposition(g);
  auto layout = optimize_depth(g, levels, {}, 0);
  EXPECT_EQ(layout.depth, 4);
  EXPECT_EQ(layout.width, 1);
  EXPECT_NEAR(layout.penalty, 0.9, 1e-12);
}

TEST(OptimizeDepth, ReturnsMinimumOverAllDepths) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 25; ++t) {
    auto og = oracle::random_graph(rng, 10, 0.25);
    std::vector<BlockGraph::Edge> edges;
    for (const auto& e : og.edges) edges.push_back({e.source, e.target, e.weight});
    auto g = block(10, edges);
    auto levels = greedy_level_decomposition(g);
    auto best = optimize_depth(g, levels, {}, 3);
    auto order = block_order(g, levels);
    for (int d = 1; d <= 10; ++d) EXPECT_LE(best.penalty, layout_with_depth(g, levels, order, {}, d).penalty + 1e-12);
    std::vector<int> rows(10);
    for (std::size_t v = 0; v < 10; ++v) rows[v] = best.placements[v].row;
    EXPECT_NEAR(best.penalty, oracle::depth_penalty(og.edges, rows, 2.0, 0.3), 1e-9);
    EXPECT_EQ(best.cluster, 3u);
  }
}

TEST(LayoutBlock, UsesClassIndicesAndElevation) {
  auto cg = testing_support::class_graph(5, {{1, 3, 1}, {3, 4, 1}});
  std::vector<std::size_t> members{1, 3, 4};
  auto layout = layout_block(cg, members, 0);
  ASSERT_EQ(layout.placements.size(), 3u);
  EXPECT_EQ(layout.placements[0].class_index, 1u);
  EXPECT_EQ(layout.level_count, 3);
  EXPECT_EQ(layout.elevation_of(0), 2);
  EXPECT_EQ(layout.elevation_of(2), 0);
}
