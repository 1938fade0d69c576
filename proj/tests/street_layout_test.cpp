#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sarfmap/street_layout.hpp"
#include "sarfmap/synthetic.hpp"
#include "test_support.hpp"

using namespace sarfmap;

namespace {

CityMap build_city(const ClassGraph& cg) {
  auto d = agglomerate(cg);
  auto cut = cut_dendrogram(d, cg);
  auto tree = build_feature_tree(d, cut);
  std::vector<BlockLayout> blocks;
  auto clusters = cut.clusters();
  for (std::size_t k = 0; k < clusters.size(); ++k) blocks.push_back(layout_block(cg, clusters[k], k));
  return place_separators(layout_streets(tree, blocks, cg));
}

std::size_t count_separators(const CityMap& m) {
  std::size_t n = 0;
  for (const auto& s : m.streets) n += s.kind == StreetKind::separator;
  return n;
}

CityMap one_street_with(std::size_t items) {
  CityMap m;
  Street s;
  s.start = {0, 0};
  s.end = {10.0 * static_cast<double>(items), 0};
  m.streets.push_back(s);
  StreetSide side;
  side.side = 1;
  for (std::size_t i = 0; i < items; ++i) side.items.push_back({10.0 * static_cast<double>(i), 0.5, 9.5, 3});
  m.street_sides.push_back(side);
  return m;
}

}  // namespace

TEST(StreetEnergy, SingleLinkTerm) {
  auto cg = testing_support::class_graph(2, {{0, 1, 2.0}});
  CityMap m;
  m.buildings.resize(2);
  m.buildings[0].class_index = 0;
  m.buildings[1].class_index = 1;
  m.buildings[1].center = {3, 4};
  EXPECT_DOUBLE_EQ(street_energy(m, cg), 100.0);
}

TEST(Separators, FencepostCounts) {
  EXPECT_EQ(count_separators(place_separators(one_street_with(1))), 0u);
  EXPECT_EQ(count_separators(place_separators(one_street_with(2))), 1u);
  EXPECT_EQ(count_separators(place_separators(one_street_with(3))), 2u);
}

TEST(Separators, LieBetweenNeighbours) {
  auto m = place_separators(one_street_with(2), 0.5);
  const auto& sep = m.streets.back();
  EXPECT_EQ(sep.kind, StreetKind::separator);
  EXPECT_EQ(sep.axis, Axis::vertical);
  EXPECT_DOUBLE_EQ(sep.start.x, 9.75);
  EXPECT_DOUBLE_EQ(sep.width, 0.5);
  // idempotent: re-running replaces rather than adds
  EXPECT_EQ(count_separators(place_separators(m)), 1u);
}

TEST(Separators, ManyItemsKeepTheirParentStreet) {
  auto m = place_separators(one_street_with(6), 0.5);
  ASSERT_EQ(count_separators(m), 5u);
  for (std::size_t k = 1; k < m.streets.size(); ++k) {
    EXPECT_EQ(m.streets[k].parent, std::optional<std::size_t>(0));
    EXPECT_DOUBLE_EQ(m.streets[k].start.x, 10.0 * static_cast<double>(k) - 0.25);
    EXPECT_DOUBLE_EQ(m.streets[k].start.y, 0.5);
  }
}

TEST(StreetLayout, SingleBlock) {
  auto cg = testing_support::class_graph(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  auto m = build_city(cg);
  ASSERT_EQ(m.blocks.size(), 1u);
  EXPECT_EQ(count_separators(m), 0u);
  ASSERT_GE(m.streets.size(), 1u);
  EXPECT_EQ(m.streets[0].axis, Axis::horizontal);
  auto r = m.blocks[0].rect(1.0);
  const auto& s = m.streets[0];
  bool touches = std::abs(r.bottom() - (s.start.y - s.width / 2)) < 1e-9 || std::abs(r.y - (s.start.y + s.width / 2)) < 1e-9;
  EXPECT_TRUE(touches);
}

TEST(StreetLayout, TwoLinkedBlocksShareAStreetAndFaceEachOther) {
  auto cg = testing_support::class_graph(4, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}, {1, 2, 0.2}});
  auto m = build_city(cg);
  ASSERT_EQ(m.blocks.size(), 2u);
  EXPECT_EQ(m.blocks[0].street, m.blocks[1].street);
  auto a = m.blocks[0].rect(1.0), b = m.blocks[1].rect(1.0);
  double gap_x = std::max(a.x, b.x) - std::min(a.right(), b.right());
  double gap_y = std::max(a.y, b.y) - std::min(a.bottom(), b.bottom());
  // adjacent: separated only by the street (or a separator), never by another block
  EXPECT_LE(std::max(gap_x, gap_y), 1.0 + 1e-9);
}

TEST(StreetLayout, EnergyHistoryIsNonIncreasing) {
  auto planted = synthetic::planted_partition(3);
  auto cg = aggregate_to_class_graph(planted.graph);
  auto m = build_city(cg);
  ASSERT_FALSE(m.energy_history.empty());
  for (std::size_t k = 1; k < m.energy_history.size(); ++k) EXPECT_LE(m.energy_history[k], m.energy_history[k - 1]);
  EXPECT_NEAR(m.energy_history.back(), street_energy(m, cg), 1e-6 * m.energy_history.back());
}

TEST(StreetLayout, BlocksDisjointAndBuildingsInside) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    auto cg = testing_support::to_class_graph(oracle::random_graph(rng, 30, 0.06));
    auto m = build_city(cg);
    for (std::size_t i = 0; i < m.blocks.size(); ++i)
      for (std::size_t j = i + 1; j < m.blocks.size(); ++j)
        EXPECT_FALSE(m.blocks[i].rect(1.0).overlaps(m.blocks[j].rect(1.0)));
    for (const auto& b : m.buildings) {
      auto r = m.blocks[b.block].rect(1.0);
      EXPECT_GT(b.center.x, r.x);
      EXPECT_LT(b.center.x, r.right());
      EXPECT_GT(b.center.y, r.y);
      EXPECT_LT(b.center.y, r.bottom());
    }
  }
}
