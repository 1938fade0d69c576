#include <gtest/gtest.h>

#include "sarfmap/feature_tree.hpp"
#include "test_support.hpp"

using namespace sarfmap;

namespace {

std::size_t leaf_children(const FeatureTree& t, std::size_t id) {
  std::size_t n = 0;
  for (auto c : t.nodes[id].children) n += t.nodes[c].is_leaf();
  return n;
}

}  // namespace

TEST(FeatureTree, TwoClusterCut) {
  Dendrogram d;
  d.leaf_count = 4;
  d.initial_q = -0.25;
  d.merges = {{0, 1, 0, 0.1}, {2, 3, 1, 0.45}, {4, 5, 2, 0.0}};
  auto t = build_feature_tree(d, partition_after(d, 2));
  const auto& root = t.nodes[t.root];
  EXPECT_FALSE(root.is_leaf());
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(leaf_children(t, t.root), 2u);
  EXPECT_EQ(t.leaves().size(), 2u);
}

TEST(FeatureTree, WellSeparatedPairsStayBinary) {
  // 8 classes -> 4 clusters of 2; clusters merge pairwise, then together
  Dendrogram d;
  d.leaf_count = 8;
  d.initial_q = -0.12;
  d.merges = {{0, 1, 0, 0.0},  {2, 3, 1, 0.1},  {4, 5, 2, 0.2},  {6, 7, 3, 0.3},
              {8, 9, 4, 0.35}, {10, 11, 5, 0.38}, {12, 13, 6, 0.2}};
  auto cut = partition_after(d, 4);
  ASSERT_EQ(cut.cluster_count(), 4u);
  auto t = build_feature_tree(d, cut);
  const auto& root = t.nodes[t.root];
  ASSERT_EQ(root.children.size(), 2u);
  for (auto c : root.children) {
    EXPECT_FALSE(t.nodes[c].is_leaf());
    EXPECT_EQ(leaf_children(t, c), 2u);
  }
  std::size_t max_depth = 0;
  for (auto leaf : t.leaves()) max_depth = std::max(max_depth, t.depth(leaf));
  EXPECT_EQ(max_depth, 2u);
}

TEST(FeatureTree, CloseMergesAreFlattened) {
  Dendrogram d;
  d.leaf_count = 8;
  d.initial_q = -0.12;
  d.merges = {{0, 1, 0, 0.0},    {2, 3, 1, 0.1},    {4, 5, 2, 0.2},      {6, 7, 3, 0.3},
              {8, 9, 4, 0.3001}, {10, 11, 5, 0.3002}, {12, 13, 6, 0.3003}};
  auto t = build_feature_tree(d, partition_after(d, 4));
  EXPECT_EQ(t.nodes[t.root].children.size(), 4u);
  EXPECT_EQ(leaf_children(t, t.root), 4u);
}

TEST(FeatureTree, ForestGetsSyntheticRoot) {
  auto cg = testing_support::class_graph(6, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}, {4, 5, 1}, {5, 4, 2}});
  auto d = agglomerate(cg);
  ASSERT_EQ(d.roots().size(), 3u);
  auto t = build_feature_tree(d, cut_dendrogram(d, cg));
  const auto& root = t.nodes[t.root];
  EXPECT_FALSE(root.cluster.has_value());
  EXPECT_EQ(root.children.size(), 3u);
  EXPECT_EQ(root.class_count, 6u);
  EXPECT_EQ(root.min_class, 0u);
}

TEST(FeatureTree, ChildrenOrderedBySizeThenMinClass) {
  auto cg = testing_support::class_graph(5, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 4, 1}, {4, 2, 1}});
  auto d = agglomerate(cg);
  auto t = build_feature_tree(d, cut_dendrogram(d, cg));
  const auto& kids = t.nodes[t.root].children;
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(t.nodes[kids[0]].class_count, 3u);
  EXPECT_EQ(t.nodes[kids[1]].class_count, 2u);
}

TEST(FeatureTree, RejectsPartitionThatIsNotACut) {
  Dendrogram d;
  d.leaf_count = 4;
  d.merges = {{0, 1, 0, 0.1}, {2, 3, 1, 0.2}, {4, 5, 2, 0.0}};
  EXPECT_THROW(build_feature_tree(d, Partition({0, 1, 0, 1})), ValidationError);
}

TEST(FeatureTree, DistanceAndAncestor) {
  Dendrogram d;
  d.leaf_count = 8;
  d.initial_q = -0.12;
  d.merges = {{0, 1, 0, 0.0},  {2, 3, 1, 0.1},  {4, 5, 2, 0.2},  {6, 7, 3, 0.3},
              {8, 9, 4, 0.35}, {10, 11, 5, 0.38}, {12, 13, 6, 0.2}};
  auto t = build_feature_tree(d, partition_after(d, 4));
  auto a = t.leaf_of_cluster(0), b = t.leaf_of_cluster(1), c = t.leaf_of_cluster(2);
  EXPECT_EQ(t.distance(a, b), 2u);
  EXPECT_EQ(t.distance(a, c), 4u);
  EXPECT_EQ(t.lowest_common_ancestor(a, c), t.root);
}
