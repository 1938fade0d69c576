#include <gtest/gtest.h>

#include <cmath>

#include "sarfmap/annotate.hpp"
#include "sarfmap/street_layout.hpp"
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

ClassGraph two_groups() {
  return testing_support::class_graph(4, {{0, 1, 1}, {1, 0, 1}, {2, 3, 1}, {3, 2, 1}, {1, 2, 1.5}});
}

// Layout with the given (column, row, level, package) cells; package_of is filled alongside.
BlockLayout grid(const std::vector<std::tuple<int, int, int, std::string>>& cells, std::vector<std::string>& package_of) {
  BlockLayout b;
  package_of.clear();
  int max_col = 0, max_row = 0, max_level = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto [c, r, l, pkg] = cells[i];
    b.placements.push_back({i, c, r, l});
    package_of.push_back(pkg);
    max_col = std::max(max_col, c);
    max_row = std::max(max_row, r);
    max_level = std::max(max_level, l);
  }
  b.width = max_col + 1;
  b.depth = max_row + 1;
  b.level_count = max_level + 1;
  return b;
}

}  // namespace

TEST(Links, IntraBlockHasNoControlPoints) {
  auto cg = two_groups();
  auto m = build_city(cg);
  auto links = route_links(m, cg);
  ASSERT_EQ(links.size(), cg.edge_count());
  for (const auto& l : links) {
    if (!l.intra_block) continue;
    EXPECT_TRUE(l.control_points.empty());
    EXPECT_TRUE(l.via_streets.empty());
  }
}

TEST(Links, SiblingBlocksShareOneStreetPoint) {
  auto cg = two_groups();
  auto m = build_city(cg);
  auto links = route_links(m, cg);
  std::size_t inter = 0;
  for (const auto& l : links) {
    if (l.intra_block) continue;
    ++inter;
    EXPECT_EQ(l.control_points.size(), 1u);
    EXPECT_EQ(l.via_streets.size(), 1u);
    EXPECT_DOUBLE_EQ(l.width, 3.0);  // weight 1.5 at 2 px per unit
  }
  EXPECT_EQ(inter, 1u);
}

TEST(Tokenize, CamelCaseDigitsAndPunctuation) {
  EXPECT_EQ(tokenize_identifier("HTTPServer2Config"), (std::vector<std::string>{"http", "server", "config"}));
  EXPECT_EQ(tokenize_identifier("weka.estimators.KernelEstimator"),
            (std::vector<std::string>{"weka", "estimators", "kernel", "estimator"}));
  EXPECT_EQ(tokenize_identifier("a_b__xy42"), (std::vector<std::string>{"xy"}));
  EXPECT_TRUE(tokenize_identifier("").empty());
}

TEST(TfIdf, WordInEveryClassOfOneBlock) {
  std::vector<std::vector<std::set<std::string>>> docs(2);
  for (int i = 0; i < 5; ++i) docs[0].push_back({"alpha", "shared"});
  for (int i = 0; i < 3; ++i) docs[1].push_back({"beta", "shared"});
  auto t = block_tfidf(docs);
  EXPECT_DOUBLE_EQ(t[0].at("alpha").tf, 1.0);
  EXPECT_NEAR(t[0].at("alpha").value(), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(t[0].at("shared").idf, 0.0);
}

TEST(Keywords, ConcentratedWordLabelsItsBlock) {
  std::vector<ClassEntity> classes{
      {"a0", "KernelEstimator", "tool"}, {"a1", "NormalEstimator", "tool"},
      {"a2", "EstimatorUtils", "tool"},  {"a3", "DiscreteEstimator", "tool"},
      {"b0", "TreeNode", "tool"},       {"b1", "TreeVisitor", "tool"},
      {"b2", "NodeSplitter", "tool"},   {"b3", "TreeBuilder", "tool"}};
  std::vector<std::tuple<std::string, std::string, double>> edges;
  for (const auto* group : {"a", "b"})
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) edges.emplace_back(group + std::to_string(i), group + std::to_string(j), 1.0);
  edges.emplace_back("a0", "b0", 0.1);
  ClassGraph cg(classes, edges);
  auto m = build_city(cg);
  ASSERT_EQ(m.blocks.size(), 2u);
  auto labels = extract_keywords(m, cg);
  auto block_a = m.buildings[*cg.index_of("a0")].block;
  std::vector<std::string> words_a;
  for (const auto& k : labels)
    if (k.block == block_a) words_a.push_back(k.word);
  ASSERT_FALSE(words_a.empty());
  EXPECT_EQ(words_a.front(), "estimator");
  for (const auto& k : labels) EXPECT_NE(k.word, "tool");  // in every block, idf 0
}

TEST(Keywords, LabelsDoNotOverlap) {
  auto cg = two_groups();
  auto m = build_city(cg);
  auto labels = extract_keywords(m, cg);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j) EXPECT_FALSE(labels[i].box.overlaps(labels[j].box));
}

TEST(Patterns, SingleColor) {
  std::vector<std::string> pkg;
  auto b = grid({{0, 0, 0, "p"}, {1, 0, 0, "p"}, {0, 1, 1, "p"}, {1, 1, 1, "p"}}, pkg);
  EXPECT_EQ(classify_block_pattern(b, pkg).pattern, PatternKind::single_color);
}

TEST(Patterns, Layered) {
  std::vector<std::string> pkg;
  auto b = grid({{0, 0, 0, "ui"}, {1, 0, 0, "ui"}, {2, 0, 0, "ui"},
                 {0, 1, 1, "model"}, {1, 1, 1, "model"}, {2, 1, 1, "model"},
                 {0, 2, 2, "io"}, {1, 2, 2, "io"}, {2, 2, 2, "io"}},
                pkg);
  EXPECT_EQ(classify_block_pattern(b, pkg).pattern, PatternKind::layered);
}

TEST(Patterns, Subgroups) {
  std::vector<std::string> pkg;
  // left half one package, right half another, all on one level
  auto b = grid({{0, 0, 0, "a"}, {1, 0, 0, "a"}, {2, 0, 0, "b"}, {3, 0, 0, "b"},
                 {0, 1, 0, "a"}, {1, 1, 0, "a"}, {2, 1, 0, "b"}, {3, 1, 0, "b"}},
                pkg);
  EXPECT_EQ(classify_block_pattern(b, pkg).pattern, PatternKind::subgroups);
}

TEST(Patterns, MixedWithSixInterleavedPackages) {
  std::vector<std::string> pkg;
  std::vector<std::tuple<int, int, int, std::string>> cells;
  const char* names[6] = {"p0", "p1", "p2", "p3", "p4", "p5"};
  int k = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 6; ++c) cells.emplace_back(c, r, r, names[(c * 5 + r * 2 + k++ % 3) % 6]);
  auto b = grid(cells, pkg);
  EXPECT_EQ(classify_block_pattern(b, pkg).pattern, PatternKind::mixed);
}

TEST(Overlay, PackageColoursAreStablePerPackage) {
  EXPECT_EQ(categorical_color("javax.swing"), categorical_color("javax.swing"));
  EXPECT_NE(categorical_color("planted.group0"), categorical_color("planted.group2"));
  auto cg = two_groups();
  auto m = build_city(cg);
  OverlaySet o;
  o.channels[kPackageChannel] = package_channel(cg);
  o.bindings.push_back(parse_binding("package=building_color"));
  auto bound = bind_overlay(m, cg, o);
  for (const auto& v : bound.visuals) EXPECT_EQ(v.color, categorical_color("pkg"));
}

TEST(Overlay, SqrtHeight) {
  auto cg = two_groups();
  auto m = build_city(cg);
  OverlaySet o;
  o.channels = parse_overlay_csv("class_id,channel,value\nn000,methods,16\nn001,methods,9\n");
  EXPECT_EQ(o.channels.at("methods").type, ChannelType::scalar);
  o.bindings.push_back(parse_binding("methods=building_height:sqrt"));
  auto bound = bind_overlay(m, cg, o);
  EXPECT_DOUBLE_EQ(bound.visuals[0].height, 4.0);
  EXPECT_DOUBLE_EQ(bound.visuals[1].height, 3.0);
  EXPECT_DOUBLE_EQ(bound.visuals[2].height, 1.0);  // no value: default
}

TEST(Overlay, MissingValueKeepsDefaultGray) {
  auto cg = two_groups();
  auto m = build_city(cg);
  OverlaySet o;
  o.channels = parse_overlay_csv("n000,risk,high\n");
  o.bindings.push_back(parse_binding("risk=color"));
  auto bound = bind_overlay(m, cg, o);
  EXPECT_NE(bound.visuals[0].color, kDefaultBuildingColor);
  EXPECT_EQ(bound.visuals[3].color, kDefaultBuildingColor);
}

TEST(Overlay, PositionCannotBeBound) {
  EXPECT_THROW(parse_binding("risk=grid_position"), ValidationError);
  EXPECT_THROW(parse_binding("risk=column"), ValidationError);
  EXPECT_THROW(parse_binding("risk=sparkles"), ValidationError);
  EXPECT_THROW(parse_binding("risk"), ValidationError);
}

TEST(Overlay, SwitchingBindingsLeavesGeometryAlone) {
  auto cg = two_groups();
  auto m = build_city(cg);
  m.links = route_links(m, cg);
  OverlaySet a, b;
  a.channels[kPackageChannel] = package_channel(cg);
  a.bindings.push_back(parse_binding("package=color"));
  b.channels = parse_overlay_csv("n000,risk,0.9\nn001,risk,0.1\nn002,risk,0.5\n");
  b.bindings.push_back(parse_binding("risk=color"));
  b.bindings.push_back(parse_binding("risk=link_thickness"));
  auto x = bind_overlay(m, cg, a), y = bind_overlay(m, cg, b);
  EXPECT_EQ(x.blocks, y.blocks);
  EXPECT_EQ(x.buildings, y.buildings);
  EXPECT_EQ(x.streets, y.streets);
  EXPECT_EQ(x.links, y.links);
  EXPECT_NE(x.visuals, y.visuals);
}

TEST(Overlay, ManifestAndTypeInference) {
  OverlaySet o;
  parse_binding_manifest("# bindings\nrisk=color\nmethods=height:sqrt\npalette risk high #ff0000\n", o);
  ASSERT_EQ(o.bindings.size(), 2u);
  EXPECT_EQ(o.bindings[1].transform, ValueTransform::sqrt);
  EXPECT_EQ(o.palettes.at("risk").at("high"), "#ff0000");
  auto ch = parse_overlay_csv("a,flagged,true\nb,flagged,no\n");
  EXPECT_EQ(ch.at("flagged").type, ChannelType::flag);
  EXPECT_THROW(parse_overlay_csv("a,b\n"), ParseError);
}
