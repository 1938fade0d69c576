#include <gtest/gtest.h>

#include <regex>

#include "sarfmap/pipeline.hpp"
#include "sarfmap/synthetic.hpp"

using namespace sarfmap;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

PipelineResult run_text(const std::string& text) {
  PipelineInput input;
  input.graph_text = text;
  return run_pipeline(input, RunConfig{});
}

double attr(const std::string& element, const std::string& name) {
  std::smatch m;
  std::regex re(" " + name + "=\"([-0-9.]+)\"");
  if (!std::regex_search(element, m, re)) throw std::runtime_error("no attribute " + name);
  return std::stod(m[1]);
}

}  // namespace

TEST(MapDocument, RoundTripIsByteStable) {
  auto r = run_text(serialize_member_graph(synthetic::planted_partition(2).graph));
  auto parsed = parse_map_document(r.map_bytes);
  EXPECT_EQ(write_map_document(parsed), r.map_bytes);
  EXPECT_EQ(parse_map_document(write_map_document(parsed)), parsed);
}

TEST(MapDocument, DigestIsAContentHash) {
  auto text = serialize_member_graph(synthetic::planted_partition(2).graph);
  EXPECT_EQ(run_text(text).document.graph_digest, run_text(text).document.graph_digest);
  EXPECT_EQ(content_digest(text), run_text(text).document.graph_digest);
  EXPECT_NE(content_digest(text), content_digest(text + "\n"));
}

TEST(MapDocument, NoLinksGivesEmptyArray) {
  auto r = run_text("class A Alpha p\nclass B Beta p\n");
  EXPECT_TRUE(r.document.links.empty());
  EXPECT_NE(r.map_bytes.find("\"links\": []"), std::string::npos);
  EXPECT_NO_THROW(parse_map_document(r.map_bytes));
}

TEST(MapDocument, KeysAreSorted) {
  auto r = run_text("class A A\nclass B B\ncdep A B 1\n");
  auto first = r.map_bytes.find("\"blocks\"");
  auto later = r.map_bytes.find("\"schema\"");
  ASSERT_NE(first, std::string::npos);
  EXPECT_LT(first, later);
}

TEST(MapDocument, RejectsCorruptOrForeignDocuments) {
  EXPECT_THROW(parse_map_document("{not json"), Error);
  EXPECT_THROW(parse_map_document("{\"schema\": \"other/9\"}"), ValidationError);
  EXPECT_THROW(parse_map_document("{\"schema\": \"sarfmap/1\"}"), ValidationError);
}

TEST(MapDocument, RealsUseNineSignificantDigits) {
  EXPECT_DOUBLE_EQ(detail::canonical_real(1.0 / 3.0), 0.333333333);
  EXPECT_DOUBLE_EQ(detail::canonical_real(123456789.123), 123456789.0);
  EXPECT_EQ(detail::canonical_real(-0.0), 0.0);
}

TEST(Svg, OneBuildingMap) {
  auto r = run_text("class A Alpha p\n");
  EXPECT_EQ(count(r.svg, "class=\"building\""), 1u);
  EXPECT_EQ(count(r.svg, "class=\"block\""), 1u);
}

TEST(Svg, EveryEntityAppearsOnce) {
  auto r = run_text(serialize_member_graph(synthetic::planted_partition(4).graph));
  const auto& d = r.document;
  std::size_t separators = 0;
  for (const auto& s : d.streets) separators += s.kind == StreetKind::separator;
  EXPECT_EQ(count(r.svg, "class=\"building\""), d.buildings.size());
  EXPECT_EQ(count(r.svg, "class=\"block\""), d.blocks.size());
  EXPECT_EQ(count(r.svg, "class=\"street\""), d.streets.size() - separators);
  EXPECT_EQ(count(r.svg, "class=\"separator\""), separators);
  EXPECT_EQ(count(r.svg, "class=\"link\""), d.links.size());
  EXPECT_EQ(count(r.svg, "class=\"keyword\""), d.keywords.size());
}

TEST(Svg, BlocksAreAnAffineImageOfTheDocument) {
  auto r = run_text(serialize_member_graph(synthetic::planted_partition(6).graph));
  SvgOptions opt;
  std::regex block_re("<rect class=\"block\" data-cluster=\"([0-9]+)\"[^>]*>");
  for (auto it = std::sregex_iterator(r.svg.begin(), r.svg.end(), block_re); it != std::sregex_iterator(); ++it) {
    std::string element = (*it)[0];
    const auto& rect = r.document.blocks.at(std::stoul((*it)[1])).rect;
    double sx = (rect.x - r.document.bounds.x + opt.margin) * opt.scale;
    double sy = (rect.y - r.document.bounds.y + opt.margin) * opt.scale;
    EXPECT_NEAR(attr(element, "x"), sx, 0.006);
    EXPECT_NEAR(attr(element, "y"), sy, 0.006);
    EXPECT_NEAR(attr(element, "width"), rect.width * opt.scale, 0.006);
    EXPECT_NEAR(attr(element, "height"), rect.height * opt.scale, 0.006);
  }
}

TEST(Svg, FixedHeightGivesEqualFootprints) {
  PipelineInput input;
  input.graph_text = "class A A p\nclass B B p\nclass C C p\ncdep A B 1\ncdep B C 1\n";
  input.overlay_texts = {"A,methods,100\nB,methods,4\nC,methods,1\n"};
  RunConfig config;
  config.bindings = {"methods=height:sqrt"};
  auto varied = run_pipeline(input, config);
  config.fixed_height = true;
  auto fixed = run_pipeline(input, config);
  std::regex width_re("class=\"building\"[^>]* width=\"([0-9.]+)\"");
  auto widths = [&](const std::string& svg) {
    std::set<std::string> out;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), width_re); it != std::sregex_iterator(); ++it)
      out.insert((*it)[1]);
    return out;
  };
  EXPECT_EQ(widths(fixed.svg).size(), 1u);
  EXPECT_GT(widths(varied.svg).size(), 1u);
}

TEST(Svg, UnknownChannelListsAlternatives) {
  auto r = run_text("class A A p\nclass B B q\ncdep A B 1\n");
  SvgOptions opt;
  opt.channel = "risk";
  try {
    render_svg(r.document, opt);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("available: package"), std::string::npos);
  }
  opt.channel = "package";
  EXPECT_NO_THROW(render_svg(r.document, opt));
}

TEST(Svg, RenderingIsDeterministic) {
  auto r = run_text(serialize_member_graph(synthetic::planted_partition(8).graph));
  EXPECT_EQ(render_svg(r.document), render_svg(r.document));
  EXPECT_EQ(render_svg(parse_map_document(r.map_bytes)), r.svg);
}

TEST(Svg, SeparatorsAreDrawnDistinctly) {
  // four components: the synthetic root lines several blocks up on one side
  std::string text;
  for (char c = 'A'; c < 'I'; ++c) text += std::string("class ") + c + " " + c + " p" + char(c + 32) + "\n";
  for (char c = 'A'; c < 'I'; c += 2)
    text += std::string("cdep ") + c + " " + char(c + 1) + " 1\ncdep " + char(c + 1) + " " + c + " 1\n";
  auto r = run_text(text);
  std::regex street_fill("class=\"street\"[^>]* fill=\"(#[0-9a-f]+)\"");
  std::regex sep_fill("class=\"separator\"[^>]* fill=\"(#[0-9a-f]+)\"");
  std::smatch a, b;
  ASSERT_TRUE(std::regex_search(r.svg, a, street_fill));
  ASSERT_TRUE(std::regex_search(r.svg, b, sep_fill));
  EXPECT_NE(a[1], b[1]);
}
