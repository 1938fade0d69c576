#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sarfmap/annotate/overlay.hpp"
#include "sarfmap/city_map.hpp"
#include "sarfmap/errors.hpp"
#include "sarfmap/graph_model.hpp"

namespace sarfmap {

inline constexpr const char* kMapSchema = "sarfmap/1";

struct DocBuilding {
  std::string id;
  std::string name;
  std::string package;
  std::size_t block = 0;
  int column = 0;
  int row = 0;
  int level = 0;
  int slope = 0;
  Point3 position;
  BuildingVisual visual;

  bool operator==(const DocBuilding&) const = default;
};

struct DocBlock {
  std::size_t cluster = 0;
  Rect rect;
  int columns = 1;
  int rows = 1;
  int levels = 1;
  double penalty = 0.0;
  std::size_t street = 0;
  int side = 0;
  std::string pattern;
  std::vector<std::string> dominant_packages;

  bool operator==(const DocBlock&) const = default;
};

struct DocLink {
  std::string source;
  std::string target;
  double weight = 0.0;
  double width = 0.0;
  bool intra_block = true;
  std::vector<Point3> points;  // start, street control points..., end
  std::vector<std::size_t> via_streets;
  LinkVisual visual;

  bool operator==(const DocLink&) const = default;
};

struct DocKeyword {
  std::string word;
  std::size_t block = 0;
  std::string anchor;
  Point position;
  double weight = 0.0;
  double density = 0.0;
  int tier = 1;

  bool operator==(const DocKeyword&) const = default;
};

// Self-contained description of a rendered city; everything a viewer needs.
struct MapDocument {
  std::string schema = kMapSchema;
  std::string graph_digest;
  std::map<std::string, double> parameters;
  double modularity = 0.0;
  double cell_size = 1.0;
  Rect bounds;
  std::vector<DocBlock> blocks;
  std::vector<DocBuilding> buildings;
  std::vector<Street> streets;
  std::vector<DocLink> links;
  std::vector<DocKeyword> keywords;
  OverlaySet overlays;
  std::vector<double> energy_history;

  bool operator==(const MapDocument&) const = default;
};

inline std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline MapDocument make_map_document(const CityMap& map, const ClassGraph& graph, std::string graph_digest,
                                     double modularity, std::map<std::string, double> parameters = {}) {
  MapDocument doc;
  doc.graph_digest = std::move(graph_digest);
  doc.parameters = std::move(parameters);
  doc.modularity = modularity;
  doc.cell_size = map.cell_size;
  doc.bounds = map.bounds;
  doc.energy_history = map.energy_history;
  doc.overlays = map.overlays;

  for (std::size_t b = 0; b < map.blocks.size(); ++b) {
    const auto& block = map.blocks[b];
    DocBlock d;
    d.cluster = block.layout.cluster;
    d.rect = block.rect(map.cell_size);
    d.columns = block.layout.width;
    d.rows = block.layout.depth;
    d.levels = block.layout.level_count;
    d.penalty = block.layout.penalty;
    d.street = block.street;
    d.side = block.side;
    for (const auto& p : map.patterns) {
      if (p.block != b) continue;
      d.pattern = to_string(p.pattern);
      d.dominant_packages = p.dominant_packages;
    }
    doc.blocks.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < map.buildings.size(); ++i) {
    const auto& site = map.buildings[i];
    const auto& entity = graph.entity(site.class_index);
    DocBuilding d;
    d.id = entity.id;
    d.name = entity.display_name;
    d.package = entity.package;
    d.block = site.block;
    d.column = site.column;
    d.row = site.row;
    d.level = site.level;
    d.slope = site.slope;
    d.position = {site.center.x, site.center.y, site.elevation};
    if (i < map.visuals.size()) d.visual = map.visuals[i];
    doc.buildings.push_back(std::move(d));
  }
  doc.streets = map.streets;
  for (std::size_t k = 0; k < map.links.size(); ++k) {
    const auto& link = map.links[k];
    DocLink d;
    d.source = graph.entity(link.source).id;
    d.target = graph.entity(link.target).id;
    d.weight = link.weight;
    d.width = link.width;
    d.intra_block = link.intra_block;
    d.points.push_back({link.start.x, link.start.y, 0.0});
    if (link.intra_block) {
      d.points.push_back({(link.start.x + link.end.x) / 2, (link.start.y + link.end.y) / 2, link.apex_elevation});
    } else {
      d.points.insert(d.points.end(), link.control_points.begin(), link.control_points.end());
    }
    d.points.push_back({link.end.x, link.end.y, 0.0});
    d.via_streets = link.via_streets;
    if (k < map.link_visuals.size()) d.visual = map.link_visuals[k];
    doc.links.push_back(std::move(d));
  }
  for (const auto& k : map.keywords) {
    doc.keywords.push_back({k.word, k.block, graph.entity(k.anchor_class).id, k.position, k.weight, k.density, k.tier});
  }
  return doc;
}

namespace detail {

// Rounds to 9 significant digits; the JSON writer then emits the shortest
// decimal that round-trips, so re-serialising a parsed document is byte-stable.
inline double canonical_real(double v) {
  if (!std::isfinite(v)) throw Error("map document cannot hold non-finite numbers");
  if (v == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

using nlohmann::json;

inline json to_json_point(const Point& p) { return json::array({canonical_real(p.x), canonical_real(p.y)}); }
inline json to_json_point(const Point3& p) {
  return json::array({canonical_real(p.x), canonical_real(p.y), canonical_real(p.z)});
}
inline json to_json_rect(const Rect& r) {
  return json{{"x", canonical_real(r.x)}, {"y", canonical_real(r.y)}, {"width", canonical_real(r.width)},
              {"height", canonical_real(r.height)}};
}
inline Rect rect_from(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("width").get<double>(), j.at("height").get<double>()};
}

template <typename E>
E enum_from(const json& j, std::initializer_list<E> values) {
  auto name = j.get<std::string>();
  for (auto v : values)
    if (to_string(v) == name) return v;
  throw ValidationError("unknown enum value '" + name + "' in map document");
}

}  // namespace detail

inline std::string write_map_document(const MapDocument& doc) {
  using detail::canonical_real;
  using detail::json;
  json j;
  j["schema"] = doc.schema;
  j["graph_digest"] = doc.graph_digest;
  j["modularity"] = canonical_real(doc.modularity);
  j["cell_size"] = canonical_real(doc.cell_size);
  j["bounds"] = detail::to_json_rect(doc.bounds);
  j["parameters"] = json::object();
  for (const auto& [k, v] : doc.parameters) j["parameters"][k] = canonical_real(v);
  j["energy_history"] = json::array();
  for (auto e : doc.energy_history) j["energy_history"].push_back(canonical_real(e));

  j["blocks"] = json::array();
  for (const auto& b : doc.blocks) {
    j["blocks"].push_back({{"cluster", b.cluster},
                           {"rect", detail::to_json_rect(b.rect)},
                           {"columns", b.columns},
                           {"rows", b.rows},
                           {"levels", b.levels},
                           {"penalty", canonical_real(b.penalty)},
                           {"street", b.street},
                           {"side", b.side},
                           {"pattern", b.pattern},
                           {"dominant_packages", b.dominant_packages}});
  }
  j["buildings"] = json::array();
  for (const auto& b : doc.buildings) {
    const auto& v = b.visual;
    j["buildings"].push_back({{"id", b.id},
                              {"name", b.name},
                              {"package", b.package},
                              {"block", b.block},
                              {"column", b.column},
                              {"row", b.row},
                              {"level", b.level},
                              {"slope", b.slope},
                              {"position", detail::to_json_point(b.position)},
                              {"visual",
                               {{"color", v.color},
                                {"height", canonical_real(v.height)},
                                {"brightness", canonical_real(v.brightness)},
                                {"shape", v.shape},
                                {"under_construction", v.under_construction},
                                {"fire", v.fire},
                                {"ground_color", v.ground_color}}}});
  }
  j["streets"] = json::array();
  for (const auto& s : doc.streets) {
    json street{{"id", s.id},
                {"axis", to_string(s.axis)},
                {"kind", to_string(s.kind)},
                {"start", detail::to_json_point(s.start)},
                {"end", detail::to_json_point(s.end)},
                {"width", canonical_real(s.width)},
                {"depth", s.depth},
                {"parent", s.parent ? json(*s.parent) : json(nullptr)},
                {"tree_node", s.tree_node ? json(*s.tree_node) : json(nullptr)}};
    j["streets"].push_back(std::move(street));
  }
  j["links"] = json::array();
  for (const auto& l : doc.links) {
    json points = json::array();
    for (const auto& p : l.points) points.push_back(detail::to_json_point(p));
    j["links"].push_back({{"source", l.source},
                          {"target", l.target},
                          {"weight", canonical_real(l.weight)},
                          {"width", canonical_real(l.width)},
                          {"intra_block", l.intra_block},
                          {"points", points},
                          {"via_streets", l.via_streets},
                          {"visual",
                           {{"color", l.visual.color},
                            {"thickness", canonical_real(l.visual.thickness)},
                            {"height", canonical_real(l.visual.height)}}}});
  }
  j["keywords"] = json::array();
  for (const auto& k : doc.keywords) {
    j["keywords"].push_back({{"word", k.word},
                             {"block", k.block},
                             {"anchor", k.anchor},
                             {"position", detail::to_json_point(k.position)},
                             {"weight", canonical_real(k.weight)},
                             {"density", canonical_real(k.density)},
                             {"tier", k.tier}});
  }
  json channels = json::array();
  for (const auto& [name, ch] : doc.overlays.channels)
    channels.push_back({{"name", ch.name}, {"type", to_string(ch.type)}, {"values", ch.values}});
  json bindings = json::array();
  for (const auto& b : doc.overlays.bindings) {
    bindings.push_back({{"channel", b.channel},
                        {"attribute", to_string(b.attribute)},
                        {"transform", to_string(b.transform)},
                        {"scale", canonical_real(b.scale)}});
  }
  j["overlays"] = {{"channels", channels}, {"bindings", bindings}, {"palettes", doc.overlays.palettes}};
  return j.dump(1) + "\n";
}

inline MapDocument parse_map_document(std::string_view bytes) {
  using detail::json;
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(std::string("map document is not valid: ") + e.what());
  }
  try {
    MapDocument doc;
    doc.schema = j.at("schema").get<std::string>();
    if (doc.schema != kMapSchema) throw ValidationError("unsupported map schema '" + doc.schema + "'");
    doc.graph_digest = j.at("graph_digest").get<std::string>();
    doc.modularity = j.at("modularity").get<double>();
    doc.cell_size = j.at("cell_size").get<double>();
    doc.bounds = detail::rect_from(j.at("bounds"));
    doc.parameters = j.at("parameters").get<std::map<std::string, double>>();
    doc.energy_history = j.at("energy_history").get<std::vector<double>>();
    for (const auto& b : j.at("blocks")) {
      DocBlock d;
      d.cluster = b.at("cluster").get<std::size_t>();
      d.rect = detail::rect_from(b.at("rect"));
      d.columns = b.at("columns").get<int>();
      d.rows = b.at("rows").get<int>();
      d.levels = b.at("levels").get<int>();
      d.penalty = b.at("penalty").get<double>();
      d.street = b.at("street").get<std::size_t>();
      d.side = b.at("side").get<int>();
      d.pattern = b.at("pattern").get<std::string>();
      d.dominant_packages = b.at("dominant_packages").get<std::vector<std::string>>();
      doc.blocks.push_back(std::move(d));
    }
    auto point3 = [](const json& p) { return Point3{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()}; };
    auto point2 = [](const json& p) { return Point{p.at(0).get<double>(), p.at(1).get<double>()}; };
    for (const auto& b : j.at("buildings")) {
      DocBuilding d;
      d.id = b.at("id").get<std::string>();
      d.name = b.at("name").get<std::string>();
      d.package = b.at("package").get<std::string>();
      d.block = b.at("block").get<std::size_t>();
      d.column = b.at("column").get<int>();
      d.row = b.at("row").get<int>();
      d.level = b.at("level").get<int>();
      d.slope = b.at("slope").get<int>();
      d.position = point3(b.at("position"));
      const auto& v = b.at("visual");
      d.visual.color = v.at("color").get<std::string>();
      d.visual.height = v.at("height").get<double>();
      d.visual.brightness = v.at("brightness").get<double>();
      d.visual.shape = v.at("shape").get<std::string>();
      d.visual.under_construction = v.at("under_construction").get<bool>();
      d.visual.fire = v.at("fire").get<bool>();
      d.visual.ground_color = v.at("ground_color").get<std::string>();
      doc.buildings.push_back(std::move(d));
    }
    for (const auto& s : j.at("streets")) {
      Street d;
      d.id = s.at("id").get<std::size_t>();
      d.axis = detail::enum_from<Axis>(s.at("axis"), {Axis::horizontal, Axis::vertical});
      d.kind = detail::enum_from<StreetKind>(s.at("kind"), {StreetKind::branch, StreetKind::separator});
      d.start = point2(s.at("start"));
      d.end = point2(s.at("end"));
      d.width = s.at("width").get<double>();
      d.depth = s.at("depth").get<std::size_t>();
      if (!s.at("parent").is_null()) d.parent = s.at("parent").get<std::size_t>();
      if (!s.at("tree_node").is_null()) d.tree_node = s.at("tree_node").get<std::size_t>();
      doc.streets.push_back(d);
    }
    for (const auto& l : j.at("links")) {
      DocLink d;
      d.source = l.at("source").get<std::string>();
      d.target = l.at("target").get<std::string>();
      d.weight = l.at("weight").get<double>();
      d.width = l.at("width").get<double>();
      d.intra_block = l.at("intra_block").get<bool>();
      for (const auto& p : l.at("points")) d.points.push_back(point3(p));
      d.via_streets = l.at("via_streets").get<std::vector<std::size_t>>();
      const auto& v = l.at("visual");
      d.visual.color = v.at("color").get<std::string>();
      d.visual.thickness = v.at("thickness").get<double>();
      d.visual.height = v.at("height").get<double>();
      doc.links.push_back(std::move(d));
    }
    for (const auto& k : j.at("keywords")) {
      DocKeyword d;
      d.word = k.at("word").get<std::string>();
      d.block = k.at("block").get<std::size_t>();
      d.anchor = k.at("anchor").get<std::string>();
      d.position = point2(k.at("position"));
      d.weight = k.at("weight").get<double>();
      d.density = k.at("density").get<double>();
      d.tier = k.at("tier").get<int>();
      doc.keywords.push_back(std::move(d));
    }
    const auto& overlays = j.at("overlays");
    for (const auto& c : overlays.at("channels")) {
      Channel ch;
      ch.name = c.at("name").get<std::string>();
      ch.type = detail::enum_from<ChannelType>(c.at("type"),
                                               {ChannelType::categorical, ChannelType::scalar, ChannelType::flag});
      ch.values = c.at("values").get<std::map<std::string, std::string>>();
      doc.overlays.channels[ch.name] = std::move(ch);
    }
    for (const auto& b : overlays.at("bindings")) {
      Binding binding;
      binding.channel = b.at("channel").get<std::string>();
      binding.attribute = parse_visual_attribute(b.at("attribute").get<std::string>());
      binding.transform =
          detail::enum_from<ValueTransform>(b.at("transform"), {ValueTransform::identity, ValueTransform::sqrt});
      binding.scale = b.at("scale").get<double>();
      doc.overlays.bindings.push_back(std::move(binding));
    }
    doc.overlays.palettes = overlays.at("palettes").get<std::map<std::string, std::map<std::string, std::string>>>();
    return doc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("map document does not match schema: ") + e.what());
  }
}

}  // namespace sarfmap
