#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sarfmap/block_layout.hpp"
#include "sarfmap/feature_tree.hpp"

namespace sarfmap {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Point3&) const = default;
};

// Axis-aligned rectangle; y grows southward.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  double right() const noexcept { return x + width; }
  double bottom() const noexcept { return y + height; }
  Point center() const noexcept { return {x + width / 2, y + height / 2}; }

  Rect inflated(double by) const noexcept { return {x - by, y - by, width + 2 * by, height + 2 * by}; }

  // True when the interiors intersect by more than eps.
  bool overlaps(const Rect& o, double eps = 1e-9) const noexcept {
    return x < o.right() - eps && o.x < right() - eps && y < o.bottom() - eps && o.y < bottom() - eps;
  }

  bool operator==(const Rect&) const = default;
};

enum class Axis { horizontal, vertical };
enum class StreetKind { branch, separator };

inline const char* to_string(Axis axis) { return axis == Axis::horizontal ? "horizontal" : "vertical"; }
inline const char* to_string(StreetKind kind) { return kind == StreetKind::branch ? "branch" : "separator"; }

struct Street {
  std::size_t id = 0;
  Axis axis = Axis::horizontal;
  StreetKind kind = StreetKind::branch;
  Point start;  // centre line
  Point end;
  double width = 1.0;
  std::size_t depth = 0;
  std::optional<std::size_t> parent;     // street id
  std::optional<std::size_t> tree_node;  // feature-tree branch it renders

  bool operator==(const Street&) const = default;
};

// Items (blocks or whole subtrees) lined up on one side of a street, in order along it.
struct StreetSide {
  std::size_t street = 0;
  int side = 0;  // 0: north / west, 1: south / east
  std::vector<Rect> items;

  bool operator==(const StreetSide&) const = default;
};

struct PlacedBlock {
  BlockLayout layout;
  Point origin;  // north-west corner
  std::size_t tree_leaf = 0;
  std::size_t street = 0;
  int side = 0;

  Rect rect(double cell) const noexcept { return {origin.x, origin.y, layout.width * cell, layout.depth * cell}; }

  bool operator==(const PlacedBlock&) const = default;
};

struct BuildingSite {
  std::size_t class_index = 0;
  std::size_t block = 0;
  Point center;
  double elevation = 0.0;  // always 0 on the blank map
  int column = 0;
  int row = 0;
  int level = 0;
  int slope = 0;  // ground step for the level; the top level is highest

  bool operator==(const BuildingSite&) const = default;
};

// ---- overlay data -----------------------------------------------------------

inline constexpr const char* kLinkSourceColor = "#1a9641";
inline constexpr const char* kLinkTargetColor = "#d7191c";
inline constexpr const char* kDefaultBuildingColor = "#9e9e9e";

struct LinkGeometry {
  std::size_t source = 0;  // class indices
  std::size_t target = 0;
  double weight = 0.0;
  double width = 0.0;
  bool intra_block = true;
  Point start;
  Point end;
  std::vector<Point3> control_points;  // one per street on the hierarchy path
  std::vector<std::size_t> via_streets;
  double apex_elevation = 0.0;

  bool operator==(const LinkGeometry&) const = default;
};

struct KeywordLabel {
  std::string word;
  std::size_t block = 0;
  std::size_t anchor_class = 0;
  Point anchor;    // over the originating building
  Point position;  // after overlap adjustment
  double weight = 0.0;   // tf-idf
  double density = 0.0;  // local tf-idf per unit area
  int tier = 1;
  Rect box;

  bool operator==(const KeywordLabel&) const = default;
};

enum class PatternKind { single_color, layered, subgroups, mixed };

inline const char* to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::single_color: return "single_color";
    case PatternKind::layered: return "layered";
    case PatternKind::subgroups: return "subgroups";
    case PatternKind::mixed: return "mixed";
  }
  return "mixed";
}

struct BlockPattern {
  std::size_t block = 0;
  PatternKind pattern = PatternKind::mixed;
  std::vector<std::string> dominant_packages;

  bool operator==(const BlockPattern&) const = default;
};

enum class ChannelType { categorical, scalar, flag };

struct Channel {
  std::string name;
  ChannelType type = ChannelType::categorical;
  std::map<std::string, std::string> values;  // class id -> raw value

  bool operator==(const Channel&) const = default;
};

enum class VisualAttribute {
  building_color,
  building_height,
  building_shape,
  building_brightness,
  building_ornament,
  ground_color,
  ground_fire,
  link_color,
  link_thickness,
  link_height,
};

enum class ValueTransform { identity, sqrt };

struct Binding {
  std::string channel;
  VisualAttribute attribute = VisualAttribute::building_color;
  ValueTransform transform = ValueTransform::identity;
  double scale = 1.0;

  bool operator==(const Binding&) const = default;
};

struct OverlaySet {
  std::map<std::string, Channel> channels;
  std::vector<Binding> bindings;
  std::map<std::string, std::map<std::string, std::string>> palettes;  // channel -> category -> colour

  bool operator==(const OverlaySet&) const = default;
};

struct BuildingVisual {
  std::string color = kDefaultBuildingColor;
  double height = 1.0;
  double brightness = 1.0;
  std::string shape = "box";
  bool under_construction = false;
  bool fire = false;
  std::string ground_color;  // empty: level shading of the block ground

  bool operator==(const BuildingVisual&) const = default;
};

struct LinkVisual {
  std::string color;  // empty: green-to-red gradient
  double thickness = 1.0;
  double height = 1.0;

  bool operator==(const LinkVisual&) const = default;
};

// The city: blank-map geometry plus whatever overlays have been bound to it.
struct CityMap {
  double cell_size = 1.0;
  FeatureTree tree;
  std::vector<PlacedBlock> blocks;  // index == cluster id
  std::vector<Street> streets;
  std::vector<StreetSide> street_sides;
  std::vector<BuildingSite> buildings;  // index == class index
  Rect bounds;
  std::vector<double> energy_history;

  std::vector<LinkGeometry> links;
  std::vector<KeywordLabel> keywords;
  std::vector<BlockPattern> patterns;
  std::vector<BuildingVisual> visuals;  // parallel to buildings
  std::vector<LinkVisual> link_visuals;  // parallel to links
  OverlaySet overlays;
};

}  // namespace sarfmap
