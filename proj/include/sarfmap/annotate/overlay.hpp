#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sarfmap/city_map.hpp"
#include "sarfmap/errors.hpp"
#include "sarfmap/graph_model.hpp"

namespace sarfmap {

inline constexpr const char* kPackageChannel = "package";

inline std::string_view to_string(ChannelType type) {
  switch (type) {
    case ChannelType::categorical: return "categorical";
    case ChannelType::scalar: return "scalar";
    case ChannelType::flag: return "flag";
  }
  return "categorical";
}

inline std::string_view to_string(VisualAttribute attribute) {
  switch (attribute) {
    case VisualAttribute::building_color: return "building_color";
    case VisualAttribute::building_height: return "building_height";
    case VisualAttribute::building_shape: return "building_shape";
    case VisualAttribute::building_brightness: return "building_brightness";
    case VisualAttribute::building_ornament: return "building_ornament";
    case VisualAttribute::ground_color: return "ground_color";
    case VisualAttribute::ground_fire: return "ground_fire";
    case VisualAttribute::link_color: return "link_color";
    case VisualAttribute::link_thickness: return "link_thickness";
    case VisualAttribute::link_height: return "link_height";
  }
  return "building_color";
}

inline std::string_view to_string(ValueTransform transform) {
  return transform == ValueTransform::sqrt ? "sqrt" : "identity";
}

// Building grid positions belong to the blank map and can never be bound.
inline VisualAttribute parse_visual_attribute(std::string_view name) {
  static const std::map<std::string_view, VisualAttribute> kNames{
      {"building_color", VisualAttribute::building_color},
      {"color", VisualAttribute::building_color},
      {"building_height", VisualAttribute::building_height},
      {"height", VisualAttribute::building_height},
      {"building_shape", VisualAttribute::building_shape},
      {"shape", VisualAttribute::building_shape},
      {"building_brightness", VisualAttribute::building_brightness},
      {"brightness", VisualAttribute::building_brightness},
      {"building_ornament", VisualAttribute::building_ornament},
      {"ornament", VisualAttribute::building_ornament},
      {"ground_color", VisualAttribute::ground_color},
      {"ground_fire", VisualAttribute::ground_fire},
      {"fire", VisualAttribute::ground_fire},
      {"link_color", VisualAttribute::link_color},
      {"link_thickness", VisualAttribute::link_thickness},
      {"link_height", VisualAttribute::link_height},
  };
  static const std::array<std::string_view, 8> kGeometry{"grid_position", "position", "grid", "x", "y",
                                                         "column", "row", "building_position"};
  if (std::find(kGeometry.begin(), kGeometry.end(), name) != kGeometry.end())
    throw ValidationError("building grid position cannot be bound to an overlay channel");
  auto it = kNames.find(name);
  if (it == kNames.end()) throw ValidationError("unknown visual attribute '" + std::string(name) + "'");
  return it->second;
}

// "<channel>=<attribute>[:sqrt|:identity]"
inline Binding parse_binding(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ValidationError("binding must be <channel>=<attribute>[:sqrt]");
  Binding binding;
  binding.channel = std::string(text.substr(0, eq));
  auto rest = text.substr(eq + 1);
  auto colon = rest.find(':');
  binding.attribute = parse_visual_attribute(rest.substr(0, colon));
  if (colon != std::string_view::npos) {
    auto transform = rest.substr(colon + 1);
    if (transform == "sqrt") {
      binding.transform = ValueTransform::sqrt;
    } else if (transform != "identity") {
      throw ValidationError("unknown transform '" + std::string(transform) + "'");
    }
  }
  return binding;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<bool> parse_flag(std::string_view s) {
  if (s == "true" || s == "yes") return true;
  if (s == "false" || s == "no") return false;
  return std::nullopt;
}

}  // namespace detail

// Binding manifest: one "<channel>=<attribute>[:sqrt]" per line, plus optional
// "palette <channel> <category> <#rrggbb>" lines. '#' starts a comment line.
inline void parse_binding_manifest(std::string_view text, OverlaySet& overlays) {
  std::size_t line_no = 0;
  for (auto raw : detail::lines_of(text)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("palette ")) {
      auto fields = detail::split_fields(line);
      if (fields.size() != 4 || fields[3].size() != 7 || fields[3].front() != '#')
        throw ParseError(line_no, "palette line needs <channel> <category> <#rrggbb>");
      overlays.palettes[std::string(fields[1])][std::string(fields[2])] = std::string(fields[3]);
      continue;
    }
    overlays.bindings.push_back(parse_binding(line));
  }
}

// Overlay records "class_id,channel,value". Channel type is inferred: all
// numbers -> scalar, all true/false/yes/no -> flag, otherwise categorical.
inline std::map<std::string, Channel> parse_overlay_csv(std::string_view text) {
  std::map<std::string, Channel> channels;
  std::size_t line_no = 0;
  for (auto raw : detail::lines_of(text)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto c1 = line.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError(line_no, "overlay record needs class_id,channel,value");
    auto id = detail::trim(line.substr(0, c1));
    auto channel = detail::trim(line.substr(c1 + 1, c2 - c1 - 1));
    auto value = detail::trim(line.substr(c2 + 1));
    if (line_no == 1 && id == "class_id" && channel == "channel") continue;
    if (id.empty() || channel.empty()) throw ParseError(line_no, "empty class id or channel");
    auto& ch = channels[std::string(channel)];
    ch.name = std::string(channel);
    ch.values[std::string(id)] = std::string(value);
  }
  for (auto& [name, ch] : channels) {
    bool numeric = true, flags = true;
    for (const auto& [id, v] : ch.values) {
      numeric = numeric && detail::parse_number(v).has_value();
      flags = flags && detail::parse_flag(v).has_value();
    }
    ch.type = numeric ? ChannelType::scalar : (flags ? ChannelType::flag : ChannelType::categorical);
  }
  return channels;
}

inline Channel package_channel(const ClassGraph& graph) {
  Channel ch;
  ch.name = kPackageChannel;
  ch.type = ChannelType::categorical;
  for (const auto& c : graph.classes()) ch.values[c.id] = c.package.empty() ? "(root)" : c.package;
  return ch;
}

namespace detail {

inline std::string hex_color(double r, double g, double b) {
  auto byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(r), byte(g), byte(b));
  return buf;
}

inline std::array<double, 3> parse_hex(std::string_view hex) {
  auto component = [&](std::size_t at) {
    int v = 0;
    std::from_chars(hex.data() + at, hex.data() + at + 2, v, 16);
    return v / 255.0;
  };
  return {component(1), component(3), component(5)};
}

inline std::uint32_t fnv1a32(std::string_view text) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : text) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

}  // namespace detail

// Stable per-category colour: hue from a FNV-1a hash of the category name,
// avalanched so names differing in one trailing character still land apart.
inline std::string categorical_color(std::string_view category) {
  std::uint32_t h = detail::fnv1a32(category);
  h ^= h >> 16;
  h *= 0x85ebca6bu;
  h ^= h >> 13;
  h *= 0xc2b2ae35u;
  h ^= h >> 16;
  const double hue = static_cast<double>(h % 360u);
  const double s = 0.6, l = 0.5;
  const double c = (1 - std::abs(2 * l - 1)) * s;
  const double hp = hue / 60.0;
  const double x = c * (1 - std::abs(std::fmod(hp, 2.0) - 1));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = l - c / 2;
  return detail::hex_color(r + m, g + m, b + m);
}

// Blue-to-red ramp for t in [0, 1].
inline std::string scalar_color(double t) {
  const auto lo = detail::parse_hex("#2c7bb6");
  const auto hi = detail::parse_hex("#d7191c");
  t = std::clamp(t, 0.0, 1.0);
  return detail::hex_color(lo[0] + (hi[0] - lo[0]) * t, lo[1] + (hi[1] - lo[1]) * t, lo[2] + (hi[2] - lo[2]) * t);
}

struct OverlayOptions {
  bool fixed_height = false;
};

// Resolves every binding into per-building and per-link visual attributes.
// Geometry is left untouched; classes without a value keep the defaults.
// Link attributes take the value of the link's source class.
inline CityMap bind_overlay(CityMap map, const ClassGraph& graph, const OverlaySet& overlays,
                            const OverlayOptions& options = {}) {
  map.visuals.assign(map.buildings.size(), BuildingVisual{});
  map.link_visuals.assign(map.links.size(), LinkVisual{});

  for (const auto& binding : overlays.bindings) {
    auto found = overlays.channels.find(binding.channel);
    if (found == overlays.channels.end()) throw ValidationError("binding refers to unknown channel '" + binding.channel + "'");
    const Channel& channel = found->second;

    auto numeric = [&](const std::string& raw) -> std::optional<double> {
      std::optional<double> v;
      if (channel.type == ChannelType::flag) {
        if (auto f = detail::parse_flag(raw)) v = *f ? 1.0 : 0.0;
      } else {
        v = detail::parse_number(raw);
      }
      if (v && binding.transform == ValueTransform::sqrt) v = std::sqrt(std::max(0.0, *v));
      return v;
    };
    if (channel.type == ChannelType::categorical) {
      switch (binding.attribute) {
        case VisualAttribute::building_color:
        case VisualAttribute::ground_color:
        case VisualAttribute::building_shape:
        case VisualAttribute::link_color:
          break;
        default:
          throw ValidationError("categorical channel '" + channel.name + "' cannot drive " +
                                std::string(to_string(binding.attribute)));
      }
    }

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    if (channel.type != ChannelType::categorical) {
      for (const auto& [id, raw] : channel.values) {
        auto v = numeric(raw);
        if (!v) throw ValidationError("channel '" + channel.name + "' has a non-numeric value for " + id);
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    }
    auto normalized = [&](double v) { return hi > lo ? (v - lo) / (hi - lo) : 1.0; };
    auto color_for = [&](const std::string& raw) -> std::string {
      if (channel.type == ChannelType::categorical) {
        auto palette = overlays.palettes.find(channel.name);
        if (palette != overlays.palettes.end()) {
          auto c = palette->second.find(raw);
          if (c != palette->second.end()) return c->second;
        }
        return categorical_color(raw);
      }
      if (channel.type == ChannelType::flag) return *numeric(raw) > 0.5 ? "#d7191c" : kDefaultBuildingColor;
      return scalar_color(normalized(*numeric(raw)));
    };
    static const std::array<const char*, 4> kShapes{"box", "cylinder", "pyramid", "prism"};

    auto value_of = [&](std::size_t class_index) -> const std::string* {
      auto it = channel.values.find(graph.entity(class_index).id);
      return it == channel.values.end() ? nullptr : &it->second;
    };

    for (std::size_t i = 0; i < map.buildings.size(); ++i) {
      const std::string* raw = value_of(map.buildings[i].class_index);
      if (!raw) continue;
      auto& visual = map.visuals[i];
      switch (binding.attribute) {
        case VisualAttribute::building_color: visual.color = color_for(*raw); break;
        case VisualAttribute::ground_color: visual.ground_color = color_for(*raw); break;
        case VisualAttribute::building_shape:
          visual.shape = kShapes[detail::fnv1a32(*raw) % kShapes.size()];
          break;
        case VisualAttribute::building_height: visual.height = *numeric(*raw) * binding.scale; break;
        case VisualAttribute::building_brightness: visual.brightness = 0.3 + 0.7 * normalized(*numeric(*raw)); break;
        case VisualAttribute::building_ornament: visual.under_construction = *numeric(*raw) > 0.0; break;
        case VisualAttribute::ground_fire: visual.fire = *numeric(*raw) > 0.0; break;
        default: break;
      }
    }
    for (std::size_t k = 0; k < map.links.size(); ++k) {
      const std::string* raw = value_of(map.links[k].source);
      if (!raw) continue;
      auto& visual = map.link_visuals[k];
      switch (binding.attribute) {
        case VisualAttribute::link_color: visual.color = color_for(*raw); break;
        case VisualAttribute::link_thickness: visual.thickness = *numeric(*raw) * binding.scale; break;
        case VisualAttribute::link_height: visual.height = *numeric(*raw) * binding.scale; break;
        default: break;
      }
    }
  }
  if (options.fixed_height)
    for (auto& v : map.visuals) v.height = 1.0;
  map.overlays = overlays;
  return map;
}

}  // namespace sarfmap
