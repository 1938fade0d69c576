#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sarfmap/annotate/overlay.hpp"
#include "sarfmap/errors.hpp"
#include "sarfmap/map_document.hpp"

namespace sarfmap {

struct SvgOptions {
  double scale = 12.0;   // pixels per map unit
  double margin = 2.0;   // map units around the bounds
  bool fixed_height = false;
  std::optional<std::string> channel;  // colour buildings by this channel instead of the bound visuals
  bool links = true;
  bool keywords = true;
};

namespace detail {

inline std::string num(double v, int precision = 2) {
  if (std::abs(v) < 0.5 * std::pow(10.0, -precision)) v = 0.0;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  std::string s(buf, end);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

inline std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string shade(std::string_view hex, double factor) {
  auto c = parse_hex(hex);
  return hex_color(c[0] * factor, c[1] * factor, c[2] * factor);
}

}  // namespace detail

// Static top-down rendering of a map document.
inline std::string render_svg(const MapDocument& doc, const SvgOptions& options = {}) {
  using detail::num;
  const double s = options.scale;
  const double ox = doc.bounds.x - options.margin, oy = doc.bounds.y - options.margin;
  auto px = [&](double x) { return (x - ox) * s; };
  auto py = [&](double y) { return (y - oy) * s; };

  // building colours: bound visuals, or a channel chosen at render time
  std::vector<std::string> fill(doc.buildings.size());
  std::map<std::string, std::string> legend;
  std::string legend_title = "building colour";
  if (options.channel) {
    const std::string& name = *options.channel;
    auto found = doc.overlays.channels.find(name);
    if (found == doc.overlays.channels.end() && name != kPackageChannel) {
      std::string available = kPackageChannel;
      for (const auto& [n, ch] : doc.overlays.channels)
        if (n != kPackageChannel) available += ", " + n;
      throw ValidationError("unknown overlay channel '" + name + "'; available: " + available);
    }
    Channel channel;
    if (found != doc.overlays.channels.end()) {
      channel = found->second;
    } else {
      channel.name = kPackageChannel;
      for (const auto& b : doc.buildings) channel.values[b.id] = b.package.empty() ? "(root)" : b.package;
    }
    legend_title = channel.name;
    double lo = 0, hi = 0;
    bool first = true;
    if (channel.type == ChannelType::scalar) {
      for (const auto& [id, raw] : channel.values) {
        double v = detail::parse_number(raw).value_or(0.0);
        lo = first ? v : std::min(lo, v);
        hi = first ? v : std::max(hi, v);
        first = false;
      }
    }
    auto palette = doc.overlays.palettes.find(channel.name);
    for (std::size_t i = 0; i < doc.buildings.size(); ++i) {
      auto it = channel.values.find(doc.buildings[i].id);
      if (it == channel.values.end()) {
        fill[i] = kDefaultBuildingColor;
        continue;
      }
      const std::string& raw = it->second;
      if (channel.type == ChannelType::categorical) {
        std::string color = categorical_color(raw);
        if (palette != doc.overlays.palettes.end() && palette->second.contains(raw)) color = palette->second.at(raw);
        fill[i] = color;
        legend[raw] = color;
      } else if (channel.type == ChannelType::flag) {
        bool on = detail::parse_flag(raw).value_or(false);
        fill[i] = on ? "#d7191c" : kDefaultBuildingColor;
        legend[on ? "true" : "false"] = fill[i];
      } else {
        double v = detail::parse_number(raw).value_or(0.0);
        fill[i] = scalar_color(hi > lo ? (v - lo) / (hi - lo) : 1.0);
      }
    }
    if (channel.type == ChannelType::scalar) {
      legend[num(lo, 3)] = scalar_color(0.0);
      legend[num(hi, 3)] = scalar_color(1.0);
    }
  } else {
    for (std::size_t i = 0; i < doc.buildings.size(); ++i) fill[i] = doc.buildings[i].visual.color;
    for (const auto& binding : doc.overlays.bindings) {
      if (binding.attribute != VisualAttribute::building_color) continue;
      legend.clear();
      legend_title = binding.channel;
      auto ch = doc.overlays.channels.find(binding.channel);
      if (ch == doc.overlays.channels.end() || ch->second.type != ChannelType::categorical) continue;
      for (std::size_t i = 0; i < doc.buildings.size(); ++i) {
        auto v = ch->second.values.find(doc.buildings[i].id);
        if (v != ch->second.values.end()) legend[v->second] = fill[i];
      }
    }
  }

  double max_height = 0.0;
  for (const auto& b : doc.buildings) max_height = std::max(max_height, b.visual.height);

  const double map_w = (doc.bounds.width + 2 * options.margin) * s;
  const double map_h = (doc.bounds.height + 2 * options.margin) * s;
  const double legend_w = 240.0;
  const std::size_t legend_rows = std::min<std::size_t>(legend.size(), 40);
  const double total_w = map_w + legend_w;
  const double total_h = std::max(map_h, 40.0 + 16.0 * static_cast<double>(legend_rows + 1));

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(total_w) + "\" height=\"" +
         num(total_h) + "\" viewBox=\"0 0 " + num(total_w) + " " + num(total_h) + "\">\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + num(total_w) + "\" height=\"" + num(total_h) +
         "\" fill=\"#f7f5ef\"/>\n";

  // links with a gradient need one definition each, in user space
  std::vector<std::string> gradient_id(doc.links.size());
  if (options.links) {
    out += "<defs>\n";
    for (std::size_t k = 0; k < doc.links.size(); ++k) {
      const auto& l = doc.links[k];
      if (!l.visual.color.empty() || l.points.size() < 2) continue;
      gradient_id[k] = "link" + std::to_string(k);
      const auto& a = l.points.front();
      const auto& b = l.points.back();
      out += "<linearGradient id=\"" + gradient_id[k] + "\" gradientUnits=\"userSpaceOnUse\" x1=\"" + num(px(a.x)) +
             "\" y1=\"" + num(py(a.y)) + "\" x2=\"" + num(px(b.x)) + "\" y2=\"" + num(py(b.y)) + "\">";
      out += "<stop offset=\"0\" stop-color=\"" + std::string(kLinkSourceColor) + "\"/>";
      out += "<stop offset=\"1\" stop-color=\"" + std::string(kLinkTargetColor) + "\"/>";
      out += "</linearGradient>\n";
    }
    out += "</defs>\n";
  }

  out += "<g id=\"blocks\">\n";
  for (const auto& b : doc.blocks) {
    out += "<rect class=\"block\" data-cluster=\"" + std::to_string(b.cluster) + "\" x=\"" + num(px(b.rect.x)) +
           "\" y=\"" + num(py(b.rect.y)) + "\" width=\"" + num(b.rect.width * s) + "\" height=\"" +
           num(b.rect.height * s) + "\" fill=\"#d9d4c7\"/>\n";
  }
  const double cell = doc.cell_size;
  std::map<std::size_t, int> levels_of_block;
  for (const auto& b : doc.blocks) levels_of_block[b.cluster] = b.levels;
  for (const auto& b : doc.buildings) {
    int levels = std::max(1, levels_of_block[b.block]);
    double step = levels > 1 ? static_cast<double>(b.slope) / (levels - 1) : 1.0;
    std::string ground = b.visual.ground_color.empty() ? detail::shade("#e8e2d0", 0.78 + 0.22 * step)
                                                       : b.visual.ground_color;
    out += "<rect class=\"ground\" data-level=\"" + std::to_string(b.level) + "\" x=\"" +
           num(px(b.position.x - cell / 2)) + "\" y=\"" + num(py(b.position.y - cell / 2)) + "\" width=\"" +
           num(cell * s) + "\" height=\"" + num(cell * s) + "\" fill=\"" + ground + "\"";
    if (b.visual.fire) out += " stroke=\"#ff7f00\" stroke-width=\"" + num(0.12 * s) + "\"";
    out += "/>\n";
  }
  out += "</g>\n";

  out += "<g id=\"streets\">\n";
  for (const auto& st : doc.streets) {
    bool separator = st.kind == StreetKind::separator;
    double w = separator ? st.width : st.width * std::max(0.4, 1.0 - 0.15 * static_cast<double>(st.depth));
    double x0 = std::min(st.start.x, st.end.x), x1 = std::max(st.start.x, st.end.x);
    double y0 = std::min(st.start.y, st.end.y), y1 = std::max(st.start.y, st.end.y);
    Rect r = st.axis == Axis::horizontal ? Rect{x0, st.start.y - w / 2, x1 - x0, w} : Rect{st.start.x - w / 2, y0, w, y1 - y0};
    out += "<rect class=\"" + std::string(separator ? "separator" : "street") + "\" data-id=\"" +
           std::to_string(st.id) + "\" data-depth=\"" + std::to_string(st.depth) + "\" x=\"" + num(px(r.x)) +
           "\" y=\"" + num(py(r.y)) + "\" width=\"" + num(r.width * s) + "\" height=\"" + num(r.height * s) +
           "\" fill=\"" + (separator ? "#c9dde8" : "#ffffff") + "\" stroke=\"" + (separator ? "none" : "#bdb7a8") +
           "\" stroke-width=\"0.5\"/>\n";
  }
  out += "</g>\n";

  out += "<g id=\"buildings\">\n";
  for (std::size_t i = 0; i < doc.buildings.size(); ++i) {
    const auto& b = doc.buildings[i];
    double h = options.fixed_height || max_height <= 0.0 ? 1.0 : b.visual.height / max_height;
    double side = cell * (0.45 + 0.4 * std::clamp(h, 0.0, 1.0));
    std::string color = detail::shade(fill[i], std::clamp(b.visual.brightness, 0.0, 1.0));
    out += "<rect class=\"building\" data-id=\"" + detail::xml_escape(b.id) + "\" x=\"" +
           num(px(b.position.x - side / 2)) + "\" y=\"" + num(py(b.position.y - side / 2)) + "\" width=\"" +
           num(side * s) + "\" height=\"" + num(side * s) + "\" fill=\"" + color + "\"";
    if (b.visual.under_construction) out += " stroke=\"#333333\" stroke-dasharray=\"2,2\"";
    out += "><title>" + detail::xml_escape(b.name) + " (" + detail::xml_escape(b.package) + ")</title></rect>\n";
  }
  out += "</g>\n";

  if (options.links) {
    out += "<g id=\"links\" fill=\"none\" stroke-opacity=\"0.35\">\n";
    for (std::size_t k = 0; k < doc.links.size(); ++k) {
      const auto& l = doc.links[k];
      if (l.points.size() < 2) continue;
      std::string d = "M" + num(px(l.points.front().x)) + "," + num(py(l.points.front().y));
      if (l.intra_block) {
        // quadratic arc bulging sideways; the arc height stands in for elevation
        const auto& a = l.points.front();
        const auto& b = l.points.back();
        double dx = b.x - a.x, dy = b.y - a.y;
        double len = std::hypot(dx, dy);
        double bulge = 0.35 * len + 0.2 * cell;
        double cx = (a.x + b.x) / 2 - (len > 0 ? dy / len : 0) * bulge;
        double cy = (a.y + b.y) / 2 + (len > 0 ? dx / len : -1) * bulge;
        d += " Q" + num(px(cx)) + "," + num(py(cy)) + " " + num(px(b.x)) + "," + num(py(b.y));
      } else {
        for (std::size_t p = 1; p < l.points.size(); ++p) d += " L" + num(px(l.points[p].x)) + "," + num(py(l.points[p].y));
      }
      std::string stroke = l.visual.color.empty() ? "url(#" + gradient_id[k] + ")" : l.visual.color;
      out += "<path class=\"link\" data-source=\"" + detail::xml_escape(l.source) + "\" data-target=\"" +
             detail::xml_escape(l.target) + "\" d=\"" + d + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             num(std::max(0.4, l.width * l.visual.thickness * s / 24.0)) + "\"/>\n";
    }
    out += "</g>\n";
  }

  if (options.keywords) {
    out += "<g id=\"keywords\" font-family=\"sans-serif\" text-anchor=\"middle\" dominant-baseline=\"central\">\n";
    for (const auto& k : doc.keywords) {
      double size = (0.6 + 0.3 * k.tier) * s;
      out += "<text class=\"keyword\" data-tier=\"" + std::to_string(k.tier) + "\" x=\"" + num(px(k.position.x)) +
             "\" y=\"" + num(py(k.position.y)) + "\" font-size=\"" + num(size) +
             "\" fill=\"#222222\" fill-opacity=\"0.85\">" + detail::xml_escape(k.word) + "</text>\n";
    }
    out += "</g>\n";
  }

  out += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  double lx = map_w + 12, ly = 20;
  out += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" font-weight=\"bold\">" + detail::xml_escape(legend_title) +
         "</text>\n";
  std::size_t row = 0;
  for (const auto& [label, color] : legend) {
    if (row == legend_rows) break;
    double y = ly + 16.0 * static_cast<double>(row + 1);
    out += "<rect x=\"" + num(lx) + "\" y=\"" + num(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>";
    out += "<text x=\"" + num(lx + 16) + "\" y=\"" + num(y) + "\">" + detail::xml_escape(label) + "</text>\n";
    ++row;
  }
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace sarfmap
