#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sarfmap/block_layout.hpp"
#include "sarfmap/city_map.hpp"

namespace sarfmap {

struct PatternConfig {
  double single_color_share = 0.95;
  double layered_share = 0.80;
  double subgroup_share = 0.25;
};

// Classifies how packages are laid out inside one block. Checked in order:
//   single_color: one package covers >= single_color_share of the buildings
//   layered:      >= layered_share of buildings carry their level's majority
//                 package, at least two packages are majorities, and each
//                 majority package occupies a contiguous band of levels
//   subgroups:    at least two same-package 4-connected regions each hold
//                 >= subgroup_share of the buildings
//   mixed:        anything else
// `package_of` is indexed by class index.
inline BlockPattern classify_block_pattern(const BlockLayout& block, const std::vector<std::string>& package_of,
                                           const PatternConfig& config = {}) {
  BlockPattern result;
  result.block = block.cluster;
  const auto& cells = block.placements;
  const double n = static_cast<double>(cells.size());
  if (cells.empty()) return result;

  std::map<std::string, std::size_t> count;
  for (const auto& p : cells) ++count[package_of.at(p.class_index)];
  std::vector<std::pair<std::string, std::size_t>> ranked(count.begin(), count.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) result.dominant_packages.push_back(ranked[i].first);

  if (static_cast<double>(ranked.front().second) >= config.single_color_share * n) {
    result.pattern = PatternKind::single_color;
    return result;
  }

  std::map<int, std::map<std::string, std::size_t>> per_level;
  for (const auto& p : cells) ++per_level[p.level][package_of.at(p.class_index)];
  std::map<int, std::string> majority;
  for (const auto& [level, packages] : per_level) {
    auto best = packages.begin();
    for (auto it = packages.begin(); it != packages.end(); ++it)
      if (it->second > best->second) best = it;
    majority[level] = best->first;
  }
  std::size_t agreeing = 0;
  for (const auto& p : cells)
    if (package_of.at(p.class_index) == majority.at(p.level)) ++agreeing;
  std::map<std::string, int> bands;
  bool contiguous = true;
  std::string previous;
  for (const auto& [level, package] : majority) {
    if (package != previous) {
      if (bands.contains(package)) contiguous = false;
      ++bands[package];
    }
    previous = package;
  }
  if (static_cast<double>(agreeing) >= config.layered_share * n && bands.size() >= 2 && contiguous) {
    result.pattern = PatternKind::layered;
    return result;
  }

  std::map<std::pair<int, int>, std::size_t> at;
  for (std::size_t i = 0; i < cells.size(); ++i) at[{cells[i].column, cells[i].row}] = i;
  std::vector<int> component(cells.size(), -1);
  std::size_t large = 0;
  int next_component = 0;
  for (std::size_t start = 0; start < cells.size(); ++start) {
    if (component[start] >= 0) continue;
    const auto& package = package_of.at(cells[start].class_index);
    std::vector<std::size_t> stack{start};
    component[start] = next_component;
    std::size_t size = 0;
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      ++size;
      const int dc[4] = {1, -1, 0, 0}, dr[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        auto it = at.find({cells[i].column + dc[d], cells[i].row + dr[d]});
        if (it == at.end() || component[it->second] >= 0) continue;
        if (package_of.at(cells[it->second].class_index) != package) continue;
        component[it->second] = next_component;
        stack.push_back(it->second);
      }
    }
    ++next_component;
    if (static_cast<double>(size) >= config.subgroup_share * n) ++large;
  }
  result.pattern = large >= 2 ? PatternKind::subgroups : PatternKind::mixed;
  return result;
}

}  // namespace sarfmap
