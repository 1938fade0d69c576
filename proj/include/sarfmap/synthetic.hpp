#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "sarfmap/graph_model.hpp"

namespace sarfmap::synthetic {

// SplitMix64: tiny, portable and identical on every platform, unlike the
// standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) noexcept { return static_cast<std::size_t>(next() % n); }
  bool chance(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
};

struct PlantedConfig {
  std::size_t clusters = 8;
  std::size_t cluster_size = 15;
  double p_in = 0.3;
  double p_out = 0.01;
};

struct PlantedGraph {
  MemberGraph graph;
  std::vector<std::size_t> labels;  // by class index (ids sort in generation order)
};

// Directed planted partition with unit-weight class edges.
inline PlantedGraph planted_partition(std::uint64_t seed, const PlantedConfig& config = {}) {
  Rng rng(seed);
  PlantedGraph out;
  const std::size_t n = config.clusters * config.cluster_size;
  auto id = [](std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "c%04zu", i);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t group = i / config.cluster_size;
    char name[64];
    std::snprintf(name, sizeof name, "Group%zuPart%zu", group, i % config.cluster_size);
    out.graph.classes.push_back({id(i), name, "planted.group" + std::to_string(group)});
    out.labels.push_back(group);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool same = out.labels[i] == out.labels[j];
      if (rng.chance(same ? config.p_in : config.p_out)) out.graph.class_dependencies.push_back({id(i), id(j), 1.0});
    }
  }
  return out;
}

// A Swing-sized member-level fixture: 536 classes over 16 javax.swing-like
// packages, grouped into feature families that mostly depend downward.
inline MemberGraph swing_like_fixture(std::uint64_t seed = 2012) {
  static constexpr std::array<const char*, 16> kPackages{
      "javax.swing",           "javax.swing.border",      "javax.swing.colorchooser", "javax.swing.event",
      "javax.swing.filechooser", "javax.swing.plaf",      "javax.swing.plaf.basic",   "javax.swing.plaf.metal",
      "javax.swing.plaf.multi",  "javax.swing.plaf.synth", "javax.swing.table",       "javax.swing.text",
      "javax.swing.text.html",   "javax.swing.text.rtf",   "javax.swing.tree",        "javax.swing.undo"};
  struct Theme {
    const char* word;
    std::size_t home;  // package index for model-level classes
  };
  static constexpr std::array<Theme, 24> kThemes{{
      {"Button", 0},   {"Table", 10},  {"Tree", 14},     {"Text", 11},    {"Menu", 0},      {"Scroll", 0},
      {"Border", 1},   {"Layout", 0},  {"List", 0},      {"Combo", 0},    {"Slider", 0},    {"Tab", 0},
      {"Split", 0},    {"Toolbar", 0}, {"Tooltip", 0},   {"File", 4},     {"Color", 2},     {"Option", 0},
      {"Desktop", 0},  {"Progress", 0}, {"Html", 12},    {"Rtf", 13},     {"Undo", 15},     {"Synth", 9}}};
  // role name pattern and the package it usually lives in (-1: theme home)
  struct Role {
    const char* prefix;
    const char* suffix;
    int package;
    int layer;
  };
  static constexpr std::array<Role, 12> kRoles{{
      {"J", "", 0, 0},          {"Basic", "UI", 6, 0},     {"Metal", "UI", 7, 0},    {"Multi", "UI", 8, 0},
      {"", "Model", -1, 1},     {"Default", "Model", -1, 1}, {"", "Listener", 3, 1}, {"", "Event", 3, 1},
      {"", "Renderer", -1, 2},  {"", "Editor", -1, 2},     {"", "Handler", -1, 2},   {"", "Support", 5, 3}}};

  constexpr std::size_t kClasses = 536;
  Rng rng(seed);
  MemberGraph graph;

  struct Made {
    std::size_t theme;
    int layer;
    std::vector<std::string> members;
  };
  std::vector<Made> made;
  std::vector<std::size_t> counters(kThemes.size() * kRoles.size(), 0);

  // feature sizes between 14 and 30, cycling until all classes exist
  std::vector<std::size_t> sizes(kThemes.size());
  std::size_t total = 0;
  for (auto& s : sizes) {
    s = 14 + rng.below(17);
    total += s;
  }
  while (total != kClasses) {
    std::size_t t = rng.below(sizes.size());
    if (total < kClasses && sizes[t] < 40) {
      ++sizes[t];
      ++total;
    } else if (total > kClasses && sizes[t] > 10) {
      --sizes[t];
      --total;
    }
  }

  for (std::size_t t = 0; t < kThemes.size(); ++t) {
    for (std::size_t k = 0; k < sizes[t]; ++k) {
      std::size_t r = k < kRoles.size() ? k : rng.below(kRoles.size());
      const Role& role = kRoles[r];
      std::size_t pkg = role.package < 0 ? kThemes[t].home : static_cast<std::size_t>(role.package);
      if (kThemes[t].home != 0 && role.package == 0) pkg = kThemes[t].home;
      std::size_t& counter = counters[t * kRoles.size() + r];
      std::string name = std::string(role.prefix) + kThemes[t].word + role.suffix;
      if (counter > 0) name += std::to_string(counter + 1);
      ++counter;

      char id[32];
      std::snprintf(id, sizeof id, "s%03zu", made.size());
      graph.classes.push_back({id, name, kPackages[pkg]});
      Made m{t, role.layer, {}};
      std::size_t member_count = 2 + rng.below(6);
      for (std::size_t q = 0; q < member_count; ++q) {
        bool field = q > 0 && rng.chance(0.3);
        std::string mid = std::string(id) + (field ? ".f" : ".m") + std::to_string(q);
        graph.members.push_back({mid, id, field ? MemberKind::field : MemberKind::method});
        m.members.push_back(mid);
      }
      made.push_back(std::move(m));
    }
  }

  std::vector<std::vector<std::size_t>> by_theme(kThemes.size());
  for (std::size_t i = 0; i < made.size(); ++i) by_theme[made[i].theme].push_back(i);
  const std::size_t core = 7;  // "Layout" doubles as shared infrastructure

  auto pick_member = [&](std::size_t cls) -> const std::string& {
    const auto& ms = made[cls].members;
    return ms[rng.below(ms.size())];
  };
  for (std::size_t i = 0; i < made.size(); ++i) {
    const auto& family = by_theme[made[i].theme];
    for (const auto& src : made[i].members) {
      if (src.find(".f") != std::string::npos) continue;
      std::size_t calls = 1 + rng.below(3);
      for (std::size_t c = 0; c < calls; ++c) {
        double roll = rng.uniform();
        std::size_t target;
        if (roll < 0.85) {
          // within the family, preferring the same or a lower layer
          std::vector<std::size_t> lower;
          for (auto f : family)
            if (f != i && (made[f].layer > made[i].layer || (made[f].layer == made[i].layer && rng.chance(0.15))))
              lower.push_back(f);
          if (lower.empty()) continue;
          target = lower[rng.below(lower.size())];
        } else if (roll < 0.95) {
          target = by_theme[core][rng.below(by_theme[core].size())];
        } else {
          target = rng.below(made.size());
        }
        if (target == i) continue;
        const std::string& dst = pick_member(target);
        DependencyKind kind = dst.find(".f") != std::string::npos ? DependencyKind::field_access : DependencyKind::call;
        if (rng.chance(0.05)) kind = DependencyKind::type_reference;
        graph.dependencies.push_back({src, dst, kind});
      }
    }
    if (made[i].layer == 0 && rng.chance(0.3)) {
      // UI delegates extend a shared base in the same family
      std::size_t base = family.front();
      if (base != i) graph.dependencies.push_back({made[i].members.front(), made[base].members.front(), DependencyKind::inheritance});
    }
  }
  return graph;
}

}  // namespace sarfmap::synthetic
