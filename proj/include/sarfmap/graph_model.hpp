#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sarfmap/errors.hpp"

namespace sarfmap {

enum class MemberKind { method, field };

enum class DependencyKind { call, field_access, inheritance, type_reference };

struct ClassEntity {
  std::string id;
  std::string display_name;
  std::string package;  // dot-separated; empty means the root package

  bool operator==(const ClassEntity&) const = default;
};

struct Member {
  std::string id;
  std::string owner_class;
  MemberKind kind = MemberKind::method;

  bool operator==(const Member&) const = default;
};

struct MemberDependency {
  std::string source;
  std::string target;
  DependencyKind kind = DependencyKind::call;

  bool operator==(const MemberDependency&) const = default;
};

// Pre-weighted class-level edge (`cdep` record); bypasses dedication scoring.
struct ClassDependency {
  std::string source;
  std::string target;
  double weight = 0.0;

  bool operator==(const ClassDependency&) const = default;
};

// Records are kept in input order so that serialization round-trips exactly.
struct MemberGraph {
  std::vector<ClassEntity> classes;
  std::vector<Member> members;
  std::vector<MemberDependency> dependencies;
  std::vector<ClassDependency> class_dependencies;

  bool empty() const noexcept { return classes.empty(); }
  bool operator==(const MemberGraph&) const = default;
};

// Per-kind multipliers applied on top of the dedication score. All 1.0 by default.
struct DependencyWeights {
  std::array<double, 4> multiplier{1.0, 1.0, 1.0, 1.0};

  double operator[](DependencyKind kind) const { return multiplier[static_cast<std::size_t>(kind)]; }
};

inline std::string_view to_string(MemberKind kind) {
  return kind == MemberKind::method ? "method" : "field";
}

inline std::string_view to_string(DependencyKind kind) {
  switch (kind) {
    case DependencyKind::call: return "call";
    case DependencyKind::field_access: return "field_access";
    case DependencyKind::inheritance: return "inheritance";
    case DependencyKind::type_reference: return "type_reference";
  }
  return "call";
}

inline std::optional<DependencyKind> parse_dependency_kind(std::string_view text) {
  if (text == "call") return DependencyKind::call;
  if (text == "field_access") return DependencyKind::field_access;
  if (text == "inheritance") return DependencyKind::inheritance;
  if (text == "type_reference") return DependencyKind::type_reference;
  return std::nullopt;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace detail

// Parses the line-oriented graph format:
//   class  <id> <display_name> [<package>]
//   member <id> <owner_class_id> <method|field>
//   dep    <source_member> <target_member> <call|field_access|inheritance|type_reference>
//   cdep   <source_class> <target_class> <weight>
// Validation runs after all records are read, so record order is irrelevant.
inline MemberGraph parse_member_graph(std::string_view document) {
  MemberGraph graph;
  std::vector<std::size_t> class_lines, member_lines, dep_lines, cdep_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    std::size_t end = document.find('\n', pos);
    if (end == std::string_view::npos) end = document.size();
    std::string_view line = document.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto fields = detail::split_fields(line);
    if (fields.empty() || fields[0].front() == '#') {
      if (end == document.size()) break;
      continue;
    }
    std::string_view kind = fields[0];
    if (kind == "class") {
      if (fields.size() != 3 && fields.size() != 4)
        throw ParseError(line_no, "class record needs <id> <display_name> [<package>]");
      graph.classes.push_back({std::string(fields[1]), std::string(fields[2]),
                               fields.size() == 4 ? std::string(fields[3]) : std::string()});
      class_lines.push_back(line_no);
    } else if (kind == "member") {
      if (fields.size() != 4) throw ParseError(line_no, "member record needs <id> <owner_class> <method|field>");
      MemberKind member_kind;
      if (fields[3] == "method") {
        member_kind = MemberKind::method;
      } else if (fields[3] == "field") {
        member_kind = MemberKind::field;
      } else {
        throw ValidationError("line " + std::to_string(line_no) + ": unknown member kind '" +
                              std::string(fields[3]) + "'");
      }
      graph.members.push_back({std::string(fields[1]), std::string(fields[2]), member_kind});
      member_lines.push_back(line_no);
    } else if (kind == "dep") {
      if (fields.size() != 4) throw ParseError(line_no, "dep record needs <source> <target> <kind>");
      auto dep_kind = parse_dependency_kind(fields[3]);
      if (!dep_kind)
        throw ValidationError("line " + std::to_string(line_no) + ": unknown dependency kind '" +
                              std::string(fields[3]) + "'");
      graph.dependencies.push_back({std::string(fields[1]), std::string(fields[2]), *dep_kind});
      dep_lines.push_back(line_no);
    } else if (kind == "cdep") {
      if (fields.size() != 4) throw ParseError(line_no, "cdep record needs <source> <target> <weight>");
      double weight = 0.0;
      auto text = fields[3];
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), weight);
      if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError(line_no, "invalid weight '" + std::string(text) + "'");
      if (!std::isfinite(weight) || weight <= 0.0)
        throw ValidationError("line " + std::to_string(line_no) + ": cdep weight must be positive");
      graph.class_dependencies.push_back({std::string(fields[1]), std::string(fields[2]), weight});
      cdep_lines.push_back(line_no);
    } else {
      throw ParseError(line_no, "unknown record kind '" + std::string(kind) + "'");
    }
    if (end == document.size()) break;
  }

  auto at = [](std::size_t line) { return "line " + std::to_string(line) + ": "; };

  std::unordered_map<std::string_view, std::size_t> class_index;
  for (std::size_t i = 0; i < graph.classes.size(); ++i) {
    if (!class_index.emplace(graph.classes[i].id, i).second)
      throw ValidationError(at(class_lines[i]) + "duplicate class id '" + graph.classes[i].id + "'");
  }
  std::unordered_map<std::string_view, std::size_t> member_index;
  for (std::size_t i = 0; i < graph.members.size(); ++i) {
    const auto& m = graph.members[i];
    if (!member_index.emplace(m.id, i).second)
      throw ValidationError(at(member_lines[i]) + "duplicate member id '" + m.id + "'");
    if (!class_index.contains(m.owner_class))
      throw ValidationError(at(member_lines[i]) + "member '" + m.id + "' owned by undeclared class '" +
                            m.owner_class + "'");
  }
  for (std::size_t i = 0; i < graph.dependencies.size(); ++i) {
    const auto& d = graph.dependencies[i];
    if (!member_index.contains(d.source))
      throw ValidationError(at(dep_lines[i]) + "dependency source '" + d.source + "' is not a declared member");
    if (!member_index.contains(d.target))
      throw ValidationError(at(dep_lines[i]) + "dependency target '" + d.target + "' is not a declared member");
    if (d.source == d.target && d.kind != DependencyKind::call)
      throw ValidationError(at(dep_lines[i]) + "only calls may be self-recursive ('" + d.source + "')");
  }
  for (std::size_t i = 0; i < graph.class_dependencies.size(); ++i) {
    const auto& d = graph.class_dependencies[i];
    if (!class_index.contains(d.source) || !class_index.contains(d.target))
      throw ValidationError(at(cdep_lines[i]) + "cdep references an undeclared class");
  }
  return graph;
}

inline std::string serialize_member_graph(const MemberGraph& graph) {
  std::string out;
  for (const auto& c : graph.classes) {
    out += "class " + c.id + " " + c.display_name;
    if (!c.package.empty()) out += " " + c.package;
    out += '\n';
  }
  for (const auto& m : graph.members)
    out += "member " + m.id + " " + m.owner_class + " " + std::string(to_string(m.kind)) + "\n";
  for (const auto& d : graph.dependencies)
    out += "dep " + d.source + " " + d.target + " " + std::string(to_string(d.kind)) + "\n";
  for (const auto& d : graph.class_dependencies)
    out += "cdep " + d.source + " " + d.target + " " + detail::format_shortest(d.weight) + "\n";
  return out;
}

// Number of distinct members (other than itself) that depend on each member.
inline std::unordered_map<std::string, std::size_t> fan_in_counts(const MemberGraph& graph) {
  std::set<std::pair<std::string_view, std::string_view>> distinct;
  for (const auto& d : graph.dependencies)
    if (d.source != d.target) distinct.emplace(d.target, d.source);
  std::unordered_map<std::string, std::size_t> fan_in;
  for (const auto& [target, source] : distinct) ++fan_in[std::string(target)];
  return fan_in;
}

// 1 / fan-in(target): how dedicated the target is to whoever depends on it.
inline double dedication_score(std::string_view target_member, const MemberGraph& graph) {
  std::set<std::string_view> sources;
  for (const auto& d : graph.dependencies)
    if (d.target == target_member && d.source != d.target) sources.insert(d.source);
  if (sources.empty())
    throw ValidationError("dedication score undefined for '" + std::string(target_member) + "': fan-in is 0");
  return 1.0 / static_cast<double>(sources.size());
}

// Directed weighted class-level graph. Nodes are kept sorted by id; node indices
// follow that order everywhere else in the library.
class ClassGraph {
 public:
  struct Arc {
    std::size_t node;
    double weight;
  };
  using EdgeMap = std::map<std::pair<std::size_t, std::size_t>, double>;

  ClassGraph() = default;

  // Edges are (source id, target id, weight) and are accumulated in the given
  // order. Self-edges are dropped; non-positive weights are rejected.
  ClassGraph(std::vector<ClassEntity> classes,
             std::span<const std::tuple<std::string, std::string, double>> edges)
      : classes_(std::move(classes)) {
    std::sort(classes_.begin(), classes_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      if (i > 0 && classes_[i].id == classes_[i - 1].id)
        throw ValidationError("duplicate class id '" + classes_[i].id + "'");
      index_.emplace(classes_[i].id, i);
    }
    EdgeMap edge_map;
    for (const auto& [source, target, weight] : edges) {
      auto s = index_of(source);
      auto t = index_of(target);
      if (!s || !t) throw ValidationError("edge references unknown class '" + (s ? target : source) + "'");
      if (!(weight > 0.0) || !std::isfinite(weight)) throw ValidationError("edge weight must be positive");
      if (*s == *t) continue;
      edge_map[{*s, *t}] += weight;
    }
    finalize(std::move(edge_map));
  }

  std::size_t size() const noexcept { return classes_.size(); }
  bool empty() const noexcept { return classes_.empty(); }
  const std::vector<ClassEntity>& classes() const noexcept { return classes_; }
  const ClassEntity& entity(std::size_t i) const { return classes_.at(i); }

  std::optional<std::size_t> index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const EdgeMap& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  double weight(std::size_t source, std::size_t target) const {
    auto it = edges_.find({source, target});
    return it == edges_.end() ? 0.0 : it->second;
  }

  double out_strength(std::size_t i) const { return out_strength_.at(i); }
  double in_strength(std::size_t i) const { return in_strength_.at(i); }
  double total_weight() const noexcept { return total_weight_; }

  std::span<const Arc> out_arcs(std::size_t i) const { return out_arcs_.at(i); }
  std::span<const Arc> in_arcs(std::size_t i) const { return in_arcs_.at(i); }

  bool operator==(const ClassGraph& other) const {
    return classes_ == other.classes_ && edges_ == other.edges_;
  }

 private:
  void finalize(EdgeMap edge_map) {
    edges_ = std::move(edge_map);
    const std::size_t n = classes_.size();
    out_strength_.assign(n, 0.0);
    in_strength_.assign(n, 0.0);
    out_arcs_.assign(n, {});
    in_arcs_.assign(n, {});
    total_weight_ = 0.0;
    for (const auto& [key, w] : edges_) {
      auto [s, t] = key;
      out_strength_[s] += w;
      in_strength_[t] += w;
      total_weight_ += w;
      out_arcs_[s].push_back({t, w});
      in_arcs_[t].push_back({s, w});
    }
  }

  std::vector<ClassEntity> classes_;
  std::unordered_map<std::string, std::size_t> index_;
  EdgeMap edges_;
  std::vector<double> out_strength_;
  std::vector<double> in_strength_;
  std::vector<std::vector<Arc>> out_arcs_;
  std::vector<std::vector<Arc>> in_arcs_;
  double total_weight_ = 0.0;
};

// Sums dedication scores of inter-class member dependencies into class edges,
// then adds any pre-weighted `cdep` records. A member pair counts once even if
// several records (or kinds) connect it; its multiplier is the largest among them.
inline ClassGraph aggregate_to_class_graph(const MemberGraph& graph, const DependencyWeights& weights = {}) {
  std::unordered_map<std::string_view, std::string_view> owner;
  for (const auto& m : graph.members) owner.emplace(m.id, m.owner_class);

  std::map<std::pair<std::string_view, std::string_view>, double> pairs;
  for (const auto& d : graph.dependencies) {
    if (d.source == d.target) continue;
    auto [it, inserted] = pairs.try_emplace({d.source, d.target}, weights[d.kind]);
    if (!inserted) it->second = std::max(it->second, weights[d.kind]);
  }
  std::map<std::string_view, std::size_t> fan_in;
  for (const auto& [key, mult] : pairs) ++fan_in[key.second];

  std::map<std::pair<std::string_view, std::string_view>, double> class_weight;
  for (const auto& [key, mult] : pairs) {
    auto source_class = owner.at(key.first);
    auto target_class = owner.at(key.second);
    if (source_class == target_class) continue;
    class_weight[{source_class, target_class}] += mult / static_cast<double>(fan_in.at(key.second));
  }

  std::vector<ClassDependency> cdeps = graph.class_dependencies;
  std::sort(cdeps.begin(), cdeps.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source, a.target, a.weight) < std::tie(b.source, b.target, b.weight);
  });
  for (const auto& d : cdeps) {
    if (d.source == d.target) continue;
    class_weight[{d.source, d.target}] += d.weight;
  }

  std::vector<std::tuple<std::string, std::string, double>> edges;
  edges.reserve(class_weight.size());
  for (const auto& [key, w] : class_weight) edges.emplace_back(std::string(key.first), std::string(key.second), w);
  return ClassGraph(graph.classes, edges);
}

}  // namespace sarfmap
