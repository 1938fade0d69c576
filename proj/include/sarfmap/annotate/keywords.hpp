#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sarfmap/city_map.hpp"
#include "sarfmap/graph_model.hpp"

namespace sarfmap {

// Splits an identifier or dotted path into lowercase words at punctuation,
// letter/digit and camel-case boundaries ("HTTPServer2Config" -> http, server,
// config). Pure digit runs and one-letter fragments are dropped.
inline std::vector<std::string> tokenize_identifier(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    bool digits_only = std::all_of(current.begin(), current.end(), [](unsigned char c) { return std::isdigit(c); });
    if (current.size() >= 2 && !digits_only) out.push_back(current);
    current.clear();
  };
  auto is_upper = [](unsigned char c) { return c >= 'A' && c <= 'Z'; };
  auto is_lower = [](unsigned char c) { return (c >= 'a' && c <= 'z') || c >= 0x80; };
  auto is_digit = [](unsigned char c) { return c >= '0' && c <= '9'; };

  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    unsigned char prev = i > 0 ? static_cast<unsigned char>(text[i - 1]) : 0;
    unsigned char next = i + 1 < text.size() ? static_cast<unsigned char>(text[i + 1]) : 0;
    if (is_upper(c) || is_lower(c)) {
      if (!current.empty()) {
        bool boundary = is_digit(prev) || (is_lower(prev) && prev < 0x80 && is_upper(c)) ||
                        (is_upper(prev) && is_upper(c) && is_lower(next) && next < 0x80);
        if (boundary) flush();
      }
      current += static_cast<char>(is_upper(c) ? c - 'A' + 'a' : c);
    } else if (is_digit(c)) {
      if (!current.empty() && !is_digit(prev)) flush();
      current += static_cast<char>(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

// Words drawn from a class's display name and package path.
inline std::set<std::string> class_words(const ClassEntity& entity) {
  std::set<std::string> words;
  for (auto& w : tokenize_identifier(entity.display_name)) words.insert(std::move(w));
  for (auto& w : tokenize_identifier(entity.package)) words.insert(std::move(w));
  return words;
}

struct TfIdf {
  double tf = 0.0;   // share of the block's classes containing the word
  double idf = 0.0;  // ln(#blocks / #blocks containing the word)

  double value() const noexcept { return tf * idf; }
};

// Blocks are the documents; each document is the list of its classes' word sets.
inline std::vector<std::map<std::string, TfIdf>> block_tfidf(
    const std::vector<std::vector<std::set<std::string>>>& blocks) {
  std::map<std::string, std::size_t> document_frequency;
  std::vector<std::map<std::string, std::size_t>> counts(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const auto& words : blocks[b])
      for (const auto& w : words) ++counts[b][w];
    for (const auto& [w, n] : counts[b]) ++document_frequency[w];
  }
  std::vector<std::map<std::string, TfIdf>> out(blocks.size());
  const double docs = static_cast<double>(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const auto& [w, n] : counts[b]) {
      TfIdf t;
      t.tf = static_cast<double>(n) / static_cast<double>(blocks[b].size());
      t.idf = std::log(docs / static_cast<double>(document_frequency.at(w)));
      out[b][w] = t;
    }
  }
  return out;
}

struct KeywordConfig {
  std::size_t per_block = 3;
  int nudge_attempts = 8;
};

namespace detail {

inline Rect label_box(const std::string& word, int tier, Point at) {
  double height = 0.6 + 0.3 * tier;
  double width = 0.6 * height * static_cast<double>(word.size());
  return {at.x - width / 2, at.y - height / 2, width, height};
}

}  // namespace detail

// Tag-cloud labels. Every word is anchored over the building it came from;
// within a block the occurrence with the highest tf-idf density over its 3x3
// cell neighbourhood represents the word, and the densest words win. Labels are
// then placed in descending density, nudged up to `nudge_attempts` times to
// avoid earlier labels, and dropped if no free spot is found.
inline std::vector<KeywordLabel> extract_keywords(const CityMap& map, const ClassGraph& graph,
                                                  const KeywordConfig& config = {}) {
  std::vector<std::vector<std::set<std::string>>> docs(map.blocks.size());
  std::vector<std::vector<std::size_t>> members(map.blocks.size());
  std::vector<std::set<std::string>> words_of(map.buildings.size());
  for (const auto& site : map.buildings) {
    words_of[site.class_index] = class_words(graph.entity(site.class_index));
    docs[site.block].push_back(words_of[site.class_index]);
    members[site.block].push_back(site.class_index);
  }
  auto tfidf = block_tfidf(docs);

  std::vector<KeywordLabel> candidates;
  for (std::size_t b = 0; b < map.blocks.size(); ++b) {
    std::vector<KeywordLabel> local;
    for (const auto& [word, score] : tfidf[b]) {
      if (!(score.value() > 0.0)) continue;
      std::vector<std::size_t> hits;
      for (auto c : members[b])
        if (words_of[c].contains(word)) hits.push_back(c);
      KeywordLabel best;
      best.density = -1.0;
      for (auto c : hits) {
        const auto& here = map.buildings[c];
        double sum = 0.0;
        for (auto o : hits) {
          const auto& there = map.buildings[o];
          if (std::abs(here.column - there.column) <= 1 && std::abs(here.row - there.row) <= 1) sum += score.value();
        }
        double density = sum / 9.0;
        if (density > best.density) {
          best.word = word;
          best.block = b;
          best.anchor_class = c;
          best.anchor = here.center;
          best.weight = score.value();
          best.density = density;
        }
      }
      local.push_back(best);
    }
    std::sort(local.begin(), local.end(), [](const auto& x, const auto& y) {
      if (x.density != y.density) return x.density > y.density;
      return x.word < y.word;
    });
    if (local.size() > config.per_block) local.resize(config.per_block);
    candidates.insert(candidates.end(), local.begin(), local.end());
  }
  if (candidates.empty()) return {};

  double top = 0.0;
  for (const auto& k : candidates) top = std::max(top, k.density);
  for (auto& k : candidates) k.tier = k.density >= top * 2 / 3 ? 3 : (k.density >= top / 3 ? 2 : 1);

  std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
    if (x.density != y.density) return x.density > y.density;
    if (x.word != y.word) return x.word < y.word;
    return x.block < y.block;
  });

  std::vector<KeywordLabel> placed;
  for (auto& k : candidates) {
    Rect box = detail::label_box(k.word, k.tier, k.anchor);
    const double w = box.width / 2, h = box.height;
    const std::array<Point, 9> offsets{{{0, 0}, {0, -h}, {0, h}, {-w, 0}, {w, 0}, {-w, -h}, {w, -h}, {-w, h}, {w, h}}};
    for (int attempt = 0; attempt <= config.nudge_attempts && attempt < static_cast<int>(offsets.size()); ++attempt) {
      Point at{k.anchor.x + offsets[attempt].x, k.anchor.y + offsets[attempt].y};
      Rect trial = detail::label_box(k.word, k.tier, at);
      bool clear = std::none_of(placed.begin(), placed.end(), [&](const auto& p) { return p.box.overlaps(trial); });
      if (clear) {
        k.position = at;
        k.box = trial;
        placed.push_back(k);
        break;
      }
    }
  }
  std::sort(placed.begin(), placed.end(), [](const auto& x, const auto& y) {
    if (x.block != y.block) return x.block < y.block;
    if (x.density != y.density) return x.density > y.density;
    return x.word < y.word;
  });
  return placed;
}

}  // namespace sarfmap
