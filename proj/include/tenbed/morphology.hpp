/* Copyright 2026 The tenbed Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

// Morpheme vocabularies and the |V| x n index matrix.
//
// Segmentation files are UTF-8 TSV: `word<TAB>m1 m2 ... ml`, one word per
// line, `#` lines and blank lines ignored.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tenbed/errors.hpp"

namespace tenbed {

// Sentinel used for padded slots. Reserved: it may not appear as a morpheme
// in an input file.
inline constexpr std::string_view kPadMorpheme = "<pad>";

struct Segmentation {
  std::string word;
  std::vector<std::string> morphemes;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

class MorphemeVocab {
 public:
  // Adds `morpheme` if unseen and returns its id.
  std::int64_t intern(const std::string& morpheme) {
    auto [it, inserted] = id_of_.try_emplace(morpheme, static_cast<std::int64_t>(morphemes_.size()));
    if (inserted) morphemes_.push_back(morpheme);
    return it->second;
  }

  // Reserves the PAD id. Called once, after all real morphemes are interned.
  std::int64_t add_pad() {
    if (pad_id_) return *pad_id_;
    pad_id_ = static_cast<std::int64_t>(morphemes_.size());
    morphemes_.emplace_back(kPadMorpheme);
    return *pad_id_;
  }

  std::int64_t id(const std::string& morpheme) const {
    if (morpheme == kPadMorpheme && pad_id_) return *pad_id_;
    auto it = id_of_.find(morpheme);
    if (it == id_of_.end()) throw LookupError("unknown morpheme '" + morpheme + "'");
    return it->second;
  }

  bool contains(const std::string& morpheme) const { return id_of_.contains(morpheme); }

  const std::string& morpheme(std::int64_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= morphemes_.size()) {
      throw LookupError("morpheme id " + std::to_string(id) + " out of range");
    }
    return morphemes_[static_cast<std::size_t>(id)];
  }

  std::optional<std::int64_t> pad_id() const noexcept { return pad_id_; }
  std::size_t size() const noexcept { return morphemes_.size(); }
  const std::vector<std::string>& morphemes() const noexcept { return morphemes_; }

 private:
  std::unordered_map<std::string, std::int64_t> id_of_;
  std::vector<std::string> morphemes_;
  std::optional<std::int64_t> pad_id_;
};

// Row j holds the n morpheme ids of word j.
class IndexMatrix {
 public:
  IndexMatrix() = default;
  IndexMatrix(std::size_t order, std::vector<std::string> words, std::vector<std::int64_t> ids,
              std::optional<std::int64_t> pad_id = std::nullopt)
      : order_(order), words_(std::move(words)), ids_(std::move(ids)), pad_id_(pad_id) {
    if (order_ == 0) throw InvalidArgument("IndexMatrix: order must be >= 1");
    if (ids_.size() != words_.size() * order_) {
      throw InvalidArgument("IndexMatrix: id count does not match rows * order");
    }
    for (std::size_t row = 0; row < words_.size(); ++row) {
      if (!words_[row].empty() && !row_of_.try_emplace(words_[row], row).second) {
        throw DuplicateWord(words_[row], row + 1);
      }
    }
  }

  std::size_t rows() const noexcept { return words_.size(); }
  std::size_t order() const noexcept { return order_; }
  std::optional<std::int64_t> pad_id() const noexcept { return pad_id_; }

  std::span<const std::int64_t> row(std::size_t r) const {
    if (r >= rows()) throw LookupError("index row " + std::to_string(r) + " out of range");
    return {ids_.data() + r * order_, order_};
  }

  std::size_t row_of(const std::string& word) const {
    auto it = row_of_.find(word);
    if (it == row_of_.end()) throw LookupError("unknown word '" + word + "'");
    return it->second;
  }

  const std::string& word(std::size_t r) const { return words_.at(r); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::int64_t>& ids() const noexcept { return ids_; }

  std::int64_t max_id() const {
    std::int64_t m = -1;
    for (auto id : ids_) m = std::max(m, id);
    return m;
  }

  friend bool operator==(const IndexMatrix& a, const IndexMatrix& b) {
    return a.order_ == b.order_ && a.words_ == b.words_ && a.ids_ == b.ids_ && a.pad_id_ == b.pad_id_;
  }

 private:
  std::size_t order_ = 1;
  std::vector<std::string> words_;
  std::vector<std::int64_t> ids_;
  std::optional<std::int64_t> pad_id_;
  std::unordered_map<std::string, std::size_t> row_of_;
};

namespace detail {

inline std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Byte offsets of unicode scalar value boundaries (including 0 and size).
// Malformed sequences advance one byte at a time.
inline std::vector<std::size_t> utf8_boundaries(std::string_view s) {
  std::vector<std::size_t> cuts{0};
  std::size_t i = 0;
  while (i < s.size()) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (lead >= 0xF0 && lead < 0xF8) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = lead < 0xF0 ? 3 : 1;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    if (i + len > s.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    i += len;
    cuts.push_back(i);
  }
  return cuts;
}

}  // namespace detail

inline std::vector<Segmentation> parse_segmentations(std::istream& in,
                                                     const std::string& source = "<stream>") {
  std::vector<Segmentation> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(source, line_no, "missing TAB separator");
    std::string word = line.substr(0, tab);
    if (word.empty()) throw ParseError(source, line_no, "empty word");
    if (word.find(' ') != std::string::npos) throw ParseError(source, line_no, "word contains a space");
    auto morphemes = detail::split_spaces(std::string_view(line).substr(tab + 1));
    if (morphemes.empty()) throw ParseError(source, line_no, "no morphemes for '" + word + "'");
    for (const auto& m : morphemes) {
      if (m.find('\t') != std::string::npos) throw ParseError(source, line_no, "stray TAB in morphemes");
      if (m == kPadMorpheme) throw ParseError(source, line_no, "reserved morpheme <pad>");
    }
    if (!seen.insert(word).second) throw DuplicateWord(word, line_no);
    out.push_back({std::move(word), std::move(morphemes)});
  }
  return out;
}

inline std::vector<Segmentation> load_segmentations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open segmentation file '" + path + "'");
  return parse_segmentations(in, path);
}

inline void write_segmentations(std::ostream& out, const std::vector<Segmentation>& segs) {
  for (const auto& s : segs) {
    out << s.word << '\t';
    for (std::size_t i = 0; i < s.morphemes.size(); ++i) out << (i ? " " : "") << s.morphemes[i];
    out << '\n';
  }
}

// Fixes a morpheme sequence to exactly n slots: shorter sequences are padded
// with kPadMorpheme, longer ones keep the first n-1 morphemes and merge the
// rest into one.
inline std::vector<std::string> truncate_pad(const std::vector<std::string>& morphemes, std::size_t n) {
  if (n == 0) throw InvalidArgument("truncate_pad: order must be >= 1");
  if (morphemes.empty()) throw InvalidArgument("truncate_pad: empty morpheme list");
  std::vector<std::string> out;
  out.reserve(n);
  if (morphemes.size() <= n) {
    out = morphemes;
    out.resize(n, std::string(kPadMorpheme));
    return out;
  }
  out.assign(morphemes.begin(), morphemes.begin() + static_cast<std::ptrdiff_t>(n - 1));
  std::string tail;
  for (std::size_t i = n - 1; i < morphemes.size(); ++i) tail += morphemes[i];
  out.push_back(std::move(tail));
  return out;
}

struct MorphologyTables {
  MorphemeVocab vocab;
  IndexMatrix index;
};

// Ids follow first appearance over (word order, slot order); PAD is
// appended last and always present.
inline MorphologyTables build_vocab_and_index(const std::vector<Segmentation>& segs, std::size_t n) {
  if (segs.empty()) throw InvalidArgument("build_vocab_and_index: no segmentations");
  if (n == 0) throw InvalidArgument("build_vocab_and_index: order must be >= 1");

  std::vector<std::vector<std::string>> fixed;
  fixed.reserve(segs.size());
  MorphemeVocab vocab;
  for (const auto& s : segs) {
    fixed.push_back(truncate_pad(s.morphemes, n));
    for (const auto& m : fixed.back()) {
      if (m != kPadMorpheme) vocab.intern(m);
    }
  }
  const std::int64_t pad = vocab.add_pad();

  std::vector<std::string> words;
  std::vector<std::int64_t> ids;
  words.reserve(segs.size());
  ids.reserve(segs.size() * n);
  for (std::size_t j = 0; j < segs.size(); ++j) {
    words.push_back(segs[j].word);
    for (const auto& m : fixed[j]) ids.push_back(m == kPadMorpheme ? pad : vocab.id(m));
  }
  return {std::move(vocab), IndexMatrix(n, std::move(words), std::move(ids), pad)};
}

// Control segmentation: words of at most three characters
// stay whole, longer words are cut at two distinct interior gaps drawn
// uniformly. Characters are unicode scalar values.
inline Segmentation random_seg(const std::string& word, std::uint64_t seed) {
  if (word.empty()) throw InvalidArgument("random_seg: empty word");
  const auto cuts = detail::utf8_boundaries(word);
  const std::size_t chars = cuts.size() - 1;
  if (chars <= 3) return {word, {word}};

  std::mt19937_64 rng(seed);
  // Interior gaps are 1..chars-1; pick two distinct ones.
  std::uniform_int_distribution<std::size_t> first_pick(1, chars - 1);
  std::uniform_int_distribution<std::size_t> second_pick(1, chars - 2);
  std::size_t g1 = first_pick(rng);
  std::size_t g2 = second_pick(rng);
  if (g2 >= g1) ++g2;
  if (g1 > g2) std::swap(g1, g2);

  const std::size_t b1 = cuts[g1];
  const std::size_t b2 = cuts[g2];
  return {word, {word.substr(0, b1), word.substr(b1, b2 - b1), word.substr(b2)}};
}

// One row of the segmentation statistics table. `cap` empty means no limit.
struct MorphemeStatsRow {
  std::optional<std::size_t> cap;
  std::size_t words_with[4] = {0, 0, 0, 0};  // N = 1..4
  std::size_t words_over4 = 0;               // N > 4
  std::size_t morpheme_vocab = 0;           // distinct non-PAD morphemes

  std::string label() const { return cap ? "mor_" + std::to_string(*cap) : std::string("mor_inf"); }
};

inline std::vector<MorphemeStatsRow> morpheme_stats(const std::vector<Segmentation>& segs,
                                                    const std::vector<std::optional<std::size_t>>& caps) {
  if (segs.empty()) throw InvalidArgument("morpheme_stats: no segmentations");
  std::vector<MorphemeStatsRow> rows;
  for (const auto& cap : caps) {
    MorphemeStatsRow row;
    row.cap = cap;
    std::unordered_set<std::string> distinct;
    for (const auto& s : segs) {
      std::vector<std::string> ms = cap ? truncate_pad(s.morphemes, *cap) : s.morphemes;
      std::size_t count = 0;
      for (auto& m : ms) {
        if (m == kPadMorpheme) continue;
        ++count;
        distinct.insert(std::move(m));
      }
      if (count > 4) {
        ++row.words_over4;
      } else {
        ++row.words_with[count - 1];
      }
    }
    row.morpheme_vocab = distinct.size();
    rows.push_back(row);
  }
  return rows;
}

inline void write_stats_tsv(std::ostream& out, const std::vector<MorphemeStatsRow>& rows) {
  out << "segmentation\tN=1\tN=2\tN=3\tN=4\tN>4\t|M|\n";
  for (const auto& r : rows) {
    out << r.label() << '\t' << r.words_with[0] << '\t' << r.words_with[1] << '\t' << r.words_with[2]
        << '\t' << r.words_with[3] << '\t' << r.words_over4 << '\t' << r.morpheme_vocab << '\n';
  }
}

inline void write_vocab_tsv(std::ostream& out, const MorphemeVocab& vocab) {
  out << "morpheme\tid\n";
  for (std::size_t id = 0; id < vocab.size(); ++id) out << vocab.morphemes()[id] << '\t' << id << '\n';
}

inline void write_index_tsv(std::ostream& out, const IndexMatrix& index) {
  for (std::size_t r = 0; r < index.rows(); ++r) {
    out << index.word(r) << '\t';
    auto ids = index.row(r);
    for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? " " : "") << ids[k];
    out << '\n';
  }
}

}  // namespace tenbed
