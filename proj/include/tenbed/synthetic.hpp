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

// Synthetic morphology for desk-scale experiments: a lexicon of
// root+suffix words and labelled "shares a morpheme" word pairs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "tenbed/errors.hpp"
#include "tenbed/morphology.hpp"
#include "tenbed/train.hpp"

namespace tenbed {

struct LexiconSpec {
  std::size_t words = 500;
  std::size_t roots = 40;
  std::size_t suffixes = 39;
  std::size_t max_suffixes = 2;
};

// Words are a root ("R<i>") followed by up to `max_suffixes` distinct
// suffixes ("s<j>"); the word string is the concatenation, so the
// segmentation is recoverable from it.
inline std::vector<Segmentation> synthetic_lexicon(const LexiconSpec& spec, std::uint64_t seed) {
  if (spec.words == 0 || spec.roots == 0) throw InvalidArgument("synthetic_lexicon: empty spec");
  if (spec.max_suffixes > spec.suffixes) throw InvalidArgument("synthetic_lexicon: max_suffixes > suffixes");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> root_pick(0, spec.roots - 1);
  std::uniform_int_distribution<std::size_t> count_pick(0, spec.max_suffixes);

  std::vector<Segmentation> out;
  std::unordered_set<std::string> seen;
  std::size_t attempts = 0;
  while (out.size() < spec.words) {
    if (++attempts > spec.words * 1000) throw InvalidArgument("synthetic_lexicon: cannot draw enough distinct words");
    Segmentation s;
    s.morphemes.push_back("R" + std::to_string(root_pick(rng)));
    const std::size_t k = spec.suffixes ? count_pick(rng) : 0;
    std::vector<std::size_t> pool(spec.suffixes);
    for (std::size_t j = 0; j < pool.size(); ++j) pool[j] = j;
    for (std::size_t j = 0; j < k; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, pool.size() - 1);
      std::swap(pool[j], pool[pick(rng)]);
      s.morphemes.push_back("s" + std::to_string(pool[j]));
    }
    for (const auto& m : s.morphemes) s.word += m;
    if (seen.insert(s.word).second) out.push_back(std::move(s));
  }
  return out;
}

// True when rows a and b of the index share any non-PAD morpheme id.
inline bool shares_morpheme(const IndexMatrix& index, std::size_t a, std::size_t b) {
  const auto pad = index.pad_id();
  for (auto x : index.row(a)) {
    if (pad && x == *pad) continue;
    for (auto y : index.row(b)) {
      if (x == y) return true;
    }
  }
  return false;
}

struct SimilaritySplit {
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> heldout;
  std::vector<std::size_t> heldout_words;
};

// Balanced labelled pairs. A fraction of the words is held out: training
// pairs use only the remaining words, every held-out pair contains at least
// one held-out word.
inline SimilaritySplit shares_morpheme_pairs(const IndexMatrix& index, std::size_t train_pairs,
                                             std::size_t heldout_pairs, double heldout_fraction,
                                             std::uint64_t seed) {
  const std::size_t V = index.rows();
  if (V < 4) throw InvalidArgument("shares_morpheme_pairs: need at least 4 words");
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> words(V);
  for (std::size_t i = 0; i < V; ++i) words[i] = i;
  std::shuffle(words.begin(), words.end(), rng);
  const std::size_t n_held = std::clamp<std::size_t>(static_cast<std::size_t>(heldout_fraction * V), 1, V - 2);
  SimilaritySplit split;
  split.heldout_words.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n_held));
  std::vector<std::size_t> train_words(words.begin() + static_cast<std::ptrdiff_t>(n_held), words.end());
  std::sort(split.heldout_words.begin(), split.heldout_words.end());
  std::sort(train_words.begin(), train_words.end());

  // morpheme id -> words containing it
  std::map<std::int64_t, std::vector<std::size_t>> holders;
  const auto pad = index.pad_id();
  for (std::size_t w = 0; w < V; ++w) {
    std::set<std::int64_t> ids(index.row(w).begin(), index.row(w).end());
    for (auto id : ids) {
      if (!(pad && id == *pad)) holders[id].push_back(w);
    }
  }
  std::vector<bool> held(V, false);
  for (auto w : split.heldout_words) held[w] = true;

  auto draw = [&](const std::vector<std::size_t>& anchors, bool heldout, std::size_t count) {
    std::vector<LabeledPair> pairs;
    std::uniform_int_distribution<std::size_t> anchor_pick(0, anchors.size() - 1);
    std::uniform_int_distribution<std::size_t> any_pick(0, V - 1);
    std::size_t attempts = 0;
    while (pairs.size() < count) {
      if (++attempts > count * 10000) throw InvalidArgument("shares_morpheme_pairs: cannot draw pairs");
      const std::size_t a = anchors[anchor_pick(rng)];
      const int want = static_cast<int>(pairs.size() % 2 == 0);
      std::size_t b = 0;
      if (want) {
        const auto ids = index.row(a);
        std::uniform_int_distribution<std::size_t> slot(0, ids.size() - 1);
        const auto id = ids[slot(rng)];
        if (pad && id == *pad) continue;
        const auto& cands = holders[id];
        std::uniform_int_distribution<std::size_t> c(0, cands.size() - 1);
        b = cands[c(rng)];
      } else {
        b = any_pick(rng);
      }
      if (b == a) continue;
      if (heldout ? false : held[b]) continue;
      if (shares_morpheme(index, a, b) != static_cast<bool>(want)) continue;
      pairs.push_back({a, b, want});
    }
    return pairs;
  };
  split.train = draw(train_words, false, train_pairs);
  split.heldout = draw(split.heldout_words, true, heldout_pairs);
  return split;
}

}  // namespace tenbed
