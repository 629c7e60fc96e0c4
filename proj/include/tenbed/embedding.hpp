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

// Embedding layers: one construct/forward interface over the eight methods.
//
// Parameter blocks per method (rows x cols, row-major):
//
//   original         table      |V| x d
//   matrix_factor    A          |V| x r,   B  r x d
//   tensor_train     core_k     v_k x (d_k*r) for k = 0, n-1
//                               v_k x (d_k*r*r) otherwise
//   word2ket         vectors    |V| x (r*n*q), row laid out [rank][slot][q]
//   word2ketxs       factor_j   v_j x (r*d_j), row laid out [rank][d_j]
//   morphte          f_i        |M| x q, i = 0..r-1
//   word2ket_rshare  f_i        |M| x q, i = 0..r-1 (random index)
//   morphsum         surface    |V| x d,   morphemes  |M| x d
//
// Word ids are split into mode digits most-significant first over Δ|V|.
// A TT core row holds slice [a][left][right] (middle cores) or [a][rank]
// (boundary cores); contraction runs left to right.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tenbed/errors.hpp"
#include "tenbed/layer_config.hpp"
#include "tenbed/morphology.hpp"
#include "tenbed/tensor_core.hpp"

namespace tenbed {

struct ParamBlock {
  std::string name;
  DenseMat value;

  friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

struct BlockShape {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

// Shapes of the trainable blocks for a validated config whose
// morpheme_vocab_size is already resolved.
inline std::vector<BlockShape> param_shapes(const LayerConfig& c) {
  const std::size_t V = c.vocab_size, d = c.embed_dim, r = c.rank, n = c.order;
  std::vector<BlockShape> shapes;
  switch (c.method) {
    case Method::kOriginal:
      shapes.push_back({"table", V, d});
      break;
    case Method::kMatrixFactor:
      shapes.push_back({"A", V, r});
      shapes.push_back({"B", r, d});
      break;
    case Method::kTensorTrain:
      for (std::size_t k = 0; k < n; ++k) {
        const bool boundary = (k == 0 || k + 1 == n);
        shapes.push_back({"core_" + std::to_string(k), c.vocab_shape[k],
                          c.dim_shape[k] * (boundary ? r : r * r)});
      }
      break;
    case Method::kWord2ket:
      shapes.push_back({"vectors", V, r * n * c.resolved_subdim()});
      break;
    case Method::kWord2ketXS:
      for (std::size_t j = 0; j < n; ++j) {
        shapes.push_back({"factor_" + std::to_string(j), c.vocab_shape[j], r * c.dim_shape[j]});
      }
      break;
    case Method::kMorphTE:
    case Method::kWord2ketRshare:
      for (std::size_t i = 0; i < r; ++i) {
        shapes.push_back({"f_" + std::to_string(i), c.morpheme_vocab_size, c.resolved_subdim()});
      }
      break;
    case Method::kMorphSum:
      shapes.push_back({"surface", V, d});
      shapes.push_back({"morphemes", c.morpheme_vocab_size, d});
      break;
    case Method::kMorphLSTM:
      throw ConfigError("morphlstm is audit-only and has no layer");
  }
  return shapes;
}

// Uniform random |V| x n index for the random-sharing ablation. No PAD.
inline IndexMatrix build_rshare_index(std::size_t vocab_size, std::size_t morpheme_vocab_size, std::size_t n,
                                      std::uint64_t seed) {
  if (vocab_size == 0 || morpheme_vocab_size == 0 || n == 0) {
    throw InvalidArgument("build_rshare_index: sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> cell(0, static_cast<std::int64_t>(morpheme_vocab_size) - 1);
  std::vector<std::int64_t> ids(vocab_size * n);
  for (auto& id : ids) id = cell(rng);
  return IndexMatrix(n, std::vector<std::string>(vocab_size), std::move(ids));
}

// Row of one parameter block referenced by a word's forward pass.
struct RowRef {
  std::size_t block = 0;
  std::size_t row = 0;

  friend bool operator==(const RowRef&, const RowRef&) = default;
  friend auto operator<=>(const RowRef&, const RowRef&) = default;
};

class EmbeddingLayer {
 public:
  // Assembles a layer from existing blocks (checkpoint loading). Shapes are
  // checked against the config.
  static EmbeddingLayer from_parts(LayerConfig config, std::vector<ParamBlock> params,
                                   std::optional<IndexMatrix> index) {
    validate(config);
    const auto shapes = param_shapes(config);
    if (shapes.size() != params.size()) throw ConfigError("parameter block count does not match config");
    for (std::size_t b = 0; b < shapes.size(); ++b) {
      if (params[b].name != shapes[b].name || params[b].value.rows() != shapes[b].rows ||
          params[b].value.cols() != shapes[b].cols) {
        throw ConfigError("parameter block '" + params[b].name + "' does not match expected '" +
                          shapes[b].name + "' " + std::to_string(shapes[b].rows) + "x" +
                          std::to_string(shapes[b].cols));
      }
    }
    if (uses_index(config.method)) {
      if (!index) throw ConfigError(std::string(method_name(config.method)) + " requires an index matrix");
      check_index(config, *index);
    } else {
      index.reset();
    }
    EmbeddingLayer layer;
    layer.config_ = std::move(config);
    layer.params_ = std::move(params);
    layer.index_ = std::move(index);
    return layer;
  }

  const LayerConfig& config() const noexcept { return config_; }
  std::size_t vocab_size() const noexcept { return config_.vocab_size; }
  std::size_t dim() const noexcept { return config_.embed_dim; }

  const std::vector<ParamBlock>& params() const noexcept { return params_; }
  std::vector<ParamBlock>& mutable_params() noexcept { return params_; }
  const DenseMat& block(std::size_t b) const { return params_.at(b).value; }
  DenseMat& mutable_block(std::size_t b) { return params_.at(b).value; }

  const std::optional<IndexMatrix>& index() const noexcept { return index_; }

  std::size_t trainable_param_count() const {
    std::size_t total = 0;
    for (const auto& p : params_) total += p.value.size();
    return total;
  }

  void check_word(std::size_t word_id) const {
    if (word_id >= config_.vocab_size) {
      throw LookupError("word id " + std::to_string(word_id) + " out of range [0, " +
                        std::to_string(config_.vocab_size) + ")");
    }
  }

  // Mode digits of a word id over Δ|V| (TensorTrain, Word2ketXS).
  std::vector<std::size_t> word_digits(std::size_t word_id) const {
    return mixed_radix_digits(word_id, config_.vocab_shape);
  }

  // Length of the untruncated product (q^n, or prod Δd).
  std::size_t full_length() const {
    switch (config_.method) {
      case Method::kWord2ket:
      case Method::kMorphTE:
      case Method::kWord2ketRshare:
        return int_pow(config_.resolved_subdim(), config_.order);
      case Method::kTensorTrain:
      case Method::kWord2ketXS:
        return shape_product(config_.dim_shape);
      default:
        return config_.embed_dim;
    }
  }

  DenseVec forward(std::size_t word_id) const {
    check_word(word_id);
    const std::size_t d = config_.embed_dim;
    switch (config_.method) {
      case Method::kOriginal:
        return DenseVec(block(0).row(word_id));
      case Method::kMatrixFactor: {
        const DenseMat& A = block(0);
        const DenseMat& B = block(1);
        DenseVec out(d);
        for (std::size_t k = 0; k < config_.rank; ++k) axpy(A(word_id, k), B.row(k), out.span());
        return out;
      }
      case Method::kWord2ket:
        return truncate_to(entangled_sum(word2ket_groups(word_id)).span(), d);
      case Method::kMorphTE:
      case Method::kWord2ketRshare:
        return truncate_to(entangled_sum(morph_groups(word_id)).span(), d);
      case Method::kWord2ketXS:
        return truncate_to(word2ketxs_full(word_id).span(), d);
      case Method::kTensorTrain:
        return truncate_to(tt_states(word_id).back().span(), d);
      case Method::kMorphSum: {
        DenseVec out(block(0).row(word_id));
        for (std::size_t m : morphsum_rows(word_id)) axpy(1.0, block(1).row(m), out.span());
        return out;
      }
      case Method::kMorphLSTM:
        break;
    }
    throw ConfigError("forward: unsupported method");
  }

  std::vector<DenseVec> forward_batch(std::span<const std::size_t> word_ids) const {
    std::vector<DenseVec> out;
    out.reserve(word_ids.size());
    for (std::size_t w : word_ids) out.push_back(forward(w));
    return out;
  }

  // Every (block, row) the forward map of `word_id` reads, sorted, unique.
  std::vector<RowRef> touched_rows(std::size_t word_id) const {
    check_word(word_id);
    std::vector<RowRef> rows;
    switch (config_.method) {
      case Method::kOriginal:
      case Method::kWord2ket:
        rows.push_back({0, word_id});
        break;
      case Method::kMatrixFactor:
        rows.push_back({0, word_id});
        for (std::size_t k = 0; k < config_.rank; ++k) rows.push_back({1, k});
        break;
      case Method::kTensorTrain:
      case Method::kWord2ketXS: {
        const auto digits = word_digits(word_id);
        for (std::size_t k = 0; k < digits.size(); ++k) rows.push_back({k, digits[k]});
        break;
      }
      case Method::kMorphTE:
      case Method::kWord2ketRshare:
        for (std::size_t i = 0; i < config_.rank; ++i) {
          for (auto id : index_->row(word_id)) rows.push_back({i, static_cast<std::size_t>(id)});
        }
        break;
      case Method::kMorphSum:
        rows.push_back({0, word_id});
        for (std::size_t m : morphsum_rows(word_id)) rows.push_back({1, m});
        break;
      case Method::kMorphLSTM:
        break;
    }
    std::ranges::sort(rows);
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
  }

  // --- pieces shared with the backward pass -------------------------------

  // r groups of n views into the word's private Word2ket vectors.
  std::vector<std::vector<std::span<const Scalar>>> word2ket_groups(std::size_t word_id) const {
    const std::size_t q = config_.resolved_subdim();
    const auto row = block(0).row(word_id);
    std::vector<std::vector<std::span<const Scalar>>> groups(config_.rank);
    for (std::size_t k = 0; k < config_.rank; ++k) {
      for (std::size_t p = 0; p < config_.order; ++p) {
        groups[k].push_back(row.subspan((k * config_.order + p) * q, q));
      }
    }
    return groups;
  }

  // Rank term i uses rows f_i[I(j, 1..n)].
  std::vector<std::vector<std::span<const Scalar>>> morph_groups(std::size_t word_id) const {
    const auto ids = index_->row(word_id);
    std::vector<std::vector<std::span<const Scalar>>> groups(config_.rank);
    for (std::size_t i = 0; i < config_.rank; ++i) {
      for (auto id : ids) groups[i].push_back(block(i).row(static_cast<std::size_t>(id)));
    }
    return groups;
  }

  // Rank term k of Word2ketXS: row digit_j of factor_j, slice k.
  std::vector<std::span<const Scalar>> word2ketxs_factors(const std::vector<std::size_t>& digits,
                                                         std::size_t k) const {
    std::vector<std::span<const Scalar>> factors;
    for (std::size_t j = 0; j < config_.order; ++j) {
      const std::size_t dj = config_.dim_shape[j];
      factors.push_back(block(j).row(digits[j]).subspan(k * dj, dj));
    }
    return factors;
  }

  DenseVec word2ketxs_full(std::size_t word_id) const {
    const auto digits = word_digits(word_id);
    DenseVec out(full_length());
    for (std::size_t k = 0; k < config_.rank; ++k) {
      axpy(1.0, tensor_product_chain(word2ketxs_factors(digits, k)).span(), out.span());
    }
    return out;
  }

  // Left-to-right TT contraction. states[k] holds cores 0..k contracted:
  // (d_0*...*d_k) x r laid out [prefix][rank] for k < n-1; the last entry is
  // the full untruncated output of length prod Δd.
  std::vector<DenseVec> tt_states(std::size_t word_id) const {
    const auto digits = word_digits(word_id);
    const std::size_t n = config_.order, r = config_.rank;
    std::vector<DenseVec> states;
    states.reserve(n);
    states.emplace_back(block(0).row(digits[0]));
    std::size_t prefix = config_.dim_shape[0];
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t dk = config_.dim_shape[k];
      const auto core = block(k).row(digits[k]);
      const DenseVec& S = states.back();
      const bool last = (k + 1 == n);
      DenseVec next(prefix * dk * (last ? 1 : r));
      for (std::size_t p = 0; p < prefix; ++p) {
        for (std::size_t a = 0; a < dk; ++a) {
          if (last) {
            Scalar acc = 0.0;
            for (std::size_t b = 0; b < r; ++b) acc += S[p * r + b] * core[a * r + b];
            next[p * dk + a] = acc;
          } else {
            for (std::size_t b = 0; b < r; ++b) {
              const Scalar s = S[p * r + b];
              const Scalar* g = core.data() + (a * r + b) * r;
              Scalar* dst = next.data() + (p * dk + a) * r;
              for (std::size_t b2 = 0; b2 < r; ++b2) dst[b2] += s * g[b2];
            }
          }
        }
      }
      states.push_back(std::move(next));
      prefix *= dk;
    }
    return states;
  }

  // Morpheme rows added by MorphSum: the word's non-PAD slots, with repeats.
  std::vector<std::size_t> morphsum_rows(std::size_t word_id) const {
    std::vector<std::size_t> rows;
    const auto pad = index_->pad_id();
    for (auto id : index_->row(word_id)) {
      if (pad && id == *pad) continue;
      rows.push_back(static_cast<std::size_t>(id));
    }
    return rows;
  }

 private:
  static void check_index(const LayerConfig& c, const IndexMatrix& index) {
    if (index.rows() != c.vocab_size) {
      throw ConfigError("index matrix has " + std::to_string(index.rows()) + " rows, expected |V| = " +
                        std::to_string(c.vocab_size));
    }
    if (index.order() != c.order) {
      throw ConfigError("index matrix order " + std::to_string(index.order()) + " != config order " +
                        std::to_string(c.order));
    }
    for (auto id : index.ids()) {
      if (id < 0 || static_cast<std::size_t>(id) >= c.morpheme_vocab_size) {
        throw ConfigError("index matrix references morpheme id " + std::to_string(id) + " >= |M| = " +
                          std::to_string(c.morpheme_vocab_size));
      }
    }
  }

  LayerConfig config_;
  std::vector<ParamBlock> params_;
  std::optional<IndexMatrix> index_;
};

// Xavier-uniform initialisation of one block: U(-b, b) with
// b = sqrt(6 / (rows + cols)).
inline void xavier_uniform(DenseMat& m, std::mt19937_64& rng) {
  const Scalar bound = std::sqrt(6.0 / static_cast<Scalar>(m.rows() + m.cols()));
  std::uniform_real_distribution<Scalar> dist(-bound, bound);
  for (Scalar& x : m.flat()) x = dist(rng);
}

// Seed used for the synthetic Word2ket+Rshare index, derived from the layer seed.
inline std::uint64_t rshare_index_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

// Allocates and initialises a layer. MorphTE and MorphSum need the morpheme
// vocabulary and index; Word2ketRshare draws its own index unless one is given.
inline EmbeddingLayer build_layer(LayerConfig config, const MorphemeVocab* vocab = nullptr,
                                  const IndexMatrix* index = nullptr) {
  if (config.method == Method::kMorphLSTM) throw ConfigError("morphlstm is audit-only and has no layer");
  config = with_default_shapes(std::move(config));

  std::optional<IndexMatrix> layer_index;
  if (needs_morphology(config.method)) {
    if (vocab == nullptr || index == nullptr) {
      throw ConfigError(std::string(method_name(config.method)) + " requires a morpheme vocabulary and index");
    }
    config.morpheme_vocab_size = vocab->size();
    layer_index = *index;
  } else if (config.method == Method::kWord2ketRshare) {
    if (config.morpheme_vocab_size == 0 && vocab != nullptr) config.morpheme_vocab_size = vocab->size();
    if (config.morpheme_vocab_size == 0) throw ConfigError("word2ket_rshare requires morpheme_vocab_size");
    layer_index = index ? *index
                        : build_rshare_index(config.vocab_size, config.morpheme_vocab_size, config.order,
                                             rshare_index_seed(config.seed));
  } else {
    config.morpheme_vocab_size = vocab ? vocab->size() : config.morpheme_vocab_size;
  }
  validate(config);

  std::mt19937_64 rng(config.seed);
  std::vector<ParamBlock> params;
  for (const auto& shape : param_shapes(config)) {
    DenseMat m(shape.rows, shape.cols);
    xavier_uniform(m, rng);
    params.push_back({shape.name, std::move(m)});
  }
  return EmbeddingLayer::from_parts(std::move(config), std::move(params), std::move(layer_index));
}

}  // namespace tenbed
