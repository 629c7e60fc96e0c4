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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tenbed/errors.hpp"

namespace tenbed {

enum class Method {
  kOriginal,
  kMatrixFactor,
  kTensorTrain,
  kWord2ket,
  kWord2ketXS,
  kMorphTE,
  kMorphSum,
  kWord2ketRshare,
  // Parameter auditing only; there is no MorphLSTM layer.
  kMorphLSTM,
};

// The eight methods that can be built into an EmbeddingLayer.
inline constexpr std::array<Method, 8> kBuildableMethods = {
    Method::kOriginal, Method::kMatrixFactor, Method::kTensorTrain,   Method::kWord2ket,
    Method::kWord2ketXS, Method::kMorphTE,    Method::kMorphSum,      Method::kWord2ketRshare,
};

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kOriginal: return "original";
    case Method::kMatrixFactor: return "matrix_factor";
    case Method::kTensorTrain: return "tensor_train";
    case Method::kWord2ket: return "word2ket";
    case Method::kWord2ketXS: return "word2ketxs";
    case Method::kMorphTE: return "morphte";
    case Method::kMorphSum: return "morphsum";
    case Method::kWord2ketRshare: return "word2ket_rshare";
    case Method::kMorphLSTM: return "morphlstm";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::kOriginal, Method::kMatrixFactor, Method::kTensorTrain, Method::kWord2ket,
                   Method::kWord2ketXS, Method::kMorphTE, Method::kMorphSum, Method::kWord2ketRshare,
                   Method::kMorphLSTM}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

// Methods whose rows are addressed through an IndexMatrix.
inline bool uses_index(Method m) {
  return m == Method::kMorphTE || m == Method::kMorphSum || m == Method::kWord2ketRshare;
}

// Methods that need a real morpheme segmentation (not a synthetic index).
inline bool needs_morphology(Method m) { return m == Method::kMorphTE || m == Method::kMorphSum; }

inline bool uses_mode_shapes(Method m) { return m == Method::kTensorTrain || m == Method::kWord2ketXS; }

inline bool uses_subdim(Method m) {
  return m == Method::kWord2ket || m == Method::kMorphTE || m == Method::kWord2ketRshare;
}

// Smallest q with q^n >= d.
inline std::size_t smallest_subdim(std::size_t d, std::size_t n) {
  if (d == 0 || n == 0) throw ConfigError("smallest_subdim: d and n must be positive");
  std::size_t q = 1;
  for (;; ++q) {
    std::size_t p = 1;
    for (std::size_t i = 0; i < n && p < d; ++i) p *= q;
    if (p >= d) return q;
  }
}

inline std::size_t int_pow(std::size_t base, std::size_t exp) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < exp; ++i) p *= base;
  return p;
}

inline std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t p = 1;
  for (auto s : shape) p *= s;
  return p;
}

// n factors of `total` as equal as possible with product >= total; used
// when a TT / Word2ketXS config leaves the mode shapes unspecified.
inline std::vector<std::size_t> balanced_shape(std::size_t total, std::size_t n) {
  std::size_t base = smallest_subdim(total, n);
  std::vector<std::size_t> shape(n, base);
  // Shrink trailing factors while the product still covers `total`.
  for (std::size_t i = n; i-- > 0;) {
    while (shape[i] > 1) {
      shape[i] -= 1;
      if (shape_product(shape) < total) {
        shape[i] += 1;
        break;
      }
    }
  }
  return shape;
}

struct LayerConfig {
  Method method = Method::kOriginal;
  std::size_t vocab_size = 0;  // |V|
  std::size_t embed_dim = 0;   // d
  std::size_t order = 1;       // n
  std::size_t rank = 1;        // r
  std::size_t subdim = 0;      // q; 0 selects the smallest q with q^n >= d
  std::vector<std::size_t> vocab_shape;  // Δ|V| (TensorTrain, Word2ketXS)
  std::vector<std::size_t> dim_shape;    // Δd   (TensorTrain, Word2ketXS)
  std::size_t morpheme_vocab_size = 0;   // |M|; 0 means "take it from the vocabulary"
  std::uint64_t seed = 0;

  std::size_t resolved_subdim() const { return subdim ? subdim : smallest_subdim(embed_dim, order); }

  friend bool operator==(const LayerConfig&, const LayerConfig&) = default;
};

// Throws ConfigError when the configuration cannot describe a layer.
inline void validate(const LayerConfig& c) {
  auto fail = [&](const std::string& why) {
    throw ConfigError(std::string(method_name(c.method)) + ": " + why);
  };
  if (c.vocab_size == 0) fail("vocab_size must be positive");
  if (c.embed_dim == 0) fail("embed_dim must be positive");
  if (c.rank == 0) fail("rank must be >= 1");
  if (c.order == 0) fail("order must be >= 1");
  if (uses_subdim(c.method)) {
    const std::size_t q = c.resolved_subdim();
    if (int_pow(q, c.order) < c.embed_dim) {
      fail("q^n = " + std::to_string(int_pow(q, c.order)) + " < d = " + std::to_string(c.embed_dim));
    }
  }
  if (uses_mode_shapes(c.method)) {
    if (c.vocab_shape.size() != c.order || c.dim_shape.size() != c.order) {
      fail("vocab_shape and dim_shape must each have `order` entries");
    }
    if (c.method == Method::kTensorTrain && c.order < 2) fail("tensor train needs order >= 2");
    for (auto s : c.vocab_shape) if (s == 0) fail("vocab_shape entries must be positive");
    for (auto s : c.dim_shape) if (s == 0) fail("dim_shape entries must be positive");
    if (shape_product(c.vocab_shape) < c.vocab_size) fail("prod(vocab_shape) < |V|");
    if (shape_product(c.dim_shape) < c.embed_dim) fail("prod(dim_shape) < d");
  }
}

// Fills unspecified mode shapes with balanced factorizations.
inline LayerConfig with_default_shapes(LayerConfig c) {
  if (uses_mode_shapes(c.method)) {
    if (c.vocab_shape.empty()) c.vocab_shape = balanced_shape(c.vocab_size, c.order);
    if (c.dim_shape.empty()) c.dim_shape = balanced_shape(c.embed_dim, c.order);
  }
  return c;
}

}  // namespace tenbed
