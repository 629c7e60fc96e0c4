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

// Hand-written reverse-mode gradients for every layer's forward map and a
// central-difference checker for them.
//
// All forward maps are multilinear in the rows they touch, so each backward
// is a tensor_product_vjp (or its TT analogue) against the upstream vector
// zero-padded back to the untruncated length. Rows referenced more than once
// by the same word receive the sum of their positional contributions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tenbed/embedding.hpp"
#include "tenbed/tensor_core.hpp"

namespace tenbed {

struct GradSlot {
  std::string param_name;
  DenseMat grad;
};

inline std::vector<GradSlot> zero_grads(const EmbeddingLayer& layer) {
  std::vector<GradSlot> slots;
  slots.reserve(layer.params().size());
  for (const auto& p : layer.params()) slots.push_back({p.name, DenseMat(p.value.rows(), p.value.cols())});
  return slots;
}

namespace detail {

inline void add_to(std::span<Scalar> dst, std::span<const Scalar> src, Scalar scale = 1.0) {
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] += scale * src[i];
}

inline void backward_multilinear_groups(const std::vector<std::vector<std::span<const Scalar>>>& groups,
                                        std::span<const Scalar> padded,
                                        const std::function<std::span<Scalar>(std::size_t, std::size_t)>& slot_of) {
  for (std::size_t k = 0; k < groups.size(); ++k) {
    for (std::size_t p = 0; p < groups[k].size(); ++p) {
      DenseVec g = tensor_product_vjp(padded, groups[k], p);
      add_to(slot_of(k, p), g.span());
    }
  }
}

inline void backward_tensor_train(const EmbeddingLayer& layer, std::size_t word_id, std::span<const Scalar> U,
                                  std::vector<GradSlot>& slots) {
  const auto& c = layer.config();
  const std::size_t n = c.order, r = c.rank;
  const auto digits = layer.word_digits(word_id);
  const auto states = layer.tt_states(word_id);  // states[k]: prefix through core k

  // rights[k]: cores k..n-1 contracted, r x (d_k*...*d_{n-1}) laid out [rank][suffix].
  std::vector<DenseVec> rights(n);
  {
    const std::size_t dl = c.dim_shape[n - 1];
    const auto core = layer.block(n - 1).row(digits[n - 1]);
    DenseVec R(r * dl);
    for (std::size_t b = 0; b < r; ++b) {
      for (std::size_t a = 0; a < dl; ++a) R[b * dl + a] = core[a * r + b];
    }
    rights[n - 1] = std::move(R);
  }
  std::size_t suffix = c.dim_shape[n - 1];
  for (std::size_t k = n - 1; k-- > 1;) {
    const std::size_t dk = c.dim_shape[k];
    const auto core = layer.block(k).row(digits[k]);
    const DenseVec& next = rights[k + 1];
    DenseVec R(r * dk * suffix);
    for (std::size_t b = 0; b < r; ++b) {
      for (std::size_t a = 0; a < dk; ++a) {
        Scalar* dst = R.data() + b * dk * suffix + a * suffix;
        for (std::size_t b2 = 0; b2 < r; ++b2) {
          const Scalar g = core[(a * r + b) * r + b2];
          if (g == 0.0) continue;
          const Scalar* src = next.data() + b2 * suffix;
          for (std::size_t s = 0; s < suffix; ++s) dst[s] += g * src[s];
        }
      }
    }
    rights[k] = std::move(R);
    suffix *= dk;
  }

  std::size_t prefix = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t dk = c.dim_shape[k];
    std::size_t after = 1;
    for (std::size_t j = k + 1; j < n; ++j) after *= c.dim_shape[j];
    auto g = slots[k].grad.row(digits[k]);

    if (k == 0) {
      const DenseVec& R = rights[1];
      for (std::size_t a = 0; a < dk; ++a) {
        for (std::size_t b = 0; b < r; ++b) {
          Scalar acc = 0.0;
          for (std::size_t s = 0; s < after; ++s) acc += U[a * after + s] * R[b * after + s];
          g[a * r + b] += acc;
        }
      }
    } else if (k + 1 == n) {
      const DenseVec& L = states[k - 1];
      for (std::size_t a = 0; a < dk; ++a) {
        for (std::size_t b = 0; b < r; ++b) {
          Scalar acc = 0.0;
          for (std::size_t p = 0; p < prefix; ++p) acc += U[p * dk + a] * L[p * r + b];
          g[a * r + b] += acc;
        }
      }
    } else {
      const DenseVec& L = states[k - 1];
      const DenseVec& R = rights[k + 1];
      std::vector<Scalar> w(r);
      for (std::size_t p = 0; p < prefix; ++p) {
        for (std::size_t a = 0; a < dk; ++a) {
          const Scalar* u = U.data() + (p * dk + a) * after;
          for (std::size_t b2 = 0; b2 < r; ++b2) {
            Scalar acc = 0.0;
            for (std::size_t s = 0; s < after; ++s) acc += u[s] * R[b2 * after + s];
            w[b2] = acc;
          }
          for (std::size_t b = 0; b < r; ++b) {
            const Scalar l = L[p * r + b];
            Scalar* dst = g.data() + (a * r + b) * r;
            for (std::size_t b2 = 0; b2 < r; ++b2) dst[b2] += l * w[b2];
          }
        }
      }
    }
    prefix *= dk;
  }
}

}  // namespace detail

// Adds d(upstream . forward(word_id)) / d(params) into `slots`.
inline void accumulate_backward(const EmbeddingLayer& layer, std::size_t word_id, std::span<const Scalar> upstream,
                                std::vector<GradSlot>& slots) {
  layer.check_word(word_id);
  const auto& c = layer.config();
  if (upstream.size() != c.embed_dim) {
    throw InvalidArgument("backward: upstream length " + std::to_string(upstream.size()) + " != d " +
                          std::to_string(c.embed_dim));
  }
  if (slots.size() != layer.params().size()) throw InvalidArgument("backward: slot count mismatch");

  // Adjoint of truncate_to: zero-pad back to the full product length.
  DenseVec padded(layer.full_length());
  std::copy(upstream.begin(), upstream.end(), padded.begin());

  switch (c.method) {
    case Method::kOriginal:
      detail::add_to(slots[0].grad.row(word_id), upstream);
      break;
    case Method::kMatrixFactor: {
      const DenseMat& A = layer.block(0);
      const DenseMat& B = layer.block(1);
      auto gA = slots[0].grad.row(word_id);
      for (std::size_t k = 0; k < c.rank; ++k) {
        gA[k] += dot(B.row(k), upstream);
        detail::add_to(slots[1].grad.row(k), upstream, A(word_id, k));
      }
      break;
    }
    case Method::kWord2ket: {
      const std::size_t q = c.resolved_subdim();
      auto row = slots[0].grad.row(word_id);
      detail::backward_multilinear_groups(layer.word2ket_groups(word_id), padded.span(),
                                          [&](std::size_t k, std::size_t p) {
                                            return row.subspan((k * c.order + p) * q, q);
                                          });
      break;
    }
    case Method::kMorphTE:
    case Method::kWord2ketRshare: {
      const auto ids = layer.index()->row(word_id);
      detail::backward_multilinear_groups(layer.morph_groups(word_id), padded.span(),
                                          [&](std::size_t i, std::size_t p) {
                                            return slots[i].grad.row(static_cast<std::size_t>(ids[p]));
                                          });
      break;
    }
    case Method::kWord2ketXS: {
      const auto digits = layer.word_digits(word_id);
      for (std::size_t k = 0; k < c.rank; ++k) {
        const auto factors = layer.word2ketxs_factors(digits, k);
        for (std::size_t j = 0; j < c.order; ++j) {
          const std::size_t dj = c.dim_shape[j];
          DenseVec g = tensor_product_vjp(padded.span(), factors, j);
          detail::add_to(slots[j].grad.row(digits[j]).subspan(k * dj, dj), g.span());
        }
      }
      break;
    }
    case Method::kTensorTrain:
      detail::backward_tensor_train(layer, word_id, padded.span(), slots);
      break;
    case Method::kMorphSum:
      detail::add_to(slots[0].grad.row(word_id), upstream);
      for (std::size_t m : layer.morphsum_rows(word_id)) detail::add_to(slots[1].grad.row(m), upstream);
      break;
    case Method::kMorphLSTM:
      throw ConfigError("backward: unsupported method");
  }
}

inline std::vector<GradSlot> backward(const EmbeddingLayer& layer, std::size_t word_id,
                                      std::span<const Scalar> upstream) {
  auto slots = zero_grads(layer);
  accumulate_backward(layer, word_id, upstream, slots);
  return slots;
}

using BackwardFn =
    std::function<std::vector<GradSlot>(const EmbeddingLayer&, std::size_t, std::span<const Scalar>)>;

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  std::size_t params_checked = 0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_numeric = 0.0;
  double worst_analytic = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

// Relative error used by the checker; magnitudes below `floor` are compared
// absolutely.
inline double relative_error(double numeric, double analytic, double floor = 1e-10) {
  const double diff = std::abs(numeric - analytic);
  if (diff == 0.0) return 0.0;
  return diff / std::max({std::abs(numeric), std::abs(analytic), floor});
}

// Central differences over every scalar of every row touched by `word_id`,
// projected on a random upstream u and compared with backward(u). The step
// actually taken, (theta + eps) - (theta - eps), is used as the divisor, and
// each output coordinate's difference quotient is formed before the
// projection so that linear maps check exactly.
inline FiniteDiffReport finite_diff_check(const EmbeddingLayer& layer, std::size_t word_id, double epsilon,
                                          double tolerance, std::uint64_t seed = 0,
                                          const BackwardFn& backward_fn = backward) {
  if (!(epsilon > 0.0)) throw InvalidArgument("finite_diff_check: epsilon must be positive");
  layer.check_word(word_id);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseVec upstream(layer.dim());
  for (auto& x : upstream) x = dist(rng);

  const auto analytic = backward_fn(layer, word_id, upstream.span());

  FiniteDiffReport report;
  report.tolerance = tolerance;
  EmbeddingLayer probe = layer;
  for (const RowRef& ref : layer.touched_rows(word_id)) {
    auto row = probe.mutable_block(ref.block).row(ref.row);
    for (std::size_t col = 0; col < row.size(); ++col) {
      const Scalar saved = row[col];
      row[col] = saved + epsilon;
      const Scalar up = row[col];
      const DenseVec f_plus = probe.forward(word_id);
      row[col] = saved - epsilon;
      const Scalar down = row[col];
      const DenseVec f_minus = probe.forward(word_id);
      row[col] = saved;

      const Scalar step = up - down;
      Scalar numeric = 0.0;
      for (std::size_t i = 0; i < f_plus.size(); ++i) numeric += upstream[i] * ((f_plus[i] - f_minus[i]) / step);
      const Scalar ana = analytic.at(ref.block).grad(ref.row, col);
      const double err = relative_error(numeric, ana);
      ++report.params_checked;
      if (err > report.max_rel_error || report.worst_param.empty()) {
        report.max_rel_error = err;
        report.worst_param = layer.params()[ref.block].name;
        report.worst_index = ref.row * row.size() + col;
        report.worst_numeric = numeric;
        report.worst_analytic = ana;
      }
    }
  }
  report.passed = report.max_rel_error < tolerance;
  return report;
}

}  // namespace tenbed
