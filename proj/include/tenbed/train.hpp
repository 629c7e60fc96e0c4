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

// Small optimisation loop for the embedding layers: table reconstruction
// (MSE) and pairwise word similarity (cosine contrastive loss).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tenbed/embedding.hpp"
#include "tenbed/errors.hpp"
#include "tenbed/grad.hpp"
#include "tenbed/tensor_core.hpp"

namespace tenbed {

enum class TaskKind { kReconstructTable, kWordSimilarity };
enum class LossKind { kMse, kCosineContrastive };

struct LabeledPair {
  std::size_t a = 0;
  std::size_t b = 0;
  int label = 0;  // 1 similar, 0 dissimilar
};

struct TrainTask {
  TaskKind kind = TaskKind::kReconstructTable;
  LossKind loss = LossKind::kMse;
  DenseMat targets;                // reconstruct: |V| x d
  std::vector<LabeledPair> pairs;  // similarity

  static TrainTask reconstruct(DenseMat targets) {
    TrainTask t;
    t.kind = TaskKind::kReconstructTable;
    t.loss = LossKind::kMse;
    t.targets = std::move(targets);
    return t;
  }

  static TrainTask similarity(std::vector<LabeledPair> pairs) {
    TrainTask t;
    t.kind = TaskKind::kWordSimilarity;
    t.loss = LossKind::kCosineContrastive;
    t.pairs = std::move(pairs);
    return t;
  }
};

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<DenseMat> m;  // first moments, one per parameter block
  std::vector<DenseMat> v;  // second moments

  static OptimizerState sgd(double lr) {
    OptimizerState s;
    s.kind = OptimizerKind::kSgd;
    s.lr = lr;
    return s;
  }

  static OptimizerState adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8) {
    OptimizerState s;
    s.kind = OptimizerKind::kAdam;
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    return s;
  }
};

// One optimiser update of every block from the accumulated gradients.
inline void apply_update(EmbeddingLayer& layer, OptimizerState& opt, const std::vector<GradSlot>& grads) {
  auto& params = layer.mutable_params();
  if (grads.size() != params.size()) throw InvalidArgument("apply_update: gradient slot count mismatch");
  ++opt.step;
  if (opt.kind == OptimizerKind::kSgd) {
    for (std::size_t b = 0; b < params.size(); ++b) axpy(-opt.lr, grads[b].grad.flat(), params[b].value.flat());
    return;
  }
  if (opt.m.empty()) {
    for (const auto& p : params) {
      opt.m.emplace_back(p.value.rows(), p.value.cols());
      opt.v.emplace_back(p.value.rows(), p.value.cols());
    }
  }
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto theta = params[b].value.flat();
    auto g = grads[b].grad.flat();
    auto m = opt.m[b].flat();
    auto v = opt.v[b].flat();
    if (m.size() != theta.size()) throw InvalidArgument("apply_update: moment buffer shape mismatch");
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g[i];
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      theta[i] -= opt.lr * mhat / (std::sqrt(vhat) + opt.eps);
    }
  }
}

inline double cosine(std::span<const Scalar> x, std::span<const Scalar> y) {
  const double nx = l2_norm(x), ny = l2_norm(y);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return dot(x, y) / (nx * ny);
}

namespace detail {

// Loss of one reconstruction example and, optionally, its gradient.
inline double mse_example(const EmbeddingLayer& layer, std::size_t word, const DenseMat& targets,
                          std::vector<GradSlot>* grads, double scale) {
  const DenseVec out = layer.forward(word);
  const auto t = targets.row(word);
  const double inv_d = 1.0 / static_cast<double>(out.size());
  DenseVec upstream(out.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double diff = out[i] - t[i];
    loss += diff * diff * inv_d;
    upstream[i] = 2.0 * diff * inv_d * scale;
  }
  if (grads) accumulate_backward(layer, word, upstream.span(), *grads);
  return loss;
}

// (1 - cos)^2 for similar pairs, max(0, cos)^2 for dissimilar ones.
inline double cosine_example(const EmbeddingLayer& layer, const LabeledPair& pair, std::vector<GradSlot>* grads,
                             double scale) {
  const DenseVec x = layer.forward(pair.a);
  const DenseVec y = layer.forward(pair.b);
  const double nx = l2_norm(x.span()), ny = l2_norm(y.span());
  if (nx == 0.0 || ny == 0.0) return pair.label ? 1.0 : 0.0;
  const double c = dot(x.span(), y.span()) / (nx * ny);
  double loss = 0.0, dloss = 0.0;
  if (pair.label) {
    loss = (1.0 - c) * (1.0 - c);
    dloss = -2.0 * (1.0 - c);
  } else if (c > 0.0) {
    loss = c * c;
    dloss = 2.0 * c;
  }
  if (grads && dloss != 0.0) {
    // d cos / dx = y / (|x||y|) - cos * x / |x|^2, symmetric for y.
    DenseVec gx(x.size()), gy(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      gx[i] = scale * dloss * (y[i] / (nx * ny) - c * x[i] / (nx * nx));
      gy[i] = scale * dloss * (x[i] / (nx * ny) - c * y[i] / (ny * ny));
    }
    accumulate_backward(layer, pair.a, gx.span(), *grads);
    accumulate_backward(layer, pair.b, gy.span(), *grads);
  }
  return loss;
}

}  // namespace detail

inline void check_task(const EmbeddingLayer& layer, const TrainTask& task) {
  if (task.kind == TaskKind::kReconstructTable) {
    if (task.targets.rows() != layer.vocab_size() || task.targets.cols() != layer.dim()) {
      throw ConfigError("reconstruction targets must be |V| x d");
    }
  } else {
    if (task.pairs.empty()) throw ConfigError("similarity task has no pairs");
    for (const auto& p : task.pairs) {
      layer.check_word(p.a);
      layer.check_word(p.b);
      if (p.label != 0 && p.label != 1) throw ConfigError("pair labels must be 0 or 1");
    }
  }
}

// Mean loss over the whole task.
inline double task_loss(const EmbeddingLayer& layer, const TrainTask& task) {
  double total = 0.0;
  if (task.kind == TaskKind::kReconstructTable) {
    for (std::size_t w = 0; w < layer.vocab_size(); ++w) total += detail::mse_example(layer, w, task.targets, nullptr, 1.0);
    return total / static_cast<double>(layer.vocab_size());
  }
  for (const auto& p : task.pairs) total += detail::cosine_example(layer, p, nullptr, 1.0);
  return total / static_cast<double>(task.pairs.size());
}

struct TrainHistory {
  double initial_loss = 0.0;
  std::vector<double> losses;  // full-task loss after each epoch
};

// Mini-batch training. Per-example gradients of the batch-mean loss are
// summed into one set of slots, then one optimiser step is taken.
// Parameters are updated in place; the index matrix is never touched.
inline TrainHistory train(EmbeddingLayer& layer, const TrainTask& task, OptimizerState& opt, std::size_t epochs,
                          std::size_t batch, std::uint64_t seed) {
  if (epochs == 0) throw ConfigError("train: epochs must be >= 1");
  if (batch == 0) throw ConfigError("train: batch must be >= 1");
  check_task(layer, task);

  const std::size_t count =
      task.kind == TaskKind::kReconstructTable ? layer.vocab_size() : task.pairs.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);

  TrainHistory history;
  history.initial_loss = task_loss(layer, task);
  auto grads = zero_grads(layer);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < count; start += batch) {
      const std::size_t stop = std::min(count, start + batch);
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (auto& g : grads) g.grad.fill(0.0);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < stop; ++i) {
        if (task.kind == TaskKind::kReconstructTable) {
          batch_loss += detail::mse_example(layer, order[i], task.targets, &grads, scale);
        } else {
          batch_loss += detail::cosine_example(layer, task.pairs[order[i]], &grads, scale);
        }
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                           std::to_string(start));
      }
      apply_update(layer, opt, grads);
    }
    const double loss = task_loss(layer, task);
    if (!std::isfinite(loss)) throw NumericError("train: non-finite loss after epoch " + std::to_string(epoch));
    history.losses.push_back(loss);
  }
  return history;
}

inline constexpr double kSimilarityThreshold = 0.5;

// Fraction of pairs whose cosine-threshold prediction matches the label.
inline double eval_similarity(const EmbeddingLayer& layer, std::span<const LabeledPair> pairs) {
  if (pairs.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    if (p.label != 0 && p.label != 1) throw InvalidArgument("eval_similarity: labels must be 0 or 1");
    const int predicted = cosine(layer.forward(p.a).span(), layer.forward(p.b).span()) >= kSimilarityThreshold;
    correct += predicted == p.label;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

// The layer's full |V| x d output table.
inline DenseMat embedding_table(const EmbeddingLayer& layer) {
  DenseMat table(layer.vocab_size(), layer.dim());
  for (std::size_t w = 0; w < layer.vocab_size(); ++w) {
    const DenseVec row = layer.forward(w);
    std::copy(row.begin(), row.end(), table.row(w).begin());
  }
  return table;
}

}  // namespace tenbed
