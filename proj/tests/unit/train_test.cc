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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support/oracles.hpp"
#include "tenbed/tenbed.hpp"

namespace tenbed {
namespace {

EmbeddingLayer scalar_layer(double value) {
  LayerConfig c;
  c.vocab_size = 1;
  c.embed_dim = 1;
  auto layer = build_layer(c);
  layer.mutable_block(0)(0, 0) = value;
  return layer;
}

TEST(AdamTest, MatchesHandTrace) {
  auto layer = scalar_layer(1.0);
  auto opt = OptimizerState::adam(0.1, 0.9, 0.999, 1e-8);
  const double grads[3] = {0.5, -0.2, 0.3};
  // Reference recursion written out in scalars.
  double theta = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 3; ++t) {
    const double g = grads[t - 1];
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mhat = m / (1 - std::pow(0.9, t));
    const double vhat = v / (1 - std::pow(0.999, t));
    theta -= 0.1 * mhat / (std::sqrt(vhat) + 1e-8);

    auto slots = zero_grads(layer);
    slots[0].grad(0, 0) = g;
    apply_update(layer, opt, slots);
    EXPECT_NEAR(layer.block(0)(0, 0), theta, 1e-15) << "step " << t;
  }
  // First step of Adam moves by lr * sign(g) (up to eps).
  EXPECT_NEAR(1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 0.9, 1e-7);
  EXPECT_EQ(opt.step, 3u);
}

TEST(SgdTest, SingleStepDecreasesExampleLoss) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t instances = 0;
  for (Method m : kBuildableMethods) {
    for (int t = 0; t < 3 && instances < 20; ++t, ++instances) {
      auto layer = testing::random_case(m, rng).build();
      const std::size_t w = rng() % layer.vocab_size();
      DenseMat targets(layer.vocab_size(), layer.dim());
      for (auto& x : targets.flat()) x = u(rng);
      auto task = TrainTask::reconstruct(targets);
      const double before = detail::mse_example(layer, w, targets, nullptr, 1.0);
      auto grads = zero_grads(layer);
      detail::mse_example(layer, w, targets, &grads, 1.0);
      auto opt = OptimizerState::sgd(1e-4);
      apply_update(layer, opt, grads);
      EXPECT_LT(detail::mse_example(layer, w, targets, nullptr, 1.0), before) << method_name(m);
    }
  }
  EXPECT_EQ(instances, 20u);
}

TEST(TrainTest, OriginalReconstructingItselfStartsAtZero) {
  std::mt19937_64 rng(11);
  auto layer = testing::random_case(Method::kOriginal, rng).build();
  auto task = TrainTask::reconstruct(embedding_table(layer));
  auto opt = OptimizerState::adam(0.01);
  const auto h = train(layer, task, opt, 3, 4, 1);
  EXPECT_EQ(h.initial_loss, 0.0);
  EXPECT_EQ(h.losses.size(), 3u);
}

TEST(TrainTest, SameSeedSameHistory) {
  std::mt19937_64 rng(12);
  const auto rc = testing::random_case(Method::kMorphTE, rng);
  auto teacher = rc;
  teacher.config.seed += 99;
  const auto task = TrainTask::reconstruct(embedding_table(teacher.build()));
  auto run = [&] {
    auto layer = rc.build();
    auto opt = OptimizerState::adam(0.02);
    return std::make_pair(train(layer, task, opt, 10, 3, 77), layer.params());
  };
  const auto [h1, p1] = run();
  const auto [h2, p2] = run();
  EXPECT_EQ(h1.losses, h2.losses);
  EXPECT_EQ(p1, p2);
}

TEST(TrainTest, NeverMutatesIndex) {
  std::mt19937_64 rng(13);
  const auto segs = testing::random_segmentations(rng, 30, 8, 4);
  const auto tables = build_vocab_and_index(segs, 3);
  const auto vocab_before = tables.vocab.morphemes();
  LayerConfig c;
  c.method = Method::kMorphTE;
  c.vocab_size = 30;
  c.embed_dim = 8;
  c.order = 3;
  c.rank = 2;
  c.subdim = 2;
  auto layer = build_layer(c, &tables.vocab, &tables.index);
  const IndexMatrix index_before = *layer.index();
  auto task = TrainTask::similarity({{0, 1, 1}, {2, 3, 0}, {4, 5, 1}});
  auto opt = OptimizerState::adam(0.05);
  train(layer, task, opt, 5, 2, 3);
  EXPECT_EQ(*layer.index(), index_before);
  EXPECT_EQ(*layer.index(), tables.index);
  EXPECT_EQ(tables.vocab.morphemes(), vocab_before);
}

TEST(TrainTest, RejectsBadArguments) {
  auto layer = scalar_layer(1.0);
  auto opt = OptimizerState::sgd(0.1);
  auto task = TrainTask::reconstruct(DenseMat(1, 1));
  EXPECT_THROW(train(layer, task, opt, 0, 1, 0), ConfigError);
  EXPECT_THROW(train(layer, TrainTask::reconstruct(DenseMat(2, 1)), opt, 1, 1, 0), ConfigError);
  EXPECT_THROW(train(layer, TrainTask::similarity({{0, 5, 1}}), opt, 1, 1, 0), LookupError);
}

TEST(TrainTest, NanLossAborts) {
  auto layer = scalar_layer(std::numeric_limits<double>::quiet_NaN());
  auto opt = OptimizerState::sgd(0.1);
  EXPECT_THROW(train(layer, TrainTask::reconstruct(DenseMat(1, 1)), opt, 1, 1, 0), NumericError);
}

TEST(TrainTest, HistoryLengthAndDecrease) {
  LexiconSpec spec;
  spec.words = 60;
  const auto tables = build_vocab_and_index(synthetic_lexicon(spec, 2), 3);
  LayerConfig c;
  c.method = Method::kMorphTE;
  c.vocab_size = 60;
  c.embed_dim = 16;
  c.order = 3;
  c.rank = 2;
  c.subdim = 3;
  c.seed = 1;
  auto teacher_cfg = c;
  teacher_cfg.seed = 2;
  auto layer = build_layer(c, &tables.vocab, &tables.index);
  const auto task =
      TrainTask::reconstruct(embedding_table(build_layer(teacher_cfg, &tables.vocab, &tables.index)));
  auto opt = OptimizerState::adam(0.02);
  const auto h = train(layer, task, opt, 40, 60, 1);
  EXPECT_EQ(h.losses.size(), 40u);
  EXPECT_LT(h.losses.back(), 0.5 * h.initial_loss);
}

TEST(EvalSimilarityTest, IdenticalPairsAreSimilar) {
  std::mt19937_64 rng(14);
  const auto layer = testing::random_case(Method::kWord2ket, rng).build();
  std::vector<LabeledPair> pairs;
  for (std::size_t w = 0; w < layer.vocab_size(); ++w) {
    if (l2_norm(layer.forward(w).span()) > 0) pairs.push_back({w, w, 1});
  }
  EXPECT_EQ(eval_similarity(layer, pairs), 1.0);
}

TEST(EvalSimilarityTest, RandomLabelsNearChance) {
  LayerConfig c;
  c.vocab_size = 200;
  c.embed_dim = 16;
  c.seed = 3;
  const auto layer = build_layer(c);
  std::mt19937_64 rng(15);
  std::vector<LabeledPair> pairs;
  for (int i = 0; i < 1000; ++i) pairs.push_back({rng() % 200, rng() % 200, static_cast<int>(rng() % 2)});
  const double acc = eval_similarity(layer, pairs);
  EXPECT_GE(acc, 0.4);
  EXPECT_LE(acc, 0.6);
  EXPECT_EQ(eval_similarity(layer, std::vector<LabeledPair>{}), 0.0);
}

TEST(SyntheticTest, LexiconAndPairs) {
  const auto segs = synthetic_lexicon(LexiconSpec{}, 1);
  const auto tables = build_vocab_and_index(segs, 3);
  EXPECT_EQ(segs.size(), 500u);
  EXPECT_EQ(tables.vocab.size(), 80u);
  const auto split = shares_morpheme_pairs(tables.index, 400, 200, 0.2, 4);
  std::vector<bool> held(500, false);
  for (auto w : split.heldout_words) held[w] = true;
  int positives = 0;
  for (const auto& p : split.train) {
    EXPECT_FALSE(held[p.a] || held[p.b]);
    EXPECT_EQ(p.label, shares_morpheme(tables.index, p.a, p.b) ? 1 : 0);
    positives += p.label;
  }
  EXPECT_EQ(positives, 200);
  for (const auto& p : split.heldout) {
    EXPECT_TRUE(held[p.a] || held[p.b]);
    EXPECT_EQ(p.label, shares_morpheme(tables.index, p.a, p.b) ? 1 : 0);
  }
}

}  // namespace
}  // namespace tenbed
