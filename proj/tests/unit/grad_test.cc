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

#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "tenbed/tenbed.hpp"

namespace tenbed {
namespace {

MorphologyTables tables_from(const std::string& text, std::size_t n) {
  std::istringstream in(text);
  return build_vocab_and_index(parse_segmentations(in, "test"), n);
}

DenseVec random_upstream(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(-1, 1);
  DenseVec v(d);
  for (auto& x : v) x = u(rng);
  return v;
}

TEST(BackwardTest, OriginalPlacesUpstreamInRow) {
  LayerConfig c;
  c.vocab_size = 4;
  c.embed_dim = 3;
  const auto layer = build_layer(c);
  const DenseVec u{1, -2, 3};
  const auto g = backward(layer, 2, u.span());
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(g[0].grad(r, j), r == 2 ? u[j] : 0.0);
  }
}

TEST(BackwardTest, MorphTEOrderTwoIsMatrixVectorProducts) {
  auto t = tables_from("w\ta b\n", 2);
  LayerConfig c;
  c.method = Method::kMorphTE;
  c.vocab_size = 1;
  c.embed_dim = 4;
  c.order = 2;
  c.rank = 1;
  c.subdim = 2;
  auto layer = build_layer(c, &t.vocab, &t.index);
  const std::size_t ia = t.vocab.id("a"), ib = t.vocab.id("b");
  auto& f = layer.mutable_block(0);
  f(ia, 0) = 1.5, f(ia, 1) = -2;
  f(ib, 0) = 0.5, f(ib, 1) = 3;
  // U = [[1, 2], [3, 4]] row-major.
  const DenseVec u{1, 2, 3, 4};
  const auto g = backward(layer, 0, u.span());
  // grad_a = U b = (0.5 + 6, 1.5 + 12), grad_b = U^T a = (1.5 - 6, 3 - 8)
  EXPECT_DOUBLE_EQ(g[0].grad(ia, 0), 6.5);
  EXPECT_DOUBLE_EQ(g[0].grad(ia, 1), 13.5);
  EXPECT_DOUBLE_EQ(g[0].grad(ib, 0), -4.5);
  EXPECT_DOUBLE_EQ(g[0].grad(ib, 1), -5.0);
}

TEST(BackwardTest, RepeatedMorphemeSumsBothPositions) {
  auto t = tables_from("w\tx x\n", 2);
  LayerConfig c;
  c.method = Method::kMorphTE;
  c.vocab_size = 1;
  c.embed_dim = 4;
  c.order = 2;
  c.rank = 1;
  c.subdim = 2;
  auto layer = build_layer(c, &t.vocab, &t.index);
  const std::size_t ix = t.vocab.id("x");
  auto& f = layer.mutable_block(0);
  f(ix, 0) = 2, f(ix, 1) = -1;
  const DenseVec u{1, 2, 3, 4};
  const auto g = backward(layer, 0, u.span());
  // U x + U^T x = (2 - 2, 6 - 4) + (2 - 3, 4 - 4)
  EXPECT_DOUBLE_EQ(g[0].grad(ix, 0), -1.0);
  EXPECT_DOUBLE_EQ(g[0].grad(ix, 1), 2.0);
  EXPECT_LT(finite_diff_check(layer, 0, 1e-5, 1e-6).max_rel_error, 1e-6);
}

TEST(FiniteDiffTest, OriginalIsExact) {
  LayerConfig c;
  c.vocab_size = 6;
  c.embed_dim = 5;
  c.seed = 3;
  const auto layer = build_layer(c);
  for (std::size_t w = 0; w < 6; ++w) EXPECT_EQ(finite_diff_check(layer, w, 1e-5, 1e-5, w).max_rel_error, 0.0);
}

TEST(FiniteDiffTest, MorphTEAndTensorTrainExamples) {
  std::mt19937_64 rng(4);
  const auto segs = testing::random_segmentations(rng, 20, 6, 4);
  const auto t = build_vocab_and_index(segs, 3);
  LayerConfig c;
  c.method = Method::kMorphTE;
  c.vocab_size = 20;
  c.embed_dim = 27;
  c.order = 3;
  c.rank = 2;
  c.subdim = 3;
  const auto morph = build_layer(c, &t.vocab, &t.index);
  LayerConfig tt;
  tt.method = Method::kTensorTrain;
  tt.vocab_size = 24;
  tt.embed_dim = 24;
  tt.order = 3;
  tt.rank = 2;
  tt.vocab_shape = {2, 3, 4};
  tt.dim_shape = {2, 3, 4};
  const auto train = build_layer(tt);
  for (std::size_t w = 0; w < 20; ++w) {
    EXPECT_LT(finite_diff_check(morph, w, 1e-5, 1e-6, w).max_rel_error, 1e-6);
    EXPECT_LT(finite_diff_check(train, w, 1e-5, 1e-6, w).max_rel_error, 1e-6);
  }
}

TEST(FiniteDiffTest, DetectsCorruptedBackward) {
  std::mt19937_64 rng(5);
  const auto layer = testing::random_case(Method::kWord2ket, rng).build();
  BackwardFn wrong = [](const EmbeddingLayer& l, std::size_t w, std::span<const Scalar> u) {
    auto slots = backward(l, w, u);
    slots[0].grad.flat()[l.touched_rows(w)[0].row * slots[0].grad.cols()] += 0.1;
    return slots;
  };
  EXPECT_FALSE(finite_diff_check(layer, 0, 1e-5, 1e-5, 1, wrong).passed);
  EXPECT_THROW(finite_diff_check(layer, 0, 0.0, 1e-5), InvalidArgument);
}

class GradPerMethodTest : public ::testing::TestWithParam<Method> {};

TEST_P(GradPerMethodTest, FiniteDifferencesAgreeOnRandomConfigs) {
  std::mt19937_64 rng(500 + static_cast<int>(GetParam()));
  for (int t = 0; t < 50; ++t) {
    const auto layer = testing::random_case(GetParam(), rng).build();
    const std::size_t w = rng() % layer.vocab_size();
    const auto rep = finite_diff_check(layer, w, 1e-5, 1e-5, rng());
    EXPECT_TRUE(rep.passed) << rep.worst_param << "[" << rep.worst_index << "] numeric " << rep.worst_numeric
                            << " analytic " << rep.worst_analytic;
  }
}

TEST_P(GradPerMethodTest, UntouchedRowsHaveZeroGradient) {
  std::mt19937_64 rng(600 + static_cast<int>(GetParam()));
  for (int t = 0; t < 20; ++t) {
    const auto layer = testing::random_case(GetParam(), rng).build();
    const std::size_t w = rng() % layer.vocab_size();
    const auto touched = layer.touched_rows(w);
    const auto g = backward(layer, w, random_upstream(rng, layer.dim()).span());
    ASSERT_EQ(g.size(), layer.params().size());
    for (std::size_t b = 0; b < g.size(); ++b) {
      EXPECT_EQ(g[b].param_name, layer.params()[b].name);
      for (std::size_t r = 0; r < g[b].grad.rows(); ++r) {
        if (std::ranges::find(touched, RowRef{b, r}) != touched.end()) continue;
        for (double x : g[b].grad.row(r)) EXPECT_EQ(x, 0.0);
      }
    }
  }
}

TEST_P(GradPerMethodTest, LinearInUpstream) {
  std::mt19937_64 rng(700 + static_cast<int>(GetParam()));
  for (int t = 0; t < 20; ++t) {
    const auto layer = testing::random_case(GetParam(), rng).build();
    const std::size_t w = rng() % layer.vocab_size();
    const DenseVec u1 = random_upstream(rng, layer.dim()), u2 = random_upstream(rng, layer.dim());
    DenseVec sum(layer.dim());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = 2.0 * u1[i] - u2[i];
    const auto g1 = backward(layer, w, u1.span()), g2 = backward(layer, w, u2.span()),
               gs = backward(layer, w, sum.span());
    for (std::size_t b = 0; b < gs.size(); ++b) {
      for (std::size_t i = 0; i < gs[b].grad.size(); ++i) {
        const double want = 2.0 * g1[b].grad.flat()[i] - g2[b].grad.flat()[i];
        EXPECT_NEAR(gs[b].grad.flat()[i], want, 1e-12 * (1 + std::abs(want)));
      }
    }
  }
}

TEST_P(GradPerMethodTest, AccumulateAddsToExistingSlots) {
  std::mt19937_64 rng(800 + static_cast<int>(GetParam()));
  const auto layer = testing::random_case(GetParam(), rng).build();
  const DenseVec u = random_upstream(rng, layer.dim());
  auto slots = backward(layer, 0, u.span());
  accumulate_backward(layer, 0, u.span(), slots);
  const auto once = backward(layer, 0, u.span());
  for (std::size_t b = 0; b < slots.size(); ++b) {
    for (std::size_t i = 0; i < slots[b].grad.size(); ++i) {
      EXPECT_DOUBLE_EQ(slots[b].grad.flat()[i], 2.0 * once[b].grad.flat()[i]);
    }
  }
  EXPECT_THROW(backward(layer, 0, DenseVec(layer.dim() + 1).span()), InvalidArgument);
}

INSTANTIATE_TEST_SUITE_P(AllMethods, GradPerMethodTest, ::testing::ValuesIn(kBuildableMethods),
                         [](const auto& info) { return std::string(method_name(info.param)); });

}  // namespace
}  // namespace tenbed
