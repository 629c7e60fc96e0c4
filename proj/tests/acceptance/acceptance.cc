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

// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   tenbed_acceptance            run all nine
//   tenbed_acceptance 3 7        run a subset
//
// Exit status is 0 only if every selected criterion passes.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "support/oracles.hpp"
#include "tenbed/tenbed.hpp"

namespace {

using namespace tenbed;

// Pinned tolerances and limits.
constexpr double kAuditMaxSeconds = 1.0;
constexpr std::size_t kConsistencyConfigsPerMethod = 30;
constexpr double kConsistencyMaxSeconds = 10.0;
constexpr std::size_t kOracleCases = 200;
constexpr double kOracleRelTol = 1e-12;
constexpr std::size_t kGradWordsPerMethod = 50;
constexpr double kGradEpsilon = 1e-5;
constexpr double kGradTol = 1e-5;
constexpr double kGradMaxSeconds = 60.0;
constexpr std::size_t kAblationSeeds = 5;
constexpr double kAblationMinGap = 0.05;
constexpr double kAblationMaxSeconds = 300.0;
constexpr double kReconMaxRatio = 0.1;
constexpr std::size_t kReconMaxEpochs = 200;
constexpr double kReconMaxSeconds = 120.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// 1 -------------------------------------------------------------------------
Outcome paper_table_audit() {
  Stopwatch sw;
  const auto checks = reproduce_paper_tables();
  const double secs = sw.seconds();
  std::vector<std::string> bad;
  for (const auto& c : checks) {
    if (!c.matches) {
      bad.push_back(c.fixture.table + "/" + c.fixture.dataset + " " + std::string(method_name(c.fixture.config.method)) +
                    " r=" + std::to_string(c.fixture.config.rank) + ": computed " + fmt(c.computed_millions) +
                    "M, reported " + c.fixture.reported + "M");
    }
  }
  std::string detail = std::to_string(checks.size()) + " rows, " + std::to_string(bad.size()) +
                       " outside +/-" + fmt(kReportedTolerance) + "M, " + fmt(secs, 3) + " s";
  for (const auto& b : bad) detail += "\n      " + b;
  return {bad.empty() && secs < kAuditMaxSeconds, detail};
}

// 2 -------------------------------------------------------------------------
// Wider draws than the unit tests: sizes up to a few thousand parameters.
testing::RandomLayerCase consistency_case(Method m, std::mt19937_64& rng) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  auto rc = testing::random_case(m, rng);
  auto& c = rc.config;
  switch (m) {
    case Method::kOriginal:
    case Method::kMatrixFactor:
      c.vocab_size = pick(1, 500);
      c.embed_dim = pick(1, 64);
      c.rank = pick(1, 16);
      break;
    case Method::kWord2ket:
      c.order = pick(1, 4);
      c.subdim = pick(1, 6);
      c.embed_dim = pick(1, int_pow(c.subdim, c.order));
      c.vocab_size = pick(1, 300);
      c.rank = pick(1, 5);
      break;
    case Method::kWord2ketXS:
    case Method::kTensorTrain:
      c.order = pick(2, 4);
      c.vocab_shape.assign(c.order, 0);
      c.dim_shape.assign(c.order, 0);
      for (std::size_t k = 0; k < c.order; ++k) {
        c.vocab_shape[k] = pick(1, 8);
        c.dim_shape[k] = pick(1, 4);
      }
      c.vocab_size = pick(1, shape_product(c.vocab_shape));
      c.embed_dim = pick(1, shape_product(c.dim_shape));
      c.rank = pick(1, 6);
      break;
    default:
      c.rank = pick(1, 6);
      break;
  }
  return rc;
}

Outcome built_layer_consistency() {
  Stopwatch sw;
  std::mt19937_64 rng(2024);
  std::size_t checked = 0, failed = 0;
  std::string first_failure;
  for (Method m : kBuildableMethods) {
    for (std::size_t t = 0; t < kConsistencyConfigsPerMethod; ++t) {
      const auto rc = consistency_case(m, rng);
      const auto layer = rc.build();
      std::size_t scalars = 0;
      for (const auto& p : layer.params()) scalars += p.value.size();
      const auto audit = count_params(layer.config());
      ++checked;
      if (audit.trainable != scalars) {
        ++failed;
        if (first_failure.empty()) {
          first_failure = audit.config_summary + ": built " + std::to_string(scalars) + " vs audit " +
                          std::to_string(audit.trainable);
        }
      }
    }
  }
  const double secs = sw.seconds();
  std::string detail = std::to_string(checked) + " configs (" + std::to_string(kConsistencyConfigsPerMethod) +
                       " per method), " + std::to_string(failed) + " mismatches, " + fmt(secs, 3) + " s";
  if (!first_failure.empty()) detail += "; first: " + first_failure;
  return {failed == 0 && secs < kConsistencyMaxSeconds, detail};
}

// 3 -------------------------------------------------------------------------
Outcome tensor_oracle_equivalence() {
  std::mt19937_64 rng(31337);
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  double worst = 0.0;
  for (std::size_t t = 0; t < kOracleCases; ++t) {
    const bool morph = t % 2 == 1;
    LayerConfig c;
    c.method = morph ? Method::kMorphTE : Method::kWord2ket;
    c.order = pick(1, 4);
    c.subdim = pick(1, 4);
    c.rank = 1;
    c.embed_dim = pick(1, int_pow(c.subdim, c.order));
    c.seed = rng();
    c.vocab_size = pick(2, 20);
    std::optional<EmbeddingLayer> layer;
    if (morph) {
      const auto segs = testing::random_segmentations(rng, c.vocab_size, 6, c.order + 1);
      const auto tables = build_vocab_and_index(segs, c.order);
      layer = build_layer(c, &tables.vocab, &tables.index);
    } else {
      layer = build_layer(c);
    }
    const std::size_t w = pick(0, c.vocab_size - 1);
    const std::size_t q = c.subdim, n = c.order;
    std::vector<std::vector<double>> vs;
    for (std::size_t p = 0; p < n; ++p) {
      if (morph) {
        vs.push_back(testing::row_of(layer->block(0), static_cast<std::size_t>(layer->index()->row(w)[p]), 0, q));
      } else {
        vs.push_back(testing::row_of(layer->block(0), w, p * q, q));
      }
    }
    auto want = testing::naive_kron(vs);
    want.resize(c.embed_dim);
    worst = std::max(worst, testing::max_rel_diff(layer->forward(w).values(), want));
  }
  return {worst <= kOracleRelTol, std::to_string(kOracleCases) + " cases (q<=4, n<=4), max relative error " +
                                      fmt(worst, 3) + " (tolerance " + fmt(kOracleRelTol) + ")"};
}

// 4 -------------------------------------------------------------------------
testing::RandomLayerCase gradient_case(Method m) {
  testing::RandomLayerCase rc;
  auto& c = rc.config;
  c.method = m;
  c.seed = 4040 + static_cast<std::uint64_t>(m);
  c.vocab_size = 120;
  c.embed_dim = 24;
  c.rank = 3;
  c.order = 3;
  c.subdim = 3;
  switch (m) {
    case Method::kOriginal:
    case Method::kMatrixFactor:
      c.order = 1;
      break;
    case Method::kWord2ketXS:
    case Method::kTensorTrain:
      c.vocab_shape = {4, 5, 6};
      c.dim_shape = {2, 3, 4};
      break;
    case Method::kMorphTE:
    case Method::kMorphSum:
    case Method::kWord2ketRshare: {
      LexiconSpec spec;
      spec.words = c.vocab_size;
      spec.roots = 15;
      spec.suffixes = 10;
      auto segs = synthetic_lexicon(spec, 7);
      // Word 0 repeats a morpheme in two slots.
      segs[0] = {"s1R3s1", {"s1", "R3", "s1"}};
      rc.morph = build_vocab_and_index(segs, c.order);
      if (m == Method::kWord2ketRshare) {
        c.morpheme_vocab_size = rc.morph->vocab.size();
        rc.morph.reset();
      }
      break;
    }
    default:
      break;
  }
  return rc;
}

Outcome gradient_checks() {
  Stopwatch sw;
  double worst = 0.0;
  std::size_t failed = 0, params = 0;
  std::string worst_where;
  for (Method m : kBuildableMethods) {
    const auto layer = gradient_case(m).build();
    std::mt19937_64 rng(77 + static_cast<std::uint64_t>(m));
    std::uniform_int_distribution<std::size_t> pick(0, layer.vocab_size() - 1);
    for (std::size_t t = 0; t < kGradWordsPerMethod; ++t) {
      const std::size_t w = (t == 0) ? 0 : pick(rng);
      const auto rep = finite_diff_check(layer, w, kGradEpsilon, kGradTol, rng());
      params += rep.params_checked;
      failed += !rep.passed;
      if (rep.max_rel_error >= worst) {
        worst = rep.max_rel_error;
        worst_where = std::string(method_name(m)) + " word " + std::to_string(w) + " " + rep.worst_param;
      }
    }
  }
  // The repeated-morpheme word must actually have a repeated id.
  const auto morph = gradient_case(Method::kMorphTE).build();
  const auto row0 = morph.index()->row(0);
  const bool repeated = row0[0] == row0[2];
  const double secs = sw.seconds();
  return {failed == 0 && repeated && secs < kGradMaxSeconds,
          "8 methods x " + std::to_string(kGradWordsPerMethod) + " words, " + std::to_string(params) +
              " parameters, max relative error " + fmt(worst, 3) + " (" + worst_where + "), tolerance " +
              fmt(kGradTol) + ", eps " + fmt(kGradEpsilon) + ", repeated-morpheme word " +
              (repeated ? "included" : "MISSING") + ", " + fmt(secs, 3) + " s"};
}

// 5 -------------------------------------------------------------------------
Outcome worked_expansion() {
  // Distinct primes stand in for a1,a2,b1,b2,c1,c2, so each product
  // identifies its three factors uniquely.
  const double a[2] = {2, 3}, b[2] = {5, 7}, c[2] = {11, 13};
  const DenseVec out = cumulative_tensor_product({DenseVec{2, 3}, DenseVec{5, 7}, DenseVec{11, 13}});
  bool ok = out.size() == 8;
  std::string terms;
  for (std::size_t i = 0; ok && i < 8; ++i) {
    const std::size_t ia = (i >> 2) & 1, ib = (i >> 1) & 1, ic = i & 1;
    ok = out[i] == a[ia] * b[ib] * c[ic];
    terms += (i ? " " : "") + std::string("a") + char('1' + ia) + "b" + char('1' + ib) + "c" + char('1' + ic);
  }
  return {ok, "8 terms in order " + terms + ", exact"};
}

// 6 -------------------------------------------------------------------------
Outcome truncation_behaviour() {
  using S = std::vector<std::string>;
  const std::string pad(kPadMorpheme);
  const S long_word = truncate_pad({"un", "feel", "ing", "ly"}, 3);
  const S single = truncate_pad({"kind"}, 3);
  const bool ok = long_word == S{"un", "feel", "ingly"} && single == S{"kind", pad, pad};
  return {ok, "[un feel ing ly] -> [" + long_word[0] + " " + long_word[1] + " " + long_word[2] + "], [kind] -> [" +
                  single[0] + " " + single[1] + " " + single[2] + "]"};
}

// 7 -------------------------------------------------------------------------
Outcome sharing_ablation() {
  Stopwatch sw;
  std::vector<double> gaps;
  std::string per_seed;
  std::size_t morphemes = 0;
  for (std::uint64_t seed = 1; seed <= kAblationSeeds; ++seed) {
    const auto segs = synthetic_lexicon(LexiconSpec{}, 100 + seed);
    const auto tables = build_vocab_and_index(segs, 3);
    morphemes = tables.vocab.size();
    const auto split = shares_morpheme_pairs(tables.index, 4000, 1000, 0.2, 200 + seed);
    double acc[2];
    for (int k = 0; k < 2; ++k) {
      LayerConfig c;
      c.method = k == 0 ? Method::kMorphTE : Method::kWord2ketRshare;
      c.vocab_size = segs.size();
      c.embed_dim = 64;
      c.order = 3;
      c.rank = 2;
      c.subdim = 4;
      c.seed = seed;
      c.morpheme_vocab_size = tables.vocab.size();
      auto layer = k == 0 ? build_layer(c, &tables.vocab, &tables.index) : build_layer(c);
      auto opt = OptimizerState::adam(0.01);
      train(layer, TrainTask::similarity(split.train), opt, 20, 32, seed);
      acc[k] = eval_similarity(layer, split.heldout);
    }
    gaps.push_back(acc[0] - acc[1]);
    per_seed += (seed > 1 ? ", " : "") + fmt(acc[0], 3) + "/" + fmt(acc[1], 3);
  }
  std::sort(gaps.begin(), gaps.end());
  const double median = gaps[gaps.size() / 2];
  const double secs = sw.seconds();
  return {median >= kAblationMinGap && secs < kAblationMaxSeconds,
          "|V|=500 |M|=" + std::to_string(morphemes) + " n=3 q=4 d=64 r=2; held-out accuracy MorphTE/Rshare per seed " +
              per_seed + "; median gap " + fmt(100 * median, 3) + " points (need >= " +
              fmt(100 * kAblationMinGap) + "), " + fmt(secs, 3) + " s"};
}

// 8 -------------------------------------------------------------------------
struct ReconRun {
  TrainHistory history;
  std::vector<ParamBlock> params;
};

ReconRun run_reconstruction(const std::string& dir) {
  const auto kv = KeyValues::load(dir + "/recon.cfg");
  const auto segs = load_segmentations(dir + "/" + kv.get("segs"));
  const auto tables = build_vocab_and_index(segs, kv.get_uint("order"));
  LayerConfig c = layer_config_from(kv);
  c.vocab_size = segs.size();
  LayerConfig teacher = c;
  teacher.seed = kv.get_uint("teacher_seed");
  auto layer = build_layer(c, &tables.vocab, &tables.index);
  const auto task = TrainTask::reconstruct(embedding_table(build_layer(teacher, &tables.vocab, &tables.index)));
  auto opt = OptimizerState::adam(kv.get_double_or("lr", 0.0));
  const std::size_t epochs = std::min<std::size_t>(kv.get_uint("epochs"), kReconMaxEpochs);
  auto history = train(layer, task, opt, epochs, kv.get_uint("batch"), c.seed);
  return {std::move(history), layer.params()};
}

Outcome trainability() {
  Stopwatch sw;
  const std::string dir = TENBED_SOURCE_DIR "/tests/fixtures/recon";
  const auto first = run_reconstruction(dir);
  const auto second = run_reconstruction(dir);
  const double secs = sw.seconds();
  const double ratio = first.history.losses.back() / first.history.initial_loss;
  const bool deterministic = first.history.losses == second.history.losses && first.params == second.params;
  return {ratio < kReconMaxRatio && deterministic && secs < kReconMaxSeconds,
          "MorphTE |V|=200 n=3 q=4 d=64 r=4, " + std::to_string(first.history.losses.size()) + " epochs: mse " +
              fmt(first.history.initial_loss) + " -> " + fmt(first.history.losses.back()) + " (ratio " + fmt(ratio) +
              ", need < " + fmt(kReconMaxRatio) + "), rerun " + (deterministic ? "identical" : "DIFFERS") + ", " +
              fmt(secs, 3) + " s"};
}

// 9 -------------------------------------------------------------------------
Outcome checkpoint_round_trip() {
  const auto dir = std::filesystem::temp_directory_path() / ("tenbed_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::size_t methods_ok = 0, outputs = 0;
  std::string failures;
  for (Method m : kBuildableMethods) {
    auto layer = gradient_case(m).build();
    // Move off the initialisation so the round trip sees trained values.
    auto opt = OptimizerState::adam(0.01);
    const auto task = TrainTask::similarity({{1, 2, 1}, {3, 4, 0}});
    train(layer, task, opt, 2, 2, 5);
    const std::string path = (dir / (std::string(method_name(m)) + ".tnbd")).string();
    save_checkpoint(path, layer);
    const auto back = load_checkpoint(path);
    bool same = back.layer.params() == layer.params();
    for (std::size_t w = 0; w < layer.vocab_size(); ++w) {
      const auto a = layer.forward(w), b = back.layer.forward(w);
      for (std::size_t i = 0; i < a.size(); ++i) {
        same = same && std::bit_cast<std::uint64_t>(a[i]) == std::bit_cast<std::uint64_t>(b[i]);
      }
      ++outputs;
    }
    if (same) {
      ++methods_ok;
    } else {
      failures += " " + std::string(method_name(m));
    }
  }
  std::filesystem::remove_all(dir);
  return {methods_ok == kBuildableMethods.size(),
          std::to_string(methods_ok) + "/8 methods bit-identical over " + std::to_string(outputs) + " word outputs" +
              (failures.empty() ? "" : "; differing:" + failures)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "reference-table parameter audit", paper_table_audit},
      {2, "built-layer consistency", built_layer_consistency},
      {3, "tensor oracle equivalence", tensor_oracle_equivalence},
      {4, "gradient checks", gradient_checks},
      {5, "three-factor expansion pattern", worked_expansion},
      {6, "truncate/pad behaviour", truncation_behaviour},
      {7, "sharing ablation", sharing_ablation},
      {8, "trainability", trainability},
      {9, "checkpoint round-trip", checkpoint_round_trip},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    try {
      selected.push_back(std::stoi(argv[i]));
    } catch (const std::exception&) {
      std::cerr << "usage: " << argv[0] << " [criterion ...]\n";
      return 2;
    }
  }
  bool all_pass = true;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail
              << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
