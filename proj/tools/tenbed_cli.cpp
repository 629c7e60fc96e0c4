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

// tenbed command-line tool.
//
// Exit codes: 0 success, 2 validation/config error, 3 I/O error,
// 4 check failure (gradcheck over tolerance, audit mismatch).

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tenbed/tenbed.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitCheckFailed = 4;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tenbed::IoError("cannot read '" + path + "' for hashing");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return "sha256:" + hex.str();
}

// Command, resolved configuration, input digests, seed and tool version of
// one run; written next to every output artifact.
struct RunManifest {
  std::string command;
  json config = json::object();
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  json results = json::object();

  json to_json() const {
    json j;
    j["command"] = command;
    j["tool_version"] = tenbed::kVersion;
    j["seed"] = seed;
    j["config"] = config;
    json digests = json::array();
    for (const auto& path : inputs) digests.push_back({{"path", path}, {"digest", sha256_file(path)}});
    j["inputs"] = digests;
    if (!results.empty()) j["results"] = results;
    return j;
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw tenbed::IoError("cannot write manifest '" + path + "'");
    out << to_json().dump(2) << '\n';
  }
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw tenbed::IoError("cannot create directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw tenbed::IoError("cannot open '" + path + "' for writing");
  return out;
}

// --seed beats TENBED_SEED beats the config file.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t config_seed) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TENBED_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw tenbed::ConfigError(std::string("TENBED_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return config_seed;
}

json config_json(const tenbed::KeyValues& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv.values()) j[k] = v;
  return j;
}

// Layer configuration plus everything needed to build it: the morphology
// for MorphTE/MorphSum comes from `segs` or a synthetic lexicon.
struct LayerInputs {
  tenbed::LayerConfig config;
  std::optional<tenbed::MorphologyTables> morph;
  std::vector<std::string> words;
  std::vector<std::string> input_files;
};

// A relative `segs` path is taken relative to the config file.
std::string resolve_against(const std::string& config_path, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute() || config_path.empty()) return path;
  return (fs::path(config_path).parent_path() / p).string();
}

LayerInputs prepare_layer(const tenbed::KeyValues& kv, std::uint64_t seed, const std::string& config_path = "") {
  LayerInputs in;
  in.config = tenbed::layer_config_from(kv);
  in.config.seed = seed;
  const bool wants_lexicon = tenbed::needs_morphology(in.config.method) || kv.has("segs");
  if (wants_lexicon) {
    std::vector<tenbed::Segmentation> segs;
    if (kv.has("segs")) {
      const std::string path = resolve_against(config_path, kv.get("segs"));
      segs = tenbed::load_segmentations(path);
      in.input_files.push_back(path);
    } else {
      tenbed::LexiconSpec spec;
      spec.words = in.config.vocab_size ? in.config.vocab_size : 500;
      spec.roots = kv.get_uint_or("lexicon_roots", spec.roots);
      spec.suffixes = kv.get_uint_or("lexicon_suffixes", spec.suffixes);
      spec.max_suffixes = kv.get_uint_or("lexicon_max_suffixes", spec.max_suffixes);
      segs = tenbed::synthetic_lexicon(spec, kv.get_uint_or("lexicon_seed", 1));
    }
    in.config.vocab_size = segs.size();
    in.morph = tenbed::build_vocab_and_index(segs, in.config.order);
    in.words = in.morph->index.words();
    if (in.config.method == tenbed::Method::kWord2ketRshare && in.config.morpheme_vocab_size == 0) {
      in.config.morpheme_vocab_size = in.morph->vocab.size();
    }
  }
  return in;
}

tenbed::EmbeddingLayer build_from(const LayerInputs& in) {
  if (tenbed::needs_morphology(in.config.method)) {
    return tenbed::build_layer(in.config, &in.morph->vocab, &in.morph->index);
  }
  return tenbed::build_layer(in.config);
}

// ---------------------------------------------------------------------------

struct BuildVocabArgs {
  std::string segs;
  std::size_t order = 3;
  std::string out;
  std::string caps = "inf,4,3,2,1";
  bool random_seg = false;
  std::optional<std::uint64_t> seed;
};

std::vector<std::optional<std::size_t>> parse_caps(const std::string& text) {
  std::vector<std::optional<std::size_t>> caps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      caps.emplace_back(std::nullopt);
    } else {
      try {
        const auto v = std::stoull(item);
        if (v == 0) throw std::invalid_argument(item);
        caps.emplace_back(static_cast<std::size_t>(v));
      } catch (const std::exception&) {
        throw tenbed::ConfigError("--caps: bad entry '" + item + "'");
      }
    }
  }
  return caps;
}

int cmd_build_vocab(const BuildVocabArgs& a) {
  if (a.order == 0) throw tenbed::ConfigError("--order must be >= 1");
  auto segs = tenbed::load_segmentations(a.segs);
  const std::uint64_t seed = resolve_seed(a.seed, 0);
  if (a.random_seg) {
    for (std::size_t i = 0; i < segs.size(); ++i) {
      segs[i] = tenbed::random_seg(segs[i].word, seed * 1000003ULL + i);
    }
  }
  const auto tables = tenbed::build_vocab_and_index(segs, a.order);
  ensure_dir(a.out);
  const fs::path dir(a.out);
  {
    auto out = open_out((dir / "morphemes.tsv").string());
    tenbed::write_vocab_tsv(out, tables.vocab);
  }
  {
    auto out = open_out((dir / "index.tsv").string());
    tenbed::write_index_tsv(out, tables.index);
  }
  {
    auto out = open_out((dir / "stats.tsv").string());
    tenbed::write_stats_tsv(out, tenbed::morpheme_stats(segs, parse_caps(a.caps)));
  }
  if (a.random_seg) {
    auto out = open_out((dir / "segmentations.tsv").string());
    tenbed::write_segmentations(out, segs);
  }
  RunManifest m;
  m.command = "build-vocab";
  m.seed = seed;
  m.config = {{"order", a.order}, {"caps", a.caps}, {"random_seg", a.random_seg}};
  m.inputs = {a.segs};
  m.results = {{"words", tables.index.rows()}, {"morphemes", tables.vocab.size()}};
  m.write((dir / "manifest.json").string());
  std::cerr << "words=" << tables.index.rows() << " morphemes=" << tables.vocab.size() << " (including PAD)\n";
  return kExitOk;
}

struct AuditArgs {
  bool paper_tables = false;
  std::string fixture;
  std::string config;
  std::string method;
  std::size_t vocab_size = 0, dim = 0, order = 1, rank = 1, subdim = 0, morphemes = 0;
  std::string vocab_shape, dim_shape;
  std::string out;
};

int cmd_audit(const AuditArgs& a) {
  std::ostringstream tsv;
  int status = kExitOk;
  RunManifest m;
  m.command = "audit";
  if (a.paper_tables || !a.fixture.empty()) {
    std::vector<tenbed::FixtureRow> fixture;
    if (!a.fixture.empty()) {
      std::ifstream in(a.fixture);
      if (!in) throw tenbed::IoError("cannot open fixture '" + a.fixture + "'");
      fixture = tenbed::parse_fixture(in, a.fixture);
      m.inputs.push_back(a.fixture);
    } else {
      fixture = tenbed::paper_fixture();
    }
    const auto checks = tenbed::check_fixture(fixture);
    std::size_t mismatches = 0;
    tsv << "method\tconfig\ttrainable\tconstant\ttotal\tratio\ttable\tdataset\tsetting\treported_M\tcomputed_M\tstatus\n";
    for (const auto& c : checks) {
      std::ostringstream row;
      tenbed::write_audit_tsv_row(row, c.row);
      std::string line = row.str();
      line.pop_back();
      std::ostringstream computed;
      computed << std::fixed << std::setprecision(4) << c.computed_millions;
      tsv << line << '\t' << c.fixture.table << '\t' << c.fixture.dataset << '\t' << c.fixture.setting << '\t'
          << c.fixture.reported << '\t' << computed.str() << '\t' << (c.matches ? "ok" : "MISMATCH") << '\n';
      mismatches += !c.matches;
    }
    std::cerr << checks.size() << " rows, " << mismatches << " mismatches (tolerance ±" << tenbed::kReportedTolerance
              << "M)\n";
    m.results = {{"rows", checks.size()}, {"mismatches", mismatches}};
    if (mismatches) status = kExitCheckFailed;
  } else {
    tenbed::KeyValues kv;
    if (!a.config.empty()) {
      kv = tenbed::KeyValues::load(a.config);
      m.inputs.push_back(a.config);
    }
    if (!a.method.empty()) kv.set("method", a.method);
    if (a.vocab_size) kv.set("vocab_size", std::to_string(a.vocab_size));
    if (a.dim) kv.set("embed_dim", std::to_string(a.dim));
    if (a.order != 1 || !kv.has("order")) kv.set("order", std::to_string(a.order));
    if (a.rank != 1 || !kv.has("rank")) kv.set("rank", std::to_string(a.rank));
    if (a.subdim) kv.set("subdim", std::to_string(a.subdim));
    if (a.morphemes) kv.set("morpheme_vocab_size", std::to_string(a.morphemes));
    if (!a.vocab_shape.empty()) kv.set("vocab_shape", a.vocab_shape);
    if (!a.dim_shape.empty()) kv.set("dim_shape", a.dim_shape);
    const auto config = tenbed::layer_config_from(kv);
    tenbed::write_audit_tsv_header(tsv);
    tenbed::write_audit_tsv_row(tsv, tenbed::count_params(config));
    m.config = config_json(kv);
  }
  if (a.out.empty()) {
    std::cout << tsv.str();
  } else {
    auto out = open_out(a.out);
    out << tsv.str();
    m.write(a.out + ".manifest.json");
  }
  return status;
}

struct GradcheckArgs {
  std::string config;
  std::size_t trials = 20;
  std::optional<std::uint64_t> seed;
  double epsilon = 1e-5;
  double tolerance = 1e-5;
  bool inject_fault = false;
};

int cmd_gradcheck(const GradcheckArgs& a) {
  const auto kv = tenbed::KeyValues::load(a.config);
  const std::uint64_t seed = resolve_seed(a.seed, kv.get_uint_or("seed", 0));
  const auto inputs = prepare_layer(kv, seed, a.config);
  const auto layer = build_from(inputs);

  tenbed::BackwardFn backward_fn = tenbed::backward;
  if (a.inject_fault) {
    // Negative control: a backward that is off by 1% everywhere.
    backward_fn = [](const tenbed::EmbeddingLayer& l, std::size_t w, std::span<const tenbed::Scalar> u) {
      auto slots = tenbed::backward(l, w, u);
      for (auto& s : slots) {
        for (auto& x : s.grad.flat()) x *= 1.01;
      }
      return slots;
    };
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> word_pick(0, layer.vocab_size() - 1);
  std::cout << "word\tmax_rel_error\tparams_checked\tstatus\n";
  double worst = 0.0;
  bool ok = true;
  for (std::size_t t = 0; t < a.trials; ++t) {
    const std::size_t w = word_pick(rng);
    const auto rep = tenbed::finite_diff_check(layer, w, a.epsilon, a.tolerance, rng(), backward_fn);
    std::cout << w << '\t' << std::scientific << std::setprecision(3) << rep.max_rel_error << std::defaultfloat << '\t'
              << rep.params_checked << '\t' << (rep.passed ? "ok" : "FAIL") << '\n';
    worst = std::max(worst, rep.max_rel_error);
    ok = ok && rep.passed;
  }
  std::cerr << tenbed::method_name(layer.config().method) << ": max relative error " << worst << " over " << a.trials
            << " words (tolerance " << a.tolerance << ") " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

struct TrainArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainArgs& a) {
  const auto kv = tenbed::KeyValues::load(a.config);
  const std::uint64_t seed = resolve_seed(a.seed, kv.get_uint_or("seed", 0));
  const auto inputs = prepare_layer(kv, seed, a.config);
  auto layer = build_from(inputs);

  const std::string task_name = kv.get_or("task", "reconstruct");
  const std::size_t epochs = kv.get_uint_or("epochs", 50);
  const std::size_t batch = kv.get_uint_or("batch", 16);
  const double lr = kv.get_double_or("lr", 1e-2);
  const std::string opt_name = kv.get_or("optimizer", "adam");
  tenbed::OptimizerState opt;
  if (opt_name == "adam") {
    opt = tenbed::OptimizerState::adam(lr, kv.get_double_or("beta1", 0.9), kv.get_double_or("beta2", 0.999),
                                       kv.get_double_or("adam_eps", 1e-8));
  } else if (opt_name == "sgd") {
    opt = tenbed::OptimizerState::sgd(lr);
  } else {
    throw tenbed::ConfigError("optimizer must be adam or sgd");
  }

  tenbed::TrainTask task;
  std::vector<tenbed::LabeledPair> heldout;
  if (task_name == "reconstruct") {
    // Target: the table of an independently seeded layer of the same shape.
    auto teacher_inputs = inputs;
    teacher_inputs.config.seed = kv.get_uint_or("teacher_seed", seed + 1);
    task = tenbed::TrainTask::reconstruct(tenbed::embedding_table(build_from(teacher_inputs)));
  } else if (task_name == "similarity") {
    if (!layer.index() || !layer.index()->pad_id()) {
      if (!inputs.morph) throw tenbed::ConfigError("similarity task needs a segmentation (segs or synthetic lexicon)");
    }
    const auto& index = inputs.morph->index;
    auto split = tenbed::shares_morpheme_pairs(index, kv.get_uint_or("train_pairs", 4000),
                                               kv.get_uint_or("heldout_pairs", 1000),
                                               kv.get_double_or("heldout_fraction", 0.2), seed + 7);
    task = tenbed::TrainTask::similarity(std::move(split.train));
    heldout = std::move(split.heldout);
  } else {
    throw tenbed::ConfigError("task must be reconstruct or similarity");
  }

  const auto history = tenbed::train(layer, task, opt, epochs, batch, seed);

  ensure_dir(a.out);
  const fs::path dir(a.out);
  {
    auto out = open_out((dir / "history.csv").string());
    out << "epoch,loss\n" << std::setprecision(17);
    out << 0 << ',' << history.initial_loss << '\n';
    for (std::size_t e = 0; e < history.losses.size(); ++e) out << e + 1 << ',' << history.losses[e] << '\n';
  }
  tenbed::save_checkpoint((dir / "checkpoint.tnbd").string(), layer, inputs.words);

  RunManifest m;
  m.command = "train";
  m.seed = seed;
  m.config = config_json(kv);
  m.inputs = inputs.input_files;
  m.inputs.push_back(a.config);
  m.results = {{"initial_loss", history.initial_loss}, {"final_loss", history.losses.back()}};
  if (!heldout.empty()) m.results["heldout_accuracy"] = tenbed::eval_similarity(layer, heldout);
  m.write((dir / "manifest.json").string());
  std::cerr << "initial loss " << history.initial_loss << ", final loss " << history.losses.back() << '\n';
  if (m.results.contains("heldout_accuracy")) {
    std::cerr << "held-out accuracy " << m.results["heldout_accuracy"].get<double>() << '\n';
  }
  return kExitOk;
}

struct EvalArgs {
  std::string checkpoint;
  std::string words;
  bool all = false;
  std::string pairs;
};

std::size_t word_row(const tenbed::Checkpoint& ck, const std::string& word) {
  if (const auto& index = ck.layer.index(); index && !ck.words.empty()) return index->row_of(word);
  for (std::size_t i = 0; i < ck.words.size(); ++i) {
    if (ck.words[i] == word) return i;
  }
  // Without a word list, rows are addressed as "#<id>".
  if (ck.words.empty() && word.size() > 1 && word[0] == '#') {
    try {
      const auto id = std::stoull(word.substr(1));
      ck.layer.check_word(id);
      return id;
    } catch (const std::invalid_argument&) {
    }
  }
  throw tenbed::LookupError("unknown word '" + word + "'");
}

int cmd_eval(const EvalArgs& a) {
  const auto ck = tenbed::load_checkpoint(a.checkpoint);
  if (!a.pairs.empty()) {
    std::ifstream in(a.pairs);
    if (!in) throw tenbed::IoError("cannot open pairs file '" + a.pairs + "'");
    std::vector<tenbed::LabeledPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string wa, wb;
      int label = -1;
      if (!(ls >> wa >> wb >> label) || (label != 0 && label != 1)) {
        throw tenbed::ParseError(a.pairs, line_no, "expected: word_a word_b label(0/1)");
      }
      pairs.push_back({word_row(ck, wa), word_row(ck, wb), label});
    }
    std::cout << "pairs\taccuracy\n" << pairs.size() << '\t' << tenbed::eval_similarity(ck.layer, pairs) << '\n';
    return kExitOk;
  }

  std::vector<std::pair<std::string, std::size_t>> rows;
  if (a.all) {
    for (std::size_t i = 0; i < ck.layer.vocab_size(); ++i) {
      rows.emplace_back(i < ck.words.size() && !ck.words[i].empty() ? ck.words[i] : "#" + std::to_string(i), i);
    }
  } else {
    std::stringstream ss(a.words);
    std::string w;
    while (std::getline(ss, w, ',')) {
      if (!w.empty()) rows.emplace_back(w, word_row(ck, w));
    }
  }
  std::cout << std::setprecision(17);
  for (const auto& [word, id] : rows) {
    std::cout << word;
    for (double x : ck.layer.forward(id)) std::cout << '\t' << x;
    std::cout << '\n';
  }
  return kExitOk;
}

struct ExportArgs {
  std::string config;
  std::string checkpoint;
  std::string out;
  std::string tsv;
  std::optional<std::uint64_t> seed;
};

int cmd_export(const ExportArgs& a) {
  RunManifest m;
  m.command = "export";
  std::optional<tenbed::Checkpoint> ck;
  if (!a.checkpoint.empty()) {
    ck = tenbed::load_checkpoint(a.checkpoint);
    m.inputs.push_back(a.checkpoint);
    m.seed = ck->layer.config().seed;
  } else {
    if (a.config.empty()) throw tenbed::ConfigError("export needs --config or --checkpoint");
    const auto kv = tenbed::KeyValues::load(a.config);
    const std::uint64_t seed = resolve_seed(a.seed, kv.get_uint_or("seed", 0));
    const auto inputs = prepare_layer(kv, seed, a.config);
    ck = tenbed::Checkpoint{build_from(inputs), inputs.words};
    m.inputs = inputs.input_files;
    m.inputs.push_back(a.config);
    m.seed = seed;
  }
  m.config = config_json(tenbed::to_key_values(ck->layer.config()));
  tenbed::save_checkpoint(a.out, ck->layer, ck->words);
  if (!a.tsv.empty()) {
    auto out = open_out(a.tsv);
    out << std::setprecision(17);
    for (std::size_t i = 0; i < ck->layer.vocab_size(); ++i) {
      out << (i < ck->words.size() && !ck->words[i].empty() ? ck->words[i] : "#" + std::to_string(i));
      for (double x : ck->layer.forward(i)) out << '\t' << x;
      out << '\n';
    }
  }
  m.results = {{"blocks", ck->layer.params().size()}, {"trainable", ck->layer.trainable_param_count()}};
  m.write(a.out + ".manifest.json");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tenbed: tensorized and morphology-aware compressed word embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tenbed::kVersion);

  BuildVocabArgs bv;
  auto* build_vocab = app.add_subcommand("build-vocab", "Build morpheme vocabulary, index matrix and statistics");
  build_vocab->add_option("--segs", bv.segs, "Segmentation TSV (word<TAB>m1 m2 ...)")->required();
  build_vocab->add_option("--order,-n", bv.order, "Morpheme slots per word")->capture_default_str();
  build_vocab->add_option("--out", bv.out, "Output directory")->required();
  build_vocab->add_option("--caps", bv.caps, "Statistics caps, e.g. inf,4,3,2,1")->capture_default_str();
  build_vocab->add_flag("--random-seg", bv.random_seg, "Re-segment every word at two random interior gaps");
  build_vocab->add_option("--seed", bv.seed, "Seed (overrides TENBED_SEED)");

  AuditArgs au;
  auto* audit = app.add_subcommand("audit", "Parameter counts and compression ratios");
  audit->add_flag("--paper-tables", au.paper_tables, "Recompute every published configuration");
  audit->add_option("--fixture", au.fixture, "Fixture TSV with the paper-tables columns");
  audit->add_option("--config", au.config, "key=value layer config");
  audit->add_option("--method", au.method);
  audit->add_option("--vocab-size", au.vocab_size);
  audit->add_option("--dim", au.dim);
  audit->add_option("--order", au.order);
  audit->add_option("--rank", au.rank);
  audit->add_option("--subdim", au.subdim);
  audit->add_option("--morphemes", au.morphemes, "Morpheme vocabulary size |M|");
  audit->add_option("--vocab-shape", au.vocab_shape, "e.g. 18,20,25");
  audit->add_option("--dim-shape", au.dim_shape, "e.g. 8,8,8");
  audit->add_option("--out", au.out, "Write TSV here (plus a manifest) instead of stdout");

  GradcheckArgs gc;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of a layer's backward pass");
  gradcheck->add_option("--config", gc.config, "key=value layer config")->required();
  gradcheck->add_option("--trials", gc.trials)->capture_default_str();
  gradcheck->add_option("--seed", gc.seed);
  gradcheck->add_option("--epsilon", gc.epsilon)->capture_default_str();
  gradcheck->add_option("--tolerance", gc.tolerance)->capture_default_str();
  gradcheck->add_flag("--inject-fault", gc.inject_fault, "Perturb the analytic gradient (negative control)");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train a layer on a reconstruction or similarity task");
  train->add_option("--config", tr.config, "key=value training config")->required();
  train->add_option("--out", tr.out, "Output directory")->required();
  train->add_option("--seed", tr.seed);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Embeddings or pair accuracy from a checkpoint");
  eval->add_option("--checkpoint", ev.checkpoint)->required();
  auto* words_opt = eval->add_option("--words", ev.words, "Comma-separated words");
  auto* all_opt = eval->add_flag("--all", ev.all, "Every row");
  eval->add_option("--pairs", ev.pairs, "word_a word_b label lines; prints accuracy");
  words_opt->excludes(all_opt);

  ExportArgs ex;
  auto* export_cmd = app.add_subcommand("export", "Write a checkpoint (fresh from config, or re-exported)");
  export_cmd->add_option("--config", ex.config);
  export_cmd->add_option("--checkpoint", ex.checkpoint);
  export_cmd->add_option("--out", ex.out)->required();
  export_cmd->add_option("--tsv", ex.tsv, "Also write the embedding table as TSV");
  export_cmd->add_option("--seed", ex.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*build_vocab) return cmd_build_vocab(bv);
    if (*audit) return cmd_audit(au);
    if (*gradcheck) return cmd_gradcheck(gc);
    if (*train) return cmd_train(tr);
    if (*eval) return cmd_eval(ev);
    if (*export_cmd) return cmd_export(ex);
  } catch (const tenbed::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const tenbed::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
