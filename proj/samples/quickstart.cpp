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

// Builds a tiny MorphTE layer from three segmented words, prints the
// embeddings and the parameter audit, then takes a few Adam steps.

#include <iostream>
#include <sstream>

#include "tenbed/tenbed.hpp"

int main() {
  std::istringstream segs_text(
      "unkindly\tun kind ly\n"
      "unkindness\tun kind ness\n"
      "kindly\tkind ly\n");
  const auto segs = tenbed::parse_segmentations(segs_text, "inline");
  const auto tables = tenbed::build_vocab_and_index(segs, 3);

  tenbed::LayerConfig config;
  config.method = tenbed::Method::kMorphTE;
  config.vocab_size = segs.size();
  config.embed_dim = 8;
  config.order = 3;
  config.rank = 2;
  config.seed = 42;
  auto layer = tenbed::build_layer(config, &tables.vocab, &tables.index);

  std::cout << "|M| = " << tables.vocab.size() << " (including PAD)\n";
  for (std::size_t w = 0; w < layer.vocab_size(); ++w) {
    std::cout << tables.index.word(w);
    for (double x : layer.forward(w)) std::cout << ' ' << x;
    std::cout << '\n';
  }

  tenbed::write_audit_tsv_header(std::cout);
  tenbed::write_audit_tsv_row(std::cout, tenbed::count_params(config, tables.vocab.size()));

  // Pull "unkindly" and "kindly" together.
  auto task = tenbed::TrainTask::similarity({{0, 2, 1}, {1, 2, 0}});
  auto opt = tenbed::OptimizerState::adam(0.05);
  const auto history = tenbed::train(layer, task, opt, 30, 2, 7);
  std::cout << "loss " << history.initial_loss << " -> " << history.losses.back() << '\n';
  return 0;
}
