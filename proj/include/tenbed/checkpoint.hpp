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

// Binary checkpoint of an EmbeddingLayer. All integers are little-endian;
// see docs/checkpoint_format.md for the byte layout.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tenbed/embedding.hpp"
#include "tenbed/errors.hpp"
#include "tenbed/kv_config.hpp"

namespace tenbed {

inline constexpr std::array<char, 8> kCheckpointMagic = {'T', 'N', 'B', 'D', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  EmbeddingLayer layer;
  std::vector<std::string> words;  // row -> word string; may be empty
};

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 4);
}

inline void put_string(std::ostream& out, const std::string& s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw ParseError(source_, 0, "truncated checkpoint");
  }

  std::uint64_t u64() {
    unsigned char buf[8];
    bytes(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }

  std::uint32_t u32() {
    unsigned char buf[4];
    bytes(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }

  std::uint8_t u8() {
    char c;
    bytes(&c, 1);
    return static_cast<std::uint8_t>(c);
  }

  std::string str(std::uint64_t limit = 1u << 30) {
    const std::uint64_t n = u64();
    if (n > limit) throw ParseError(source_, 0, "string length out of range");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

  // Guards allocations driven by counts read from the file.
  void check_count(std::uint64_t count, std::uint64_t limit, const char* what) {
    if (count > limit) throw ParseError(source_, 0, std::string("implausible ") + what + " in checkpoint");
  }

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace detail

inline void save_checkpoint(std::ostream& out, const EmbeddingLayer& layer, const std::vector<std::string>& words = {}) {
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  detail::put_u32(out, kCheckpointVersion);

  KeyValues manifest = to_key_values(layer.config());
  manifest.set("format_version", std::to_string(kCheckpointVersion));
  detail::put_string(out, manifest.serialize());

  detail::put_u64(out, layer.params().size());
  for (const auto& p : layer.params()) {
    detail::put_string(out, p.name);
    detail::put_u64(out, p.value.rows());
    detail::put_u64(out, p.value.cols());
    for (Scalar x : p.value.flat()) detail::put_u64(out, std::bit_cast<std::uint64_t>(x));
  }

  const auto& index = layer.index();
  out.put(index ? 1 : 0);
  if (index) {
    detail::put_u64(out, index->rows());
    detail::put_u64(out, index->order());
    out.put(index->pad_id() ? 1 : 0);
    detail::put_u64(out, static_cast<std::uint64_t>(index->pad_id().value_or(0)));
    for (auto id : index->ids()) detail::put_u64(out, static_cast<std::uint64_t>(id));
  }

  const std::vector<std::string>& names = (index && words.empty()) ? index->words() : words;
  detail::put_u64(out, names.size());
  for (const auto& w : names) detail::put_string(out, w);
  if (!out) throw IoError("failed writing checkpoint");
}

inline void save_checkpoint(const std::string& path, const EmbeddingLayer& layer,
                            const std::vector<std::string>& words = {}) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  save_checkpoint(out, layer, words);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline Checkpoint load_checkpoint(std::istream& in, const std::string& source = "<checkpoint>") {
  detail::Reader rd(in, source);
  std::array<char, 8> magic{};
  rd.bytes(magic.data(), magic.size());
  if (magic != kCheckpointMagic) throw ParseError(source, 0, "not a tenbed checkpoint (bad magic)");
  const std::uint32_t version = rd.u32();
  if (version != kCheckpointVersion) {
    throw VersionMismatch(source + ": checkpoint format version " + std::to_string(version) +
                          " is not supported (expected " + std::to_string(kCheckpointVersion) + ")");
  }

  std::istringstream manifest_text(rd.str(1u << 20));
  const KeyValues manifest = KeyValues::parse(manifest_text, source + " manifest");
  if (manifest.get_uint_or("format_version", 0) != kCheckpointVersion) {
    throw VersionMismatch(source + ": manifest format_version does not match header");
  }
  LayerConfig config = layer_config_from(manifest);

  const std::uint64_t block_count = rd.u64();
  rd.check_count(block_count, 1u << 16, "block count");
  std::vector<ParamBlock> params;
  for (std::uint64_t b = 0; b < block_count; ++b) {
    ParamBlock p;
    p.name = rd.str(1024);
    const std::uint64_t rows = rd.u64(), cols = rd.u64();
    rd.check_count(rows, 1ull << 32, "row count");
    rd.check_count(cols, 1ull << 32, "column count");
    rd.check_count(rows * cols, 1ull << 34, "block size");
    std::vector<Scalar> data(rows * cols);
    for (auto& x : data) x = std::bit_cast<Scalar>(rd.u64());
    p.value = DenseMat(rows, cols, std::move(data));
    params.push_back(std::move(p));
  }

  std::optional<IndexMatrix> index;
  std::vector<std::int64_t> ids;
  std::uint64_t index_rows = 0, index_order = 0;
  std::optional<std::int64_t> pad;
  if (rd.u8()) {
    index_rows = rd.u64();
    index_order = rd.u64();
    rd.check_count(index_rows * index_order, 1ull << 34, "index size");
    const bool has_pad = rd.u8() != 0;
    const auto pad_value = static_cast<std::int64_t>(rd.u64());
    if (has_pad) pad = pad_value;
    ids.resize(index_rows * index_order);
    for (auto& id : ids) id = static_cast<std::int64_t>(rd.u64());
  }

  const std::uint64_t word_count = rd.u64();
  rd.check_count(word_count, 1ull << 32, "word count");
  std::vector<std::string> words;
  words.reserve(word_count);
  for (std::uint64_t i = 0; i < word_count; ++i) words.push_back(rd.str(1u << 16));

  if (index_order) {
    std::vector<std::string> index_words = (words.size() == index_rows) ? words : std::vector<std::string>(index_rows);
    index = IndexMatrix(index_order, std::move(index_words), std::move(ids), pad);
  }
  return {EmbeddingLayer::from_parts(std::move(config), std::move(params), std::move(index)), std::move(words)};
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  return load_checkpoint(in, path);
}

}  // namespace tenbed
