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

// `key = value` configuration files: one pair per line, `#` starts a
// comment, surrounding whitespace and optional double quotes are stripped.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tenbed/errors.hpp"
#include "tenbed/layer_config.hpp"

namespace tenbed {

class KeyValues {
 public:
  static KeyValues parse(std::istream& in, const std::string& source = "<config>") {
    KeyValues kv;
    kv.source_ = source;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(source, line_no, "expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      if (key.empty()) throw ParseError(source, line_no, "empty key");
      kv.values_[key] = value;
    }
    return kv;
  }

  static KeyValues load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(source_ + ": missing key '" + key + "'");
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::uint64_t get_uint(const std::string& key) const { return to_uint(key, get(key)); }
  std::uint64_t get_uint_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint(key) : fallback;
  }

  double get_double_or(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key);
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(source_ + ": '" + key + "' is not a number: '" + v + "'");
    }
  }

  // Comma- or x-separated list of positive integers, e.g. "18,20,25" or "18x20x25".
  std::vector<std::size_t> get_shape_or(const std::string& key, std::vector<std::size_t> fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::size_t> out;
    std::string item;
    for (char ch : get(key) + ",") {
      if (ch == ',' || ch == 'x') {
        if (!trim(item).empty()) out.push_back(static_cast<std::size_t>(to_uint(key, trim(item))));
        item.clear();
      } else {
        item += ch;
      }
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::string serialize() const {
    std::ostringstream os;
    for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
    return os.str();
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::uint64_t to_uint(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      if (!v.empty() && v.front() == '-') throw std::invalid_argument(v);
      const unsigned long long u = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return u;
    } catch (const std::exception&) {
      throw ConfigError(source_ + ": '" + key + "' is not a non-negative integer: '" + v + "'");
    }
  }

  std::string source_ = "<config>";
  std::map<std::string, std::string> values_;
};

inline std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) out += (i ? "," : "") + std::to_string(shape[i]);
  return out;
}

// Keys: method, vocab_size, embed_dim, order, rank, subdim, vocab_shape,
// dim_shape, morpheme_vocab_size, seed.
inline LayerConfig layer_config_from(const KeyValues& kv) {
  LayerConfig c;
  c.method = parse_method(kv.get("method"));
  c.vocab_size = kv.get_uint_or("vocab_size", 0);
  c.embed_dim = kv.get_uint("embed_dim");
  c.order = kv.get_uint_or("order", 1);
  c.rank = kv.get_uint_or("rank", 1);
  c.subdim = kv.get_uint_or("subdim", 0);
  c.vocab_shape = kv.get_shape_or("vocab_shape", {});
  c.dim_shape = kv.get_shape_or("dim_shape", {});
  c.morpheme_vocab_size = kv.get_uint_or("morpheme_vocab_size", 0);
  c.seed = kv.get_uint_or("seed", 0);
  return c;
}

inline KeyValues to_key_values(const LayerConfig& c) {
  KeyValues kv;
  kv.set("method", std::string(method_name(c.method)));
  kv.set("vocab_size", std::to_string(c.vocab_size));
  kv.set("embed_dim", std::to_string(c.embed_dim));
  kv.set("order", std::to_string(c.order));
  kv.set("rank", std::to_string(c.rank));
  kv.set("subdim", std::to_string(c.subdim));
  kv.set("vocab_shape", shape_string(c.vocab_shape));
  kv.set("dim_shape", shape_string(c.dim_shape));
  kv.set("morpheme_vocab_size", std::to_string(c.morpheme_vocab_size));
  kv.set("seed", std::to_string(c.seed));
  return kv;
}

}  // namespace tenbed
