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

// Closed-form parameter counts, compression ratios and the regression audit
// against published layer configurations.

#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tenbed/errors.hpp"
#include "tenbed/layer_config.hpp"
#include "tenbed/paper_tables.hpp"

namespace tenbed {

// Exact non-negative rational, kept reduced.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational of(std::uint64_t n, std::uint64_t d) {
    if (d == 0) throw InvalidArgument("Rational: zero denominator");
    const std::uint64_t g = std::gcd(n, d);
    return {n / (g ? g : 1), d / (g ? g : 1)};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

struct AuditRow {
  Method method = Method::kOriginal;
  std::string config_summary;
  std::uint64_t trainable = 0;
  std::uint64_t constant = 0;  // non-trainable storage (index matrices)
  Rational ratio;              // |V| d / (trainable + constant)

  std::uint64_t total() const { return trainable + constant; }
};

namespace detail {

inline std::string join_shape(const std::vector<std::size_t>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "x" : "") + std::to_string(s[i]);
  return out;
}

inline std::string summarize(const LayerConfig& c, std::optional<std::size_t> m) {
  std::ostringstream os;
  os << "V=" << c.vocab_size << " d=" << c.embed_dim;
  switch (c.method) {
    case Method::kOriginal:
      break;
    case Method::kMatrixFactor:
      os << " r=" << c.rank;
      break;
    case Method::kTensorTrain:
    case Method::kWord2ketXS:
      os << " n=" << c.order << " r=" << c.rank << " dV=" << join_shape(c.vocab_shape)
         << " dd=" << join_shape(c.dim_shape);
      break;
    case Method::kWord2ket:
      os << " n=" << c.order << " r=" << c.rank << " q=" << c.resolved_subdim();
      break;
    case Method::kMorphTE:
    case Method::kWord2ketRshare:
      os << " M=" << m.value_or(0) << " n=" << c.order << " r=" << c.rank << " q=" << c.resolved_subdim();
      break;
    case Method::kMorphSum:
    case Method::kMorphLSTM:
      os << " M=" << m.value_or(0);
      break;
  }
  return os.str();
}

}  // namespace detail

// Parameter count of a layer configuration. TT and Word2ketXS are counted
// from their explicit mode shapes; |M| comes from `morpheme_vocab_size` or,
// failing that, from the config.
inline AuditRow count_params(const LayerConfig& c, std::optional<std::size_t> morpheme_vocab_size = std::nullopt) {
  using u64 = std::uint64_t;
  const u64 V = c.vocab_size, d = c.embed_dim, n = c.order, r = c.rank;
  std::optional<std::size_t> M = morpheme_vocab_size;
  if (!M && c.morpheme_vocab_size) M = c.morpheme_vocab_size;

  const bool morphological = c.method == Method::kMorphTE || c.method == Method::kMorphSum ||
                             c.method == Method::kMorphLSTM || c.method == Method::kWord2ketRshare;
  if (morphological && !M) {
    throw ConfigError(std::string(method_name(c.method)) + ": morpheme vocabulary size |M| is required");
  }
  if (c.method != Method::kMorphLSTM) validate(c);

  AuditRow row;
  row.method = c.method;
  row.config_summary = detail::summarize(c, M);
  switch (c.method) {
    case Method::kOriginal:
      row.trainable = V * d;
      break;
    case Method::kMatrixFactor:
      row.trainable = r * (V + d);
      break;
    case Method::kWord2ket:
      row.trainable = r * n * V * c.resolved_subdim();
      break;
    case Method::kWord2ketXS:
      for (std::size_t j = 0; j < n; ++j) row.trainable += r * c.vocab_shape[j] * c.dim_shape[j];
      break;
    case Method::kTensorTrain:
      for (std::size_t k = 0; k < n; ++k) {
        const u64 vd = static_cast<u64>(c.vocab_shape[k]) * c.dim_shape[k];
        row.trainable += (k == 0 || k + 1 == n) ? vd * r : vd * r * r;
      }
      break;
    case Method::kMorphTE:
    case Method::kWord2ketRshare:
      row.trainable = static_cast<u64>(*M) * c.resolved_subdim() * r;
      row.constant = V * n;
      break;
    case Method::kMorphSum:
      row.trainable = (V + *M) * d;
      break;
    case Method::kMorphLSTM:
      row.trainable = static_cast<u64>(*M) * d + 8 * d * d;
      break;
  }
  row.ratio = Rational::of(V * d, row.total());
  return row;
}

// Idealised equal-split complexity formulas (|V|^(1/n), d^(1/n) real-valued).
inline double closed_form_params(Method method, double V, double d, double n, double r, double M = 0.0) {
  const double vroot = std::pow(V, 1.0 / n), droot = std::pow(d, 1.0 / n);
  switch (method) {
    case Method::kOriginal: return V * d;
    case Method::kMatrixFactor: return r * (V + d);
    case Method::kWord2ket: return r * n * V * droot;
    case Method::kWord2ketXS: return r * n * vroot * droot;
    case Method::kTensorTrain: return ((n - 2.0) * r * r + 2.0 * r) * vroot * droot;
    case Method::kMorphTE:
    case Method::kWord2ketRshare: return M * droot * r + V * n;
    case Method::kMorphSum: return (V + M) * d;
    case Method::kMorphLSTM: return M * d + 8.0 * d * d;
  }
  return 0.0;
}

// Trainable-parameter ratio Word2ket / MorphTE at equal r and q: n|V|/|M|.
inline Rational savings_ratio_vs_word2ket(std::size_t vocab_size, std::size_t morpheme_vocab_size, std::size_t n) {
  if (vocab_size == 0 || morpheme_vocab_size == 0 || n == 0) {
    throw InvalidArgument("savings_ratio_vs_word2ket: arguments must be positive");
  }
  return Rational::of(static_cast<std::uint64_t>(n) * vocab_size, morpheme_vocab_size);
}

// ---------------------------------------------------------------------------
// Published-configuration fixture.

struct FixtureRow {
  std::string table;
  std::string dataset;
  std::string setting;  // e.g. "20x", "40x", "-"
  LayerConfig config;
  std::optional<std::size_t> morpheme_vocab_size;
  std::string reported;  // #Emb as printed, in millions
  std::size_t line = 0;
};

struct TableCheck {
  FixtureRow fixture;
  AuditRow row;
  double reported_millions = 0.0;
  double computed_millions = 0.0;
  bool matches = false;
};

// Absolute tolerance on #Emb, in millions of parameters.
inline constexpr double kReportedTolerance = 0.005;

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

inline std::size_t parse_size(const std::string& s, const std::string& source, std::size_t line) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError(source, line, "expected a non-negative integer, got '" + s + "'");
  }
}

inline std::vector<std::size_t> parse_shape(const std::string& s, const std::string& source, std::size_t line) {
  std::vector<std::size_t> out;
  if (s == "-") return out;
  std::size_t start = 0;
  for (;;) {
    const auto x = s.find('x', start);
    out.push_back(parse_size(s.substr(start, x == std::string::npos ? std::string::npos : x - start), source, line));
    if (x == std::string::npos) break;
    start = x + 1;
  }
  return out;
}

}  // namespace detail

// Columns: table dataset setting method V d n r q M vocab_shape dim_shape
// reported_emb_M. "-" marks a field that does not apply.
inline std::vector<FixtureRow> parse_fixture(std::istream& in, const std::string& source = "<fixture>") {
  std::vector<FixtureRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto f = detail::split_tabs(line);
    if (!header_seen) {
      header_seen = true;
      if (f.size() > 0 && f[0] == "table") continue;
    }
    if (f.size() != 13) throw ParseError(source, line_no, "expected 13 columns, got " + std::to_string(f.size()));
    auto num = [&](const std::string& s, std::size_t fallback) {
      return s == "-" ? fallback : detail::parse_size(s, source, line_no);
    };
    FixtureRow row;
    row.table = f[0];
    row.dataset = f[1];
    row.setting = f[2];
    try {
      row.config.method = parse_method(f[3]);
    } catch (const ConfigError& e) {
      throw ParseError(source, line_no, e.what());
    }
    row.config.vocab_size = num(f[4], 0);
    row.config.embed_dim = num(f[5], 0);
    row.config.order = num(f[6], 1);
    row.config.rank = num(f[7], 1);
    row.config.subdim = num(f[8], 0);
    if (f[9] != "-") row.morpheme_vocab_size = num(f[9], 0);
    row.config.vocab_shape = detail::parse_shape(f[10], source, line_no);
    row.config.dim_shape = detail::parse_shape(f[11], source, line_no);
    row.reported = f[12];
    row.line = line_no;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<FixtureRow> paper_fixture() {
  std::istringstream in{std::string(kPaperTablesTsv)};
  return parse_fixture(in, "<embedded reference tables>");
}

inline std::vector<TableCheck> check_fixture(const std::vector<FixtureRow>& fixture) {
  std::vector<TableCheck> checks;
  checks.reserve(fixture.size());
  for (const auto& f : fixture) {
    TableCheck c;
    c.fixture = f;
    c.row = count_params(f.config, f.morpheme_vocab_size);
    c.computed_millions = static_cast<double>(c.row.total()) / 1e6;
    c.reported_millions = std::stod(f.reported);
    c.matches = std::abs(c.computed_millions - c.reported_millions) <= kReportedTolerance + 1e-12;
    checks.push_back(std::move(c));
  }
  return checks;
}

// Recomputes every #Emb value of the embedded published configurations.
inline std::vector<TableCheck> reproduce_paper_tables() { return check_fixture(paper_fixture()); }

inline std::string format_ratio(const Rational& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << r.value();
  return os.str();
}

inline void write_audit_tsv_header(std::ostream& out) { out << "method\tconfig\ttrainable\tconstant\ttotal\tratio\n"; }

inline void write_audit_tsv_row(std::ostream& out, const AuditRow& row) {
  out << method_name(row.method) << '\t' << row.config_summary << '\t' << row.trainable << '\t' << row.constant
      << '\t' << row.total() << '\t' << format_ratio(row.ratio) << '\n';
}

}  // namespace tenbed
