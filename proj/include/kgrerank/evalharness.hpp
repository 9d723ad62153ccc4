// Copyright 2026 The kgrerank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Corpus evaluation of selected responses against gold responses and
// knowledge, plus the z-score comparison across scorer configurations.

#ifndef KGRERANK_EVALHARNESS_HPP_
#define KGRERANK_EVALHARNESS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgrerank/errors.hpp"
#include "kgrerank/metrics.hpp"
#include "kgrerank/textnorm.hpp"

namespace kgrerank {

enum class KnCopyMode {
  kSpan,   // contiguous run of the knowledge tokens
  kExact,  // the whole knowledge, token for token
};

inline constexpr std::size_t kKnCopyMinTokens = 3;

// Whether `selected` reproduces the knowledge verbatim after normalization.
inline bool kn_copy(std::string_view selected, std::string_view knowledge,
                    KnCopyMode mode = KnCopyMode::kSpan,
                    std::size_t min_tokens = kKnCopyMinTokens) {
  const TokenSequence sel = normalize(selected);
  if (sel.empty() || sel.size() < min_tokens) return false;
  const TokenSequence know = normalize(knowledge);
  if (mode == KnCopyMode::kExact) return sel == know;
  return std::search(know.begin(), know.end(), sel.begin(), sel.end()) !=
         know.end();
}

struct EvalItem {
  std::string id;
  std::string knowledge;
  std::optional<std::string> gold;
  std::string selected;
  bool fallback_used = false;
};

struct CorpusReport {
  std::string split_name;
  std::size_t n_examples = 0;
  double bleu4 = 0.0;  // [0, 100]
  double rouge_l = 0.0;
  double f1 = 0.0;
  double kf1 = 0.0;
  double kn_copy_rate = 0.0;
  double fallback_rate = 0.0;
};

inline CorpusReport evaluate_corpus(std::span<const EvalItem> items,
                                    std::string split_name = "test",
                                    KnCopyMode mode = KnCopyMode::kSpan) {
  if (items.empty()) throw EmptyCorpus("evaluate_corpus needs predictions");
  for (const auto& it : items)
    if (!it.gold) throw MissingGold(it.id);

  std::vector<std::pair<TokenSequence, TokenSequence>> pairs;
  pairs.reserve(items.size());
  double f1 = 0.0, kf = 0.0;
  std::size_t copies = 0, fallbacks = 0;
  for (const auto& it : items) {
    TokenSequence hyp = normalize(it.selected);
    TokenSequence gold = normalize(*it.gold);
    f1 += unigram_f1(hyp, gold).f1;
    kf += unigram_f1(hyp, normalize(it.knowledge)).f1;
    copies += kn_copy(it.selected, it.knowledge, mode);
    fallbacks += it.fallback_used;
    pairs.emplace_back(std::move(hyp), std::move(gold));
  }
  const double n = static_cast<double>(items.size());
  CorpusReport r;
  r.split_name = std::move(split_name);
  r.n_examples = items.size();
  r.bleu4 = corpus_bleu4(pairs).score;
  r.rouge_l = mean_rouge_l(pairs);
  r.f1 = f1 / n;
  r.kf1 = kf / n;
  r.kn_copy_rate = static_cast<double>(copies) / n;
  r.fallback_rate = static_cast<double>(fallbacks) / n;
  return r;
}

// ---------------------------------------------------------------------------
// Configuration comparison

struct ConfigLabel {
  std::string relevance;
  std::string faithfulness;

  friend bool operator==(const ConfigLabel&, const ConfigLabel&) = default;
};

inline constexpr std::array<std::string_view, 4> kComparedMetrics = {
    "bleu4", "rouge_l", "f1", "kf1"};

struct ComparisonGrid {
  std::vector<std::string> rows;  // relevance configs
  std::vector<std::string> cols;  // faithfulness configs
  // cells[row][col]; empty where no report was supplied.
  std::vector<std::vector<std::optional<double>>> cells;

  // Per input config, in input order.
  std::vector<ConfigLabel> configs;
  std::array<std::vector<double>, 4> normalized;  // indexed like kComparedMetrics
  std::vector<double> totals;
};

// z-scores of `values` with the population standard deviation; all zeros
// when the values do not vary.
inline std::vector<double> zscores(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out(values.size(), 0.0);
  if (sd > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out[i] = (values[i] - mean) / sd;
  }
  return out;
}

inline ComparisonGrid compare_configs(
    std::span<const std::pair<ConfigLabel, CorpusReport>> reports) {
  if (reports.size() < 2) throw TooFewConfigs(reports.size());
  ComparisonGrid g;
  auto index_of = [](std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
    v.push_back(s);
    return v.size() - 1;
  };

  std::array<std::vector<double>, 4> raw;
  for (const auto& [label, rep] : reports) {
    if (std::find(g.configs.begin(), g.configs.end(), label) != g.configs.end()) {
      throw ConfigError("duplicate config " + label.relevance + " / " +
                        label.faithfulness);
    }
    g.configs.push_back(label);
    raw[0].push_back(rep.bleu4);
    raw[1].push_back(rep.rouge_l);
    raw[2].push_back(rep.f1);
    raw[3].push_back(rep.kf1);
  }
  for (std::size_t m = 0; m < raw.size(); ++m) g.normalized[m] = zscores(raw[m]);

  g.totals.assign(reports.size(), 0.0);
  for (std::size_t c = 0; c < reports.size(); ++c)
    for (const auto& col : g.normalized) g.totals[c] += col[c];

  std::vector<std::pair<std::size_t, std::size_t>> pos;
  for (const auto& label : g.configs)
    pos.emplace_back(index_of(g.rows, label.relevance),
                     index_of(g.cols, label.faithfulness));
  g.cells.assign(g.rows.size(),
                 std::vector<std::optional<double>>(g.cols.size()));
  for (std::size_t c = 0; c < pos.size(); ++c)
    g.cells[pos[c].first][pos[c].second] = g.totals[c];
  return g;
}

// ---------------------------------------------------------------------------
// Human-readable output

inline std::string format_report_text(const CorpusReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%-14s %8s %8s %8s %8s %8s %9s %9s\n"
                "%-14s %8zu %8.2f %8.2f %7.2f%% %7.2f%% %8.2f%% %8.2f%%\n",
                "split", "n", "BLEU-4", "ROUGE-L", "F1", "KF1", "Kn-copy",
                "fallback", r.split_name.c_str(), r.n_examples, r.bleu4,
                100.0 * r.rouge_l, 100.0 * r.f1, 100.0 * r.kf1,
                100.0 * r.kn_copy_rate, 100.0 * r.fallback_rate);
  return buf;
}

inline std::string format_grid_text(const ComparisonGrid& g) {
  std::size_t w0 = 10;
  for (const auto& r : g.rows) w0 = std::max(w0, r.size());
  std::size_t wc = 10;
  for (const auto& c : g.cols) wc = std::max(wc, c.size());

  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = pad("", w0);
  for (const auto& c : g.cols) out += "  " + pad(c, wc);
  out += '\n';
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    out += pad(g.rows[i], w0);
    for (std::size_t j = 0; j < g.cols.size(); ++j) {
      std::string cell = "-";
      if (g.cells[i][j]) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%+.4f", *g.cells[i][j]);
        cell = buf;
      }
      out += "  " + pad(cell, wc);
    }
    out += '\n';
  }
  return out;
}

}  // namespace kgrerank

#endif  // KGRERANK_EVALHARNESS_HPP_
