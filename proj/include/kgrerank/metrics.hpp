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

// Overlap metrics over token sequences: unigram P/R/F1 (KF1 is F1 against
// the knowledge snippet), BLEU-4 at corpus and sentence level, ROUGE-L.
//
// All functions are templates over any random-access range of string-like
// tokens, so TokenSequence, std::vector<std::string> and spans of
// string_view all work.

#ifndef KGRERANK_METRICS_HPP_
#define KGRERANK_METRICS_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgrerank/errors.hpp"
#include "kgrerank/textnorm.hpp"

namespace kgrerank {

template <class R>
concept TokenRange =
    std::ranges::random_access_range<R> && std::ranges::sized_range<R> &&
    std::convertible_to<std::ranges::range_reference_t<R>, std::string_view>;

struct F1Triple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const F1Triple&, const F1Triple&) = default;
};

namespace metrics_detail {

inline F1Triple f1_from_counts(std::size_t overlap, std::size_t hyp_len,
                               std::size_t ref_len) {
  if (overlap == 0 || hyp_len == 0 || ref_len == 0) return {};
  F1Triple out;
  out.precision = static_cast<double>(overlap) / static_cast<double>(hyp_len);
  out.recall = static_cast<double>(overlap) / static_cast<double>(ref_len);
  out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

// Key for an n-gram starting at `start`. The unit separator cannot appear in
// a normalized token.
template <TokenRange R>
std::string ngram_key(const R& toks, std::size_t start, std::size_t n) {
  std::string key;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) key.push_back('\x1f');
    key += std::string_view(toks[start + i]);
  }
  return key;
}

template <TokenRange R>
std::unordered_map<std::string, std::size_t> ngram_counts(const R& toks,
                                                          std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  const std::size_t len = std::ranges::size(toks);
  if (len < n) return counts;
  for (std::size_t i = 0; i + n <= len; ++i) ++counts[ngram_key(toks, i, n)];
  return counts;
}

}  // namespace metrics_detail

// Size of the multiset intersection of the two token bags.
template <TokenRange H, TokenRange R>
std::size_t unigram_overlap(const H& hyp, const R& ref) {
  std::unordered_map<std::string_view, std::size_t> bag;
  bag.reserve(std::ranges::size(ref));
  for (const auto& t : ref) ++bag[std::string_view(t)];
  std::size_t overlap = 0;
  for (const auto& t : hyp) {
    auto it = bag.find(std::string_view(t));
    if (it != bag.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return overlap;
}

template <TokenRange H, TokenRange R>
F1Triple unigram_f1(const H& hyp, const R& ref) {
  return metrics_detail::f1_from_counts(unigram_overlap(hyp, ref),
                                        std::ranges::size(hyp),
                                        std::ranges::size(ref));
}

// Knowledge F1: unigram F1 of the normalized response against the
// normalized knowledge snippet.
inline F1Triple kf1(std::string_view response, std::string_view knowledge) {
  return unigram_f1(normalize(response), normalize(knowledge));
}

// ---------------------------------------------------------------------------
// BLEU-4

inline constexpr std::size_t kBleuOrder = 4;

// Sufficient statistics for BLEU-4; additive over segments.
struct BleuStats {
  std::array<std::size_t, kBleuOrder> matches{};
  std::array<std::size_t, kBleuOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& o) {
    for (std::size_t n = 0; n < kBleuOrder; ++n) {
      matches[n] += o.matches[n];
      totals[n] += o.totals[n];
    }
    hyp_len += o.hyp_len;
    ref_len += o.ref_len;
    return *this;
  }
};

template <TokenRange H, TokenRange R>
BleuStats bleu_stats(const H& hyp, const R& ref) {
  BleuStats s;
  s.hyp_len = std::ranges::size(hyp);
  s.ref_len = std::ranges::size(ref);
  for (std::size_t n = 1; n <= kBleuOrder; ++n) {
    const auto h = metrics_detail::ngram_counts(hyp, n);
    const auto r = metrics_detail::ngram_counts(ref, n);
    std::size_t clipped = 0;
    for (const auto& [gram, count] : h) {
      auto it = r.find(gram);
      if (it != r.end()) clipped += std::min(count, it->second);
    }
    s.matches[n - 1] = clipped;
    s.totals[n - 1] = s.hyp_len >= n ? s.hyp_len - n + 1 : 0;
  }
  return s;
}

inline double brevity_penalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len >= ref_len) return 1.0;
  // An empty hypothesis gets exp(-inf) == 0.
  if (hyp_len == 0) return 0.0;
  return std::exp(1.0 - static_cast<double>(ref_len) /
                            static_cast<double>(hyp_len));
}

struct CorpusBleu {
  double score = 0.0;  // [0, 100]
  std::array<double, kBleuOrder> precisions{};
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

// Unsmoothed BLEU-4 from accumulated statistics.
inline CorpusBleu bleu_from_stats(const BleuStats& s) {
  CorpusBleu out;
  out.hyp_len = s.hyp_len;
  out.ref_len = s.ref_len;
  out.brevity_penalty = kgrerank::brevity_penalty(s.hyp_len, s.ref_len);
  bool any_zero = false;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    out.precisions[n] =
        s.totals[n] == 0 ? 0.0
                         : static_cast<double>(s.matches[n]) /
                               static_cast<double>(s.totals[n]);
    if (out.precisions[n] == 0.0) {
      any_zero = true;
    } else {
      log_sum += std::log(out.precisions[n]);
    }
  }
  out.score = any_zero ? 0.0
                       : 100.0 * out.brevity_penalty *
                             std::exp(log_sum / static_cast<double>(kBleuOrder));
  return out;
}

// Single-reference corpus BLEU-4: clipped n-gram counts and lengths are
// summed over all segments before precisions are taken.
template <class Pairs>
  requires std::ranges::input_range<Pairs>
CorpusBleu corpus_bleu4(const Pairs& pairs) {
  BleuStats total;
  std::size_t n = 0;
  for (const auto& [hyp, ref] : pairs) {
    total += bleu_stats(hyp, ref);
    ++n;
  }
  if (n == 0) throw EmptyCorpus("corpus_bleu4 needs at least one pair");
  return bleu_from_stats(total);
}

// Sentence BLEU-4 with exponential smoothing: the k-th n-gram order with no
// match gets precision 1 / (2^k * max(total, 1)). No unigram match at all,
// or an empty hypothesis, scores 0.
template <TokenRange H, TokenRange R>
double sentence_bleu4(const H& hyp, const R& ref) {
  const BleuStats s = bleu_stats(hyp, ref);
  if (s.hyp_len == 0 || s.matches[0] == 0) return 0.0;
  double log_sum = 0.0;
  double backoff = 1.0;
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    const double denom = static_cast<double>(std::max<std::size_t>(s.totals[n], 1));
    if (s.matches[n] == 0) {
      backoff *= 2.0;
      log_sum += std::log(1.0 / (backoff * denom));
    } else {
      log_sum += std::log(static_cast<double>(s.matches[n]) / denom);
    }
  }
  return 100.0 * brevity_penalty(s.hyp_len, s.ref_len) *
         std::exp(log_sum / static_cast<double>(kBleuOrder));
}

// ---------------------------------------------------------------------------
// ROUGE-L

// Length of the longest common subsequence, bit-parallel over the tokens of
// `a` (Hyyro's formulation of the Allison-Dix recurrence): one multiword
// add/or per token of `b`, O(|b| * |a| / 64).
template <TokenRange A, TokenRange B>
std::size_t lcs_length(const A& a, const B& b) {
  const std::size_t m = std::ranges::size(a);
  if (m == 0 || std::ranges::size(b) == 0) return 0;
  const std::size_t words = (m + 63) / 64;

  std::unordered_map<std::string_view, std::vector<std::uint64_t>> match;
  for (std::size_t i = 0; i < m; ++i) {
    auto& bits = match[std::string_view(a[i])];
    if (bits.empty()) bits.assign(words, 0);
    bits[i / 64] |= std::uint64_t{1} << (i % 64);
  }

  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  for (const auto& tok : b) {
    auto it = match.find(std::string_view(tok));
    if (it == match.end()) continue;  // U == 0 leaves V unchanged
    const auto& mask = it->second;
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t u = v[w] & mask[w];
      const std::uint64_t sum = v[w] + u;
      const std::uint64_t c1 = sum < v[w];
      const std::uint64_t sum2 = sum + carry;
      const std::uint64_t c2 = sum2 < sum;
      v[w] = sum2 | (v[w] & ~mask[w]);
      carry = c1 | c2;
    }
  }

  std::size_t zeros = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t word = ~v[w];
    const std::size_t used = (w + 1 == words) ? m - w * 64 : 64;
    if (used < 64) word &= (std::uint64_t{1} << used) - 1;
    zeros += static_cast<std::size_t>(std::popcount(word));
  }
  return zeros;
}

template <TokenRange H, TokenRange R>
F1Triple rouge_l(const H& hyp, const R& ref) {
  return metrics_detail::f1_from_counts(lcs_length(hyp, ref),
                                        std::ranges::size(hyp),
                                        std::ranges::size(ref));
}

// Arithmetic mean of per-pair ROUGE-L F1.
template <class Pairs>
  requires std::ranges::input_range<Pairs>
double mean_rouge_l(const Pairs& pairs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [hyp, ref] : pairs) {
    sum += rouge_l(hyp, ref).f1;
    ++n;
  }
  if (n == 0) throw EmptyCorpus("mean_rouge_l needs at least one pair");
  return sum / static_cast<double>(n);
}

}  // namespace kgrerank

#endif  // KGRERANK_METRICS_HPP_
