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

// Test-only oracles and generators. The oracles are deliberately naive and
// share no code with the library.

#ifndef KGRERANK_TESTS_TEST_SUPPORT_HPP_
#define KGRERANK_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "kgrerank/reranker.hpp"
#include "kgrerank/types.hpp"

namespace kgrerank::testing {

inline std::string data_path(const std::string& name) {
  return std::string(KGRERANK_TEST_DATA) + "/" + name;
}

// Multiset intersection by scanning: each hyp token claims the first unused
// equal ref token.
inline std::size_t brute_force_overlap(const std::vector<std::string>& hyp,
                                       const std::vector<std::string>& ref) {
  std::vector<bool> used(ref.size(), false);
  std::size_t overlap = 0;
  for (const auto& h : hyp) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (!used[j] && ref[j] == h) {
        used[j] = true;
        ++overlap;
        break;
      }
    }
  }
  return overlap;
}

// Full (n+1) x (m+1) LCS table.
inline std::size_t lcs_dp(const std::vector<std::string>& a,
                          const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1
                                     : std::max(t[i - 1][j], t[i][j - 1]);
  return t[a.size()][b.size()];
}

// Lowercase alphabetic words from a small vocabulary so overlaps are common.
// None of them is an article.
inline std::vector<std::string> random_tokens(std::mt19937_64& rng,
                                              std::size_t max_len,
                                              std::size_t vocab = 12) {
  static const std::vector<std::string> words = {
      "cat", "dog", "sat", "mat", "ran", "red", "big", "sun", "sky", "sea",
      "rock", "song", "band", "album", "singer", "music", "career", "book",
      "novel", "team", "match", "score", "strike", "pin", "game", "lee"};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, std::min(vocab, words.size()) - 1);
  std::vector<std::string> out(len(rng));
  for (auto& w : out) w = words[pick(rng)];
  return out;
}

inline std::string join(const std::vector<std::string>& toks) {
  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

// Synthetic example: random knowledge, random candidates, and with
// probability `overlong_rate` a candidate carrying a > 30 character word.
inline StreamInput random_input(std::mt19937_64& rng, std::size_t index,
                                std::size_t pool_size = 6,
                                double overlong_rate = 0.0) {
  StreamInput in;
  in.example.id = "synthetic-" + std::to_string(index);
  in.example.topic = "synthetic";
  auto know = random_tokens(rng, 20, 20);
  know.push_back("singer");
  in.example.knowledge = join(know);
  in.example.history = {{Speaker::kUser, "tell me about " + join(random_tokens(rng, 6))}};
  in.example.gold_response = join(random_tokens(rng, 10, 20)) + " gold";
  std::bernoulli_distribution overlong(overlong_rate);
  for (std::size_t i = 0; i < pool_size; ++i) {
    auto toks = random_tokens(rng, 12, 26);
    if (toks.empty()) toks.push_back("song");
    if (overlong(rng)) toks.push_back("supercalifragilisticexpialidociousness");
    in.pool.candidates.push_back(join(toks));
  }
  in.pool.decode_meta.strategy = DecodeStrategy::kBeam;
  in.pool.decode_meta.n = static_cast<int>(pool_size);
  in.pool.decode_meta.r = pool_size;
  return in;
}

}  // namespace kgrerank::testing

#endif  // KGRERANK_TESTS_TEST_SUPPORT_HPP_
