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

// Candidate hygiene run before scoring. A candidate is dropped when it has a
// surface word longer than max_word_chars, a normalized token repeated
// rep_run or more times in a row, or no normalized tokens at all.

#ifndef KGRERANK_FILTERS_HPP_
#define KGRERANK_FILTERS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kgrerank/textnorm.hpp"
#include "kgrerank/types.hpp"

namespace kgrerank {

struct FilterPolicy {
  std::size_t max_word_chars = 30;
  std::size_t rep_run = 3;

  void validate() const {
    if (max_word_chars == 0 || rep_run == 0) {
      throw std::invalid_argument("filter thresholds must be positive");
    }
  }
};

enum class FilterReason { kRepetitiveWords, kOverlongWord, kEmpty };

inline std::string_view to_string(FilterReason r) {
  switch (r) {
    case FilterReason::kRepetitiveWords: return "RepetitiveWords";
    case FilterReason::kOverlongWord: return "OverlongWord";
    case FilterReason::kEmpty: return "Empty";
  }
  return "";
}

struct FilterVerdict {
  std::vector<FilterReason> reasons;

  bool passed() const noexcept { return reasons.empty(); }
  bool has(FilterReason r) const {
    for (auto x : reasons)
      if (x == r) return true;
    return false;
  }
};

// Longest run of identical adjacent tokens.
template <class Tokens>
std::size_t longest_run(const Tokens& toks) {
  std::size_t best = 0, run = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    run = (i > 0 && toks[i] == toks[i - 1]) ? run + 1 : 1;
    if (run > best) best = run;
  }
  return best;
}

inline FilterVerdict check(std::string_view candidate,
                           const FilterPolicy& policy = {}) {
  policy.validate();
  FilterVerdict v;
  const TokenSequence norm = normalize(candidate);
  if (longest_run(norm) >= policy.rep_run) {
    v.reasons.push_back(FilterReason::kRepetitiveWords);
  }
  for (const auto& tok : raw_tokenize(candidate)) {
    if (utf8_length(tok) > policy.max_word_chars) {
      v.reasons.push_back(FilterReason::kOverlongWord);
      break;
    }
  }
  if (norm.empty()) v.reasons.push_back(FilterReason::kEmpty);
  return v;
}

struct RankedCandidate {
  std::size_t index;  // rank in the original pool
  std::string text;
};

struct FilterOutcome {
  std::vector<RankedCandidate> survivors;  // original order
  std::vector<FilterVerdict> verdicts;     // aligned with the input pool
};

inline FilterOutcome apply(const CandidateSet& pool,
                           const FilterPolicy& policy = {}) {
  FilterOutcome out;
  out.verdicts.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    out.verdicts.push_back(check(pool[i], policy));
    if (out.verdicts.back().passed()) out.survivors.push_back({i, pool[i]});
  }
  return out;
}

}  // namespace kgrerank

#endif  // KGRERANK_FILTERS_HPP_
