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

// Filter -> score -> argmax selection over a candidate pool.

#ifndef KGRERANK_RERANKER_HPP_
#define KGRERANK_RERANKER_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "kgrerank/errors.hpp"
#include "kgrerank/filters.hpp"
#include "kgrerank/relevance.hpp"
#include "kgrerank/scoring.hpp"
#include "kgrerank/types.hpp"

namespace kgrerank {

class InvalidExample : public Error {
 public:
  explicit InvalidExample(const std::string& what)
      : Error("InvalidExample", what) {}
};

struct RerankResult {
  std::string id;
  std::size_t selected_index = 0;
  std::string selected_text;
  std::vector<ScoreBreakdown> breakdowns;
  // Every candidate failed the filters; the decoder's top hypothesis is
  // returned unscored.
  bool fallback_used = false;
};

// Index of the highest mu among unfiltered breakdowns. Strict comparison, so
// ties go to the lowest original rank. Empty when everything was filtered.
inline std::optional<std::size_t> argmax_mu(
    std::span<const ScoreBreakdown> breakdowns) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < breakdowns.size(); ++i) {
    const auto& b = breakdowns[i];
    if (b.filtered || !b.mu) continue;
    if (!best || *b.mu > *breakdowns[*best].mu) best = i;
  }
  return best;
}

inline RerankResult rerank(const DialogueExample& example,
                           const CandidateSet& pool, const ScorerConfig& cfg,
                           const FilterPolicy& policy,
                           RelevanceScorer* client) {
  if (pool.empty()) throw EmptyPool();
  if (cfg.uses_faithfulness() && example.knowledge.empty()) {
    throw InvalidExample("example '" + example.id +
                         "' has empty knowledge but faithfulness scoring is on");
  }
  RerankResult out;
  out.id = example.id;
  out.breakdowns = score_pool(example, pool, cfg, client, policy);
  const auto best = argmax_mu(out.breakdowns);
  out.fallback_used = !best.has_value();
  out.selected_index = best.value_or(0);
  out.selected_text = pool[out.selected_index];
  return out;
}

struct StreamInput {
  DialogueExample example;
  CandidateSet pool;
  std::size_t source_line = 0;  // 1-based line in the input file, if any
};

struct ErrorRecord {
  std::string id;
  std::size_t position = 0;  // index in the input sequence
  std::string kind;
  std::string message;
};

using StreamItem = std::variant<RerankResult, ErrorRecord>;

struct StreamOptions {
  std::size_t concurrency = 1;
  // Lenient: a failing example becomes an ErrorRecord. Strict: the first
  // failure (in input order) is rethrown once in-flight work drains.
  bool lenient = false;
};

// Reranks every input; output[i] belongs to inputs[i] regardless of the
// number of workers.
inline std::vector<StreamItem> rerank_stream(std::span<const StreamInput> inputs,
                                             const ScorerConfig& cfg,
                                             const FilterPolicy& policy,
                                             RelevanceScorer* client,
                                             const StreamOptions& opts = {}) {
  const std::size_t n = inputs.size();
  std::vector<std::optional<StreamItem>> slots(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto work = [&] {
    for (;;) {
      if (abort.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const auto& in = inputs[i];
      try {
        slots[i] = rerank(in.example, in.pool, cfg, policy, client);
      } catch (const Error& e) {
        slots[i] = ErrorRecord{in.example.id, i, e.kind(), e.what()};
        failures[i] = std::current_exception();
      } catch (const std::exception& e) {
        slots[i] = ErrorRecord{in.example.id, i, "InternalError", e.what()};
        failures[i] = std::current_exception();
      }
      if (failures[i] && !opts.lenient) abort.store(true);
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(opts.concurrency, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  if (!opts.lenient) {
    for (auto& f : failures)
      if (f) std::rethrow_exception(f);
  }
  std::vector<StreamItem> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace kgrerank

#endif  // KGRERANK_RERANKER_HPP_
