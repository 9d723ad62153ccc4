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

// Per-candidate quality: mu = aggregate(mu_d, mu_k), where mu_k measures
// faithfulness to the knowledge snippet and mu_d relevance to the dialogue
// history.

#ifndef KGRERANK_SCORING_HPP_
#define KGRERANK_SCORING_HPP_

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgrerank/errors.hpp"
#include "kgrerank/filters.hpp"
#include "kgrerank/metrics.hpp"
#include "kgrerank/relevance.hpp"
#include "kgrerank/textnorm.hpp"
#include "kgrerank/types.hpp"

namespace kgrerank {

enum class FaithfulnessMetric { kKF1, kSentenceBleu4, kRougeL, kNone };

enum class RelevanceSet {
  kFedTurnBasic,
  kFedTurnFurther,
  kFedDialogueBasic,
  kFedDialogueFurther,
  kFedTurnAll,
  kFedDialogueAll,
  kFedAll,
  kNone,
};

inline constexpr std::array<std::pair<FaithfulnessMetric, std::string_view>, 4>
    kFaithfulnessNames = {{{FaithfulnessMetric::kKF1, "kf1"},
                           {FaithfulnessMetric::kSentenceBleu4, "sentence_bleu4"},
                           {FaithfulnessMetric::kRougeL, "rouge_l"},
                           {FaithfulnessMetric::kNone, "none"}}};

inline constexpr std::array<std::pair<RelevanceSet, std::string_view>, 8>
    kRelevanceNames = {{{RelevanceSet::kFedTurnBasic, "fed_turn_basic"},
                        {RelevanceSet::kFedTurnFurther, "fed_turn_further"},
                        {RelevanceSet::kFedDialogueBasic, "fed_dialogue_basic"},
                        {RelevanceSet::kFedDialogueFurther, "fed_dialogue_further"},
                        {RelevanceSet::kFedTurnAll, "fed_turn_all"},
                        {RelevanceSet::kFedDialogueAll, "fed_dialogue_all"},
                        {RelevanceSet::kFedAll, "fed_all"},
                        {RelevanceSet::kNone, "none"}}};

inline std::string_view to_string(FaithfulnessMetric m) {
  for (auto [v, s] : kFaithfulnessNames)
    if (v == m) return s;
  return "none";
}

inline std::string_view to_string(RelevanceSet r) {
  for (auto [v, s] : kRelevanceNames)
    if (v == r) return s;
  return "none";
}

inline FaithfulnessMetric parse_faithfulness(std::string_view s) {
  for (auto [v, name] : kFaithfulnessNames)
    if (name == s) return v;
  throw ConfigError("unknown faithfulness metric '" + std::string(s) + "'");
}

inline RelevanceSet parse_relevance_set(std::string_view s) {
  for (auto [v, name] : kRelevanceNames)
    if (name == s) return v;
  throw ConfigError("unknown relevance set '" + std::string(s) + "'");
}

struct Aggregation {
  enum class Kind { kSum, kWeightedSum };
  Kind kind = Kind::kSum;
  double w_d = 1.0;
  double w_k = 1.0;

  static Aggregation sum() { return {}; }
  static Aggregation weighted(double w_d, double w_k) {
    return {Kind::kWeightedSum, w_d, w_k};
  }
};

struct ScorerConfig {
  FaithfulnessMetric faithfulness = FaithfulnessMetric::kKF1;
  RelevanceSet relevance = RelevanceSet::kFedTurnBasic;
  Aggregation aggregation;
  // Catalog the relevance set is drawn from.
  std::vector<QualityDimension> dimensions = default_dimensions();

  bool uses_faithfulness() const {
    return faithfulness != FaithfulnessMetric::kNone;
  }
  bool uses_relevance() const { return relevance != RelevanceSet::kNone; }

  void validate() const {
    if (!uses_faithfulness() && !uses_relevance()) {
      throw ConfigError("faithfulness and relevance cannot both be none");
    }
    if (!std::isfinite(aggregation.w_d) || !std::isfinite(aggregation.w_k)) {
      throw ConfigError("aggregation weights must be finite");
    }
  }
};

// Dimensions of `catalog` selected by `set`.
inline std::vector<QualityDimension> select_dimensions(
    RelevanceSet set, std::span<const QualityDimension> catalog) {
  auto wanted = [set](const QualityDimension& d) {
    const bool turn = d.level == DialogueLevel::kTurn;
    const bool basic = d.tier == QualityTier::kBasic;
    switch (set) {
      case RelevanceSet::kFedTurnBasic: return turn && basic;
      case RelevanceSet::kFedTurnFurther: return turn && !basic;
      case RelevanceSet::kFedDialogueBasic: return !turn && basic;
      case RelevanceSet::kFedDialogueFurther: return !turn && !basic;
      case RelevanceSet::kFedTurnAll: return turn;
      case RelevanceSet::kFedDialogueAll: return !turn;
      case RelevanceSet::kFedAll: return true;
      case RelevanceSet::kNone: return false;
    }
    return false;
  };
  std::vector<QualityDimension> out;
  for (const auto& d : catalog)
    if (wanted(d)) out.push_back(d);
  return out;
}

// Dialogue history as the relevance scorer sees it: one line per utterance,
// prefixed with <speaker1> for the user and <speaker2> for the system.
inline std::string serialize_context(std::span<const Utterance> history) {
  std::string out;
  for (const auto& u : history) {
    if (!out.empty()) out.push_back('\n');
    out += u.speaker == Speaker::kUser ? "<speaker1> " : "<speaker2> ";
    out += u.text;
  }
  return out;
}

// Faithfulness in [0, 1]. Sentence BLEU is rescaled from [0, 100].
inline double score_faithfulness(std::string_view candidate,
                                 std::string_view knowledge,
                                 FaithfulnessMetric metric) {
  switch (metric) {
    case FaithfulnessMetric::kKF1:
      return kf1(candidate, knowledge).f1;
    case FaithfulnessMetric::kSentenceBleu4:
      return sentence_bleu4(normalize(candidate), normalize(knowledge)) / 100.0;
    case FaithfulnessMetric::kRougeL:
      return rouge_l(normalize(candidate), normalize(knowledge)).f1;
    case FaithfulnessMetric::kNone:
      break;
  }
  throw std::invalid_argument("score_faithfulness called with metric none");
}

// Absent terms count as 0, which gives the history-only and knowledge-only
// scoring modes.
inline double aggregate(std::optional<double> mu_d, std::optional<double> mu_k,
                        const Aggregation& agg) {
  if (!mu_d && !mu_k) {
    throw std::invalid_argument("aggregate needs at least one score");
  }
  const double d = mu_d.value_or(0.0);
  const double k = mu_k.value_or(0.0);
  if (agg.kind == Aggregation::Kind::kSum) return d + k;
  return agg.w_d * d + agg.w_k * k;
}

struct ScoreBreakdown {
  std::size_t candidate_index = 0;
  std::optional<double> mu_d;
  std::optional<double> mu_k;
  std::optional<double> mu;  // absent iff filtered
  bool filtered = false;
  FilterVerdict verdict;
};

// Scores every candidate that passes `policy`; filtered candidates get a
// breakdown with no scores. `client` may be null when cfg has no relevance
// set.
inline std::vector<ScoreBreakdown> score_pool(const DialogueExample& example,
                                              const CandidateSet& pool,
                                              const ScorerConfig& cfg,
                                              RelevanceScorer* client,
                                              const FilterPolicy& policy = {}) {
  if (pool.empty()) throw EmptyPool();
  cfg.validate();
  if (cfg.uses_relevance() && client == nullptr) {
    throw ConfigError("relevance set '" + std::string(to_string(cfg.relevance)) +
                      "' needs a relevance scorer");
  }

  std::vector<QualityDimension> dims;
  std::string context;
  if (cfg.uses_relevance()) {
    dims = select_dimensions(cfg.relevance, cfg.dimensions);
    if (dims.empty()) {
      throw ConfigError("relevance set '" + std::string(to_string(cfg.relevance)) +
                        "' selects no dimensions from the catalog");
    }
    context = serialize_context(example.history);
  }

  const FilterOutcome filtered = apply(pool, policy);
  std::vector<ScoreBreakdown> out(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    out[i].candidate_index = i;
    out[i].verdict = filtered.verdicts[i];
    out[i].filtered = !filtered.verdicts[i].passed();
  }
  for (const auto& survivor : filtered.survivors) {
    auto& b = out[survivor.index];
    if (cfg.uses_faithfulness()) {
      b.mu_k = score_faithfulness(survivor.text, example.knowledge,
                                  cfg.faithfulness);
    }
    if (cfg.uses_relevance()) {
      b.mu_d = score_relevance(context, survivor.text, dims, *client);
    }
    b.mu = aggregate(b.mu_d, b.mu_k, cfg.aggregation);
  }
  return out;
}

}  // namespace kgrerank

#endif  // KGRERANK_SCORING_HPP_
