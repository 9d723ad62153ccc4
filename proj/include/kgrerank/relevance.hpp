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

// Follow-up likelihood relevance scoring.
//
// A relevance scorer returns log p(followup | context ++ response) under some
// dialogue language model. Quality dimensions pair a name with follow-ups a
// listener would say after a good (positive) or bad (negative) response.

#ifndef KGRERANK_RELEVANCE_HPP_
#define KGRERANK_RELEVANCE_HPP_

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kgrerank/errors.hpp"
#include "kgrerank/textnorm.hpp"

namespace kgrerank {

struct LoglikRequest {
  std::string context;
  std::string response;
  std::string followup;

  friend bool operator==(const LoglikRequest&, const LoglikRequest&) = default;
};

// Implementations must be safe to call from several threads at once.
class RelevanceScorer {
 public:
  virtual ~RelevanceScorer() = default;

  virtual double loglik(const LoglikRequest& req) = 0;

  // Result i belongs to reqs[i].
  virtual std::vector<double> loglik_batch(std::span<const LoglikRequest> reqs) {
    std::vector<double> out;
    out.reserve(reqs.size());
    for (const auto& r : reqs) out.push_back(loglik(r));
    return out;
  }

  virtual std::string name() const = 0;
};

// Every follow-up has log-likelihood 0.
class ZeroScorer final : public RelevanceScorer {
 public:
  double loglik(const LoglikRequest&) override { return 0.0; }
  std::string name() const override { return "mock:zero"; }
};

// log-likelihood = -(number of characters in the follow-up).
class NegLengthScorer final : public RelevanceScorer {
 public:
  double loglik(const LoglikRequest& req) override {
    return -static_cast<double>(utf8_length(req.followup));
  }
  std::string name() const override { return "mock:neg-length"; }
};

inline std::unique_ptr<RelevanceScorer> make_mock_scorer(std::string_view name) {
  if (name == "zero") return std::make_unique<ZeroScorer>();
  if (name == "neg-length") return std::make_unique<NegLengthScorer>();
  throw ConfigError("unknown mock scorer '" + std::string(name) +
                    "' (expected zero or neg-length)");
}

// ---------------------------------------------------------------------------
// Quality dimensions

enum class DialogueLevel { kTurn, kDialogue };
enum class QualityTier { kBasic, kFurther };

struct QualityDimension {
  std::string name;
  DialogueLevel level = DialogueLevel::kTurn;
  QualityTier tier = QualityTier::kBasic;
  std::vector<std::string> positive_followups;
  std::vector<std::string> negative_followups;

  friend bool operator==(const QualityDimension&,
                         const QualityDimension&) = default;
};

// Follow-up utterances from the public FED release, grouped into
// turn/dialogue level and basic/further tiers.
inline const std::vector<QualityDimension>& default_dimensions() {
  using L = DialogueLevel;
  using T = QualityTier;
  static const std::vector<QualityDimension> dims = {
      // Turn level, basic.
      {"semantically appropriate", L::kTurn, T::kBasic,
       {"That makes sense!", "You have a good point."},
       {"That makes no sense!"}},
      {"understandable", L::kTurn, T::kBasic,
       {"That makes sense!", "You have a good point."},
       {"I don't understand at all!", "I'm so confused!",
        "That makes no sense!", "What does that even mean?"}},
      {"fluent", L::kTurn, T::kBasic,
       {"That makes sense!", "You have a good point."},
       {"Is that real English?", "I'm so confused right now!",
        "That makes no sense!"}},
      // Turn level, further.
      {"interesting", L::kTurn, T::kFurther,
       {"Wow that is really interesting.", "That's really interesting!",
        "Cool! That sounds super interesting."},
       {"That's not very interesting.", "That's really boring.",
        "That was a really boring response."}},
      {"engaging", L::kTurn, T::kFurther,
       {"Wow! That's really cool!", "Tell me more!"},
       {"I don't really care. That's pretty boring.",
        "I don't want to talk about that."}},
      {"specific", L::kTurn, T::kFurther,
       {"That's good to know. Cool!", "I see, that's interesting."},
       {"That's a very generic response.", "Not really relevant here.",
        "That's not really relevant here."}},
      {"relevant", L::kTurn, T::kFurther,
       {},
       {"That's not even related to what I said.", "Don't change the topic!",
        "Why are you changing the topic?"}},
      {"correct", L::kTurn, T::kFurther,
       {},
       {"You're not understanding me!", "I am so confused right now!",
        "I don't understand what you're saying."}},
      // Dialogue level, basic.
      {"coherent", L::kDialogue, T::kBasic,
       {},
       {"You're really confusing.", "You don't make any sense.",
        "You're so confusing.", "You're not making any sense.",
        "You're really confusing me."}},
      {"error recovery", L::kDialogue, T::kBasic,
       {},
       {"I am so confused right now.", "You're really confusing.",
        "I don't understand what you're saying."}},
      {"consistent", L::kDialogue, T::kBasic,
       {},
       {"That's not what you said earlier!", "Stop contradicting yourself!"}},
      {"diverse", L::kDialogue, T::kBasic,
       {},
       {"Stop saying the same thing repeatedly.",
        "Why are you repeating yourself?", "Stop repeating yourself!"}},
      // Dialogue level, further.
      {"depth", L::kDialogue, T::kFurther,
       {},
       {"Stop changing the topic so much.", "Don't change the topic!"}},
      {"likeable", L::kDialogue, T::kFurther,
       {"I like you!", "You're very kind."},
       {"You're not very nice.", "You're not very fun to talk to.",
        "I don't like you."}},
      {"understandable", L::kDialogue, T::kFurther,
       {},
       {"You're not understanding me!", "What are you trying to say?",
        "I don't understand what you're saying."}},
      {"flexible", L::kDialogue, T::kFurther,
       {"You're very easy to talk to!",
        "Wow you can talk about a lot of things!"},
       {"I don't want to talk about that!",
        "Do you know how to talk about something else?"}},
      {"informative", L::kDialogue, T::kFurther,
       {"Thanks for all the information!", "Wow that's a lot of information.",
        "You know a lot of facts!"},
       {"You're really boring.", "You don't really know much."}},
      {"inquisitive", L::kDialogue, T::kFurther,
       {"You ask a lot of questions!", "That's a lot of questions!"},
       {"You don't ask many questions.", "You don't seem interested."}},
  };
  return dims;
}

// Dimension score: sum of positive follow-up log-likelihoods minus the sum
// of negative ones. Returns the mean over `dims`.
inline double score_relevance(std::string_view context,
                              std::string_view candidate,
                              std::span<const QualityDimension> dims,
                              RelevanceScorer& client) {
  if (dims.empty()) throw std::invalid_argument("no quality dimensions given");
  std::vector<LoglikRequest> reqs;
  for (const auto& d : dims) {
    if (d.positive_followups.empty() && d.negative_followups.empty()) {
      throw ConfigError("quality dimension '" + d.name + "' has no follow-ups");
    }
    for (const auto& f : d.positive_followups)
      reqs.push_back({std::string(context), std::string(candidate), f});
    for (const auto& f : d.negative_followups)
      reqs.push_back({std::string(context), std::string(candidate), f});
  }
  const std::vector<double> ll = client.loglik_batch(reqs);
  if (ll.size() != reqs.size()) {
    throw ScorerProtocol("batch reply has " + std::to_string(ll.size()) +
                         " entries for " + std::to_string(reqs.size()) +
                         " requests");
  }
  double total = 0.0;
  std::size_t i = 0;
  for (const auto& d : dims) {
    double s = 0.0;
    for (std::size_t j = 0; j < d.positive_followups.size(); ++j) s += ll[i++];
    for (std::size_t j = 0; j < d.negative_followups.size(); ++j) s -= ll[i++];
    total += s;
  }
  return total / static_cast<double>(dims.size());
}

}  // namespace kgrerank

#endif  // KGRERANK_RELEVANCE_HPP_
