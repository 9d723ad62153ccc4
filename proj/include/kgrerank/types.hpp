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

#ifndef KGRERANK_TYPES_HPP_
#define KGRERANK_TYPES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgrerank {

enum class Speaker { kUser, kSystem };

inline std::string_view to_string(Speaker s) {
  return s == Speaker::kUser ? "user" : "system";
}

struct Utterance {
  Speaker speaker = Speaker::kUser;
  std::string text;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

// One dialogue turn to respond to. The last history entry is the user
// utterance being answered.
struct DialogueExample {
  std::string id;
  std::string topic;
  std::string knowledge;
  std::vector<Utterance> history;
  std::optional<std::string> gold_response;
  int turn_index = 1;

  friend bool operator==(const DialogueExample&,
                         const DialogueExample&) = default;
};

enum class DecodeStrategy { kBeam, kTopK, kTopP, kGreedy };

inline std::string_view to_string(DecodeStrategy s) {
  switch (s) {
    case DecodeStrategy::kBeam: return "beam";
    case DecodeStrategy::kTopK: return "top_k";
    case DecodeStrategy::kTopP: return "top_p";
    case DecodeStrategy::kGreedy: return "greedy";
  }
  return "beam";
}

struct DecodeMeta {
  DecodeStrategy strategy = DecodeStrategy::kBeam;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> p;
  std::size_t r = 0;

  friend bool operator==(const DecodeMeta&, const DecodeMeta&) = default;
};

// Pool of generated responses in decoder order; index 0 is the decoder's
// own pick (the vanilla response).
struct CandidateSet {
  std::vector<std::string> candidates;
  DecodeMeta decode_meta;

  std::size_t size() const noexcept { return candidates.size(); }
  bool empty() const noexcept { return candidates.empty(); }
  const std::string& operator[](std::size_t i) const { return candidates[i]; }

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

}  // namespace kgrerank

#endif  // KGRERANK_TYPES_HPP_
