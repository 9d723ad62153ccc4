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

#include "kgrerank/filters.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace kgrerank {
namespace {

CandidateSet pool_of(std::vector<std::string> c) {
  CandidateSet p;
  p.decode_meta.r = c.size();
  p.candidates = std::move(c);
  return p;
}

TEST(FilterCheckTest, CleanCandidatePasses) {
  const FilterVerdict v = check("he was known for throwing tantrums");
  EXPECT_TRUE(v.passed());
  EXPECT_TRUE(v.reasons.empty());
}

TEST(FilterCheckTest, ThirtyFiveCharacterWordIsOverlong) {
  const std::string word = "pneumonoultramicroscopicsilicovolca";
  ASSERT_EQ(word.size(), 35u);
  const FilterVerdict v = check(word);
  EXPECT_FALSE(v.passed());
  EXPECT_EQ(v.reasons, std::vector<FilterReason>{FilterReason::kOverlongWord});
}

TEST(FilterCheckTest, LengthBoundaryIsExclusive) {
  EXPECT_TRUE(check(std::string(30, 'x')).passed());
  EXPECT_TRUE(check(std::string(31, 'x')).has(FilterReason::kOverlongWord));
}

TEST(FilterCheckTest, AttachedPunctuationCountsTowardLength) {
  const std::string w(29, 'y');
  EXPECT_TRUE(check(w + "!").passed());
  EXPECT_TRUE(check(w + "!!").has(FilterReason::kOverlongWord));
}

TEST(FilterCheckTest, LengthCountsCodePointsNotBytes) {
  std::string w;
  for (int i = 0; i < 30; ++i) w += "\u00e9";  // 60 bytes, 30 code points
  EXPECT_TRUE(check(w).passed());
}

TEST(FilterCheckTest, RepetitionRunOfThree) {
  const FilterVerdict v = check("it is is is great");
  EXPECT_EQ(v.reasons, std::vector<FilterReason>{FilterReason::kRepetitiveWords});
  EXPECT_TRUE(check("really really good").passed());
  EXPECT_TRUE(check("so so so so").has(FilterReason::kRepetitiveWords));
}

TEST(FilterCheckTest, RepetitionUsesNormalizedTokens) {
  EXPECT_TRUE(check("Is, is. IS!").has(FilterReason::kRepetitiveWords));
  // Articles disappear, which makes "dog" adjacent to itself.
  EXPECT_TRUE(check("dog the dog a dog").has(FilterReason::kRepetitiveWords));
}

TEST(FilterCheckTest, EmptyCandidates) {
  EXPECT_EQ(check("").reasons, std::vector<FilterReason>{FilterReason::kEmpty});
  EXPECT_TRUE(check("  ... !!").has(FilterReason::kEmpty));
  EXPECT_TRUE(check("the a an").has(FilterReason::kEmpty));
}

TEST(FilterCheckTest, SeveralReasonsAtOnce) {
  const FilterVerdict v = check("go go go " + std::string(40, 'z'));
  EXPECT_TRUE(v.has(FilterReason::kRepetitiveWords));
  EXPECT_TRUE(v.has(FilterReason::kOverlongWord));
  EXPECT_FALSE(v.has(FilterReason::kEmpty));
}

TEST(FilterCheckTest, PolicyThresholdsMustBePositive) {
  EXPECT_THROW(check("x", FilterPolicy{0, 3}), std::invalid_argument);
  EXPECT_THROW(check("x", FilterPolicy{30, 0}), std::invalid_argument);
}

TEST(FilterCheckTest, CustomPolicy) {
  EXPECT_TRUE(check("really really good", FilterPolicy{30, 2})
                  .has(FilterReason::kRepetitiveWords));
  EXPECT_TRUE(check("elephant", FilterPolicy{5, 3}).has(FilterReason::kOverlongWord));
}

TEST(FilterApplyTest, CleanPoolKeepsEverything) {
  const FilterOutcome o = apply(pool_of({"first one", "second one", "third one"}));
  ASSERT_EQ(o.survivors.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(o.survivors[i].index, i);
  EXPECT_EQ(o.survivors[1].text, "second one");
}

TEST(FilterApplyTest, KeepsOriginalIndices) {
  const FilterOutcome o =
      apply(pool_of({"fine answer", "bad " + std::string(31, 'q'), "also fine"}));
  ASSERT_EQ(o.survivors.size(), 2u);
  EXPECT_EQ(o.survivors[0].index, 0u);
  EXPECT_EQ(o.survivors[1].index, 2u);
  ASSERT_EQ(o.verdicts.size(), 3u);
  EXPECT_FALSE(o.verdicts[1].passed());
}

TEST(FilterApplyTest, AllFailed) {
  const FilterOutcome o = apply(pool_of({"", "no no no", std::string(50, 'w')}));
  EXPECT_TRUE(o.survivors.empty());
  EXPECT_EQ(o.verdicts.size(), 3u);
}

TEST(FilterProperty, ApplyPreservesOrderAndCounts) {
  std::mt19937_64 rng(201);
  for (int i = 0; i < 500; ++i) {
    const StreamInput in = testing::random_input(rng, i, 8, 0.3);
    const FilterOutcome o = apply(in.pool);
    ASSERT_EQ(o.verdicts.size(), in.pool.size());
    std::size_t failed = 0;
    for (const auto& v : o.verdicts) failed += v.passed() ? 0 : 1;
    EXPECT_EQ(o.survivors.size() + failed, in.pool.size());
    for (std::size_t j = 0; j < o.survivors.size(); ++j) {
      if (j > 0) {
        EXPECT_LT(o.survivors[j - 1].index, o.survivors[j].index);
      }
      EXPECT_EQ(o.survivors[j].text, in.pool[o.survivors[j].index]);
      EXPECT_TRUE(o.verdicts[o.survivors[j].index].passed());
    }
  }
}

TEST(FilterProperty, CheckIsIndependentOfPool) {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 200; ++i) {
    const StreamInput in = testing::random_input(rng, i, 6, 0.3);
    const FilterOutcome o = apply(in.pool);
    for (std::size_t j = 0; j < in.pool.size(); ++j) {
      EXPECT_EQ(o.verdicts[j].reasons, check(in.pool[j]).reasons);
    }
  }
}

TEST(FilterProperty, RelaxingThresholdsIsMonotone) {
  std::mt19937_64 rng(203);
  std::uniform_int_distribution<std::size_t> len(1, 40), run(1, 5), grow(0, 10);
  std::uniform_int_distribution<int> rep(1, 5);
  for (int i = 0; i < 1000; ++i) {
    auto toks = testing::random_tokens(rng, 10, 4);
    const int r = rep(rng);
    for (int k = 0; k < r; ++k) toks.push_back("echo");
    toks.push_back(std::string(len(rng), 'k'));
    const std::string cand = testing::join(toks);
    const FilterPolicy tight{len(rng), run(rng)};
    const FilterPolicy loose{tight.max_word_chars + grow(rng), tight.rep_run + grow(rng)};
    if (check(cand, tight).passed()) {
      EXPECT_TRUE(check(cand, loose).passed()) << cand;
    }
  }
}

TEST(LongestRunTest, Examples) {
  EXPECT_EQ(longest_run(std::vector<std::string>{}), 0u);
  EXPECT_EQ(longest_run(std::vector<std::string>{"a"}), 1u);
  EXPECT_EQ(longest_run(std::vector<std::string>{"a", "b", "b", "a"}), 2u);
  EXPECT_EQ(longest_run(std::vector<std::string>{"a", "a", "a", "b"}), 3u);
}

}  // namespace
}  // namespace kgrerank
