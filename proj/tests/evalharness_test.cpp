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

#include "kgrerank/evalharness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kgrerank/io.hpp"
#include "test_support.hpp"

namespace kgrerank {
namespace {

// Reference values from tests/oracles/compute_oracles.py.
constexpr double kFixtureBleu4 = 20.966299608457962;
constexpr double kFixtureRougeL = 0.5256410256410257;
constexpr double kFixtureF1 = 0.5256410256410257;
constexpr double kFixtureKf1 = 0.4456017276243877;

const std::map<std::string, double> kReportTotals = {
    {"fed_turn_basic/kf1", 5.499801033710345},
    {"fed_turn_further/kf1", 1.742245348686207},
    {"fed_dialogue_basic/rouge_l", -2.2960277818122035},
    {"none/sentence_bleu4", -4.946018600584338},
};

std::vector<EvalItem> fixture_items() {
  return {
      {"axl",
       "Due to his powerful and very large vocal range and energetic live performances, "
       "Rose has been named one of the greatest singers of all time by various media "
       "outlets, including \"Rolling Stone\" and \"NME\".",
       "Maybe that was due to his powerful and large vocal range",
       "he has been named one of the greatest singers", false},
      {"football",
       "The first match of American football was played on November 6, 1869, between two "
       "college teams, Rutgers and Princeton.",
       "The teams were Rutgers and Princeton. Two college teams.",
       "the teams were rutgers and princeton", true},
      {"dylan", "Dylan Lauren (born May 9, 1974) is an American entrepreneur.",
       "She is an american entrepreneur!", "She is an american entrepreneur!", false},
      {"mockingbird", "To Kill a Mockingbird is a novel by Harper Lee published in 1960.",
       "Yes, another book I like is To Kill a Mockingbird but that was written by Harper Lee.",
       "It was published in 1960 by Harper Lee.", false},
  };
}

std::vector<std::pair<ConfigLabel, CorpusReport>> load_fixture_reports() {
  std::vector<std::pair<ConfigLabel, CorpusReport>> out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(testing::data_path("reports")))
    files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::optional<ConfigLabel> label;
    CorpusReport r = report_from_json(json::parse(in), &label);
    out.emplace_back(*label, r);
  }
  return out;
}

CorpusReport report_with(double b, double rl, double f1, double kf) {
  CorpusReport r;
  r.n_examples = 10;
  r.bleu4 = b;
  r.rouge_l = rl;
  r.f1 = f1;
  r.kf1 = kf;
  return r;
}

TEST(KnCopyTest, Examples) {
  const std::string k = "Axl Rose is the lead singer of Guns N' Roses.";
  EXPECT_TRUE(kn_copy(k, k));
  EXPECT_TRUE(kn_copy("lead singer of guns", k));
  EXPECT_TRUE(kn_copy("The lead singer, of Guns!", k));
  EXPECT_FALSE(kn_copy("lead singer", k));  // below the three-token floor
  EXPECT_FALSE(kn_copy("singer lead of", k));
  EXPECT_FALSE(kn_copy("", k));
  EXPECT_FALSE(kn_copy("lead singer of guns", k, KnCopyMode::kExact));
  EXPECT_TRUE(kn_copy("axl rose is lead singer of guns n roses", k, KnCopyMode::kExact));
  EXPECT_TRUE(kn_copy("lead singer", k, KnCopyMode::kSpan, 2));
}

TEST(EvaluateCorpusTest, IdentityCorpus) {
  std::vector<EvalItem> items;
  for (auto it : fixture_items()) {
    it.selected = *it.gold;
    it.fallback_used = false;
    items.push_back(it);
  }
  const CorpusReport r = evaluate_corpus(items, "identity");
  EXPECT_EQ(r.split_name, "identity");
  EXPECT_EQ(r.n_examples, 4u);
  EXPECT_DOUBLE_EQ(r.bleu4, 100.0);
  EXPECT_DOUBLE_EQ(r.rouge_l, 1.0);
  EXPECT_DOUBLE_EQ(r.f1, 1.0);
  EXPECT_EQ(r.fallback_rate, 0.0);
}

TEST(EvaluateCorpusTest, FixtureMatchesReference) {
  const CorpusReport r = evaluate_corpus(fixture_items(), "test_seen");
  EXPECT_NEAR(r.bleu4, kFixtureBleu4, 1e-6);
  EXPECT_NEAR(r.rouge_l, kFixtureRougeL, 1e-9);
  EXPECT_NEAR(r.f1, kFixtureF1, 1e-9);
  EXPECT_NEAR(r.kf1, kFixtureKf1, 1e-9);
  EXPECT_DOUBLE_EQ(r.kn_copy_rate, 0.0);
  EXPECT_DOUBLE_EQ(r.fallback_rate, 0.25);
}

TEST(EvaluateCorpusTest, KnCopyRate) {
  auto items = fixture_items();
  items[1].selected = "two college teams rutgers and princeton";
  items[3].selected = "To Kill a Mockingbird is a novel by Harper Lee published in 1960.";
  EXPECT_DOUBLE_EQ(evaluate_corpus(items).kn_copy_rate, 0.5);
  EXPECT_DOUBLE_EQ(evaluate_corpus(items, "t", KnCopyMode::kExact).kn_copy_rate, 0.25);
}

TEST(EvaluateCorpusTest, Errors) {
  EXPECT_THROW(evaluate_corpus(std::vector<EvalItem>{}), EmptyCorpus);
  auto items = fixture_items();
  items[2].gold.reset();
  try {
    evaluate_corpus(items);
    FAIL() << "expected MissingGold";
  } catch (const MissingGold& e) {
    EXPECT_NE(std::string(e.what()).find("dylan"), std::string::npos);
  }
}

TEST(EvaluateCorpusProperty, RatesAndScoresInRange) {
  std::mt19937_64 rng(501);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EvalItem> items;
    for (int i = 0; i < 20; ++i) {
      const StreamInput in = testing::random_input(rng, i, 1);
      items.push_back({in.example.id, in.example.knowledge, in.example.gold_response,
                       in.pool[0], (rng() % 5) == 0});
    }
    const CorpusReport r = evaluate_corpus(items);
    EXPECT_GE(r.bleu4, 0.0);
    EXPECT_LE(r.bleu4, 100.0);
    for (double v : {r.rouge_l, r.f1, r.kf1, r.kn_copy_rate, r.fallback_rate}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(ZscoresTest, Examples) {
  const std::vector<double> v = {1.0, 2.0, 3.0};
  const auto z = zscores(v);
  const double s = std::sqrt(2.0 / 3.0);
  EXPECT_DOUBLE_EQ(z[0], -1.0 / s);
  EXPECT_DOUBLE_EQ(z[1], 0.0);
  EXPECT_DOUBLE_EQ(z[2], 1.0 / s);
  EXPECT_EQ(zscores(std::vector<double>{4.0, 4.0, 4.0}), (std::vector<double>{0, 0, 0}));
}

TEST(CompareConfigsTest, FixtureReportsMatchReference) {
  const auto reports = load_fixture_reports();
  ASSERT_EQ(reports.size(), 4u);
  const ComparisonGrid g = compare_configs(reports);
  for (std::size_t c = 0; c < g.configs.size(); ++c) {
    const std::string key = g.configs[c].relevance + "/" + g.configs[c].faithfulness;
    ASSERT_TRUE(kReportTotals.count(key)) << key;
    EXPECT_NEAR(g.totals[c], kReportTotals.at(key), 1e-9) << key;
  }
  EXPECT_EQ(g.rows.size(), 4u);
  EXPECT_EQ(g.cols.size(), 3u);
}

TEST(CompareConfigsTest, ColumnsAreStandardized) {
  const ComparisonGrid g = compare_configs(load_fixture_reports());
  for (const auto& col : g.normalized) {
    double mean = 0.0, var = 0.0;
    for (double v : col) mean += v;
    mean /= col.size();
    for (double v : col) var += (v - mean) * (v - mean);
    EXPECT_LT(std::abs(mean), 1e-9);
    EXPECT_LT(std::abs(std::sqrt(var / col.size()) - 1.0), 1e-9);
  }
}

TEST(CompareConfigsTest, GridCells) {
  const std::vector<std::pair<ConfigLabel, CorpusReport>> reports = {
      {{"fed_turn_basic", "kf1"}, report_with(2, 0.2, 0.2, 0.2)},
      {{"fed_turn_basic", "rouge_l"}, report_with(1, 0.1, 0.1, 0.1)},
      {{"none", "kf1"}, report_with(1, 0.1, 0.1, 0.1)},
  };
  const ComparisonGrid g = compare_configs(reports);
  EXPECT_EQ(g.rows, (std::vector<std::string>{"fed_turn_basic", "none"}));
  EXPECT_EQ(g.cols, (std::vector<std::string>{"kf1", "rouge_l"}));
  EXPECT_TRUE(g.cells[0][0].has_value());
  EXPECT_TRUE(g.cells[0][1].has_value());
  EXPECT_TRUE(g.cells[1][0].has_value());
  EXPECT_FALSE(g.cells[1][1].has_value());
  EXPECT_GT(*g.cells[0][0], *g.cells[0][1]);
  EXPECT_EQ(*g.cells[0][1], *g.cells[1][0]);
}

TEST(CompareConfigsTest, ZeroVarianceMetricContributesNothing) {
  const std::vector<std::pair<ConfigLabel, CorpusReport>> reports = {
      {{"a", "kf1"}, report_with(5, 0.3, 0.3, 0.4)},
      {{"b", "kf1"}, report_with(5, 0.3, 0.3, 0.6)},
  };
  const ComparisonGrid g = compare_configs(reports);
  for (std::size_t m = 0; m < 3; ++m)
    EXPECT_EQ(g.normalized[m], (std::vector<double>{0.0, 0.0}));
  EXPECT_DOUBLE_EQ(g.totals[0], -1.0);
  EXPECT_DOUBLE_EQ(g.totals[1], 1.0);
}

TEST(CompareConfigsTest, Errors) {
  const std::vector<std::pair<ConfigLabel, CorpusReport>> one = {
      {{"a", "kf1"}, report_with(1, 0.1, 0.1, 0.1)}};
  EXPECT_THROW(compare_configs(one), TooFewConfigs);
  const std::vector<std::pair<ConfigLabel, CorpusReport>> dup = {
      {{"a", "kf1"}, report_with(1, 0.1, 0.1, 0.1)},
      {{"a", "kf1"}, report_with(2, 0.2, 0.2, 0.2)}};
  EXPECT_THROW(compare_configs(dup), ConfigError);
}

TEST(CompareConfigsProperty, DominatingConfigGetsLargestCell) {
  std::mt19937_64 rng(502);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<ConfigLabel, CorpusReport>> reports;
    CorpusReport best = report_with(0, 0, 0, 0);
    for (int c = 0; c < 4; ++c) {
      const CorpusReport r = report_with(100 * u(rng), u(rng), u(rng), u(rng));
      best.bleu4 = std::max(best.bleu4, r.bleu4);
      best.rouge_l = std::max(best.rouge_l, r.rouge_l);
      best.f1 = std::max(best.f1, r.f1);
      best.kf1 = std::max(best.kf1, r.kf1);
      reports.push_back({{"rel" + std::to_string(c), "kf1"}, r});
    }
    best.bleu4 += 1.0;
    best.rouge_l += 0.01;
    best.f1 += 0.01;
    best.kf1 += 0.01;
    reports.push_back({{"winner", "kf1"}, best});
    const ComparisonGrid g = compare_configs(reports);
    for (std::size_t c = 0; c + 1 < g.totals.size(); ++c) EXPECT_LT(g.totals[c], g.totals.back());
  }
}

TEST(FormatTest, ReportAndGridText) {
  const CorpusReport r = evaluate_corpus(fixture_items(), "test_seen");
  const std::string text = format_report_text(r);
  EXPECT_NE(text.find("test_seen"), std::string::npos);
  EXPECT_NE(text.find("BLEU-4"), std::string::npos);
  const std::string grid = format_grid_text(compare_configs(load_fixture_reports()));
  EXPECT_NE(grid.find("fed_turn_basic"), std::string::npos);
  EXPECT_NE(grid.find("+5.4998"), std::string::npos);
}

}  // namespace
}  // namespace kgrerank
