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

// JSON Lines records, run configuration and report serialization.
//
// Input record, one per line:
//   {"id", "topic", "knowledge", "history": [{"speaker": "user"|"system",
//    "text"}], "gold_response"?, "turn_index"?, "candidates": [string],
//    "decode_meta": {"strategy": "beam"|"top_k"|"top_p"|"greedy",
//                    "n"?, "k"?, "p"?, "r"}}

#ifndef KGRERANK_IO_HPP_
#define KGRERANK_IO_HPP_

#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "kgrerank/errors.hpp"
#include "kgrerank/evalharness.hpp"
#include "kgrerank/filters.hpp"
#include "kgrerank/reranker.hpp"
#include "kgrerank/scoring.hpp"
#include "kgrerank/types.hpp"

namespace kgrerank {

using json = nlohmann::json;

namespace io_detail {

inline const json& require(const json& obj, std::string_view key,
                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(line, std::string(key), "missing");
  return *it;
}

inline std::string require_string(const json& obj, std::string_view key,
                                  std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string()) throw SchemaError(line, std::string(key), "expected a string");
  return v.get<std::string>();
}

inline std::optional<int> optional_int(const json& obj, std::string_view key,
                                       std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw SchemaError(line, std::string(key), "expected an integer");
  }
  return it->get<int>();
}

inline DecodeStrategy parse_strategy(const std::string& s, std::size_t line) {
  if (s == "beam") return DecodeStrategy::kBeam;
  if (s == "top_k") return DecodeStrategy::kTopK;
  if (s == "top_p") return DecodeStrategy::kTopP;
  if (s == "greedy") return DecodeStrategy::kGreedy;
  throw SchemaError(line, "decode_meta.strategy", "unknown strategy '" + s + "'");
}

}  // namespace io_detail

// Validates one parsed record. `line` is only used for diagnostics.
inline StreamInput record_from_json(const json& j, std::size_t line) {
  using namespace io_detail;
  if (!j.is_object()) throw SchemaError(line, "<record>", "expected an object");
  StreamInput rec;
  rec.source_line = line;
  auto& ex = rec.example;
  ex.id = require_string(j, "id", line);
  ex.topic = require_string(j, "topic", line);
  ex.knowledge = require_string(j, "knowledge", line);

  const json& hist = require(j, "history", line);
  if (!hist.is_array() || hist.empty()) {
    throw SchemaError(line, "history", "expected a non-empty array");
  }
  int user_turns = 0;
  for (const auto& u : hist) {
    if (!u.is_object()) throw SchemaError(line, "history", "entries must be objects");
    const std::string speaker = require_string(u, "speaker", line);
    Utterance utt;
    if (speaker == "user") {
      utt.speaker = Speaker::kUser;
      ++user_turns;
    } else if (speaker == "system") {
      utt.speaker = Speaker::kSystem;
    } else {
      throw SchemaError(line, "history.speaker",
                        "expected 'user' or 'system', got '" + speaker + "'");
    }
    utt.text = require_string(u, "text", line);
    ex.history.push_back(std::move(utt));
  }
  if (ex.history.back().speaker != Speaker::kUser) {
    throw SchemaError(line, "history", "last entry must be the user utterance");
  }

  if (auto it = j.find("gold_response"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw SchemaError(line, "gold_response", "expected a string");
    ex.gold_response = it->get<std::string>();
  }
  ex.turn_index = optional_int(j, "turn_index", line).value_or(user_turns);
  if (ex.turn_index < 1) throw SchemaError(line, "turn_index", "must be >= 1");

  const json& cands = require(j, "candidates", line);
  if (!cands.is_array() || cands.empty()) {
    throw SchemaError(line, "candidates", "expected a non-empty array");
  }
  for (const auto& c : cands) {
    if (!c.is_string()) throw SchemaError(line, "candidates", "entries must be strings");
    rec.pool.candidates.push_back(c.get<std::string>());
  }

  const json& meta = require(j, "decode_meta", line);
  if (!meta.is_object()) throw SchemaError(line, "decode_meta", "expected an object");
  auto& dm = rec.pool.decode_meta;
  dm.strategy = parse_strategy(require_string(meta, "strategy", line), line);
  dm.n = optional_int(meta, "n", line);
  dm.k = optional_int(meta, "k", line);
  if (auto it = meta.find("p"); it != meta.end() && !it->is_null()) {
    if (!it->is_number()) throw SchemaError(line, "decode_meta.p", "expected a number");
    dm.p = it->get<double>();
  }
  const json& r = require(meta, "r", line);
  if (!r.is_number_unsigned()) {
    throw SchemaError(line, "decode_meta.r", "expected a positive integer");
  }
  dm.r = r.get<std::size_t>();
  if (dm.r != rec.pool.size()) {
    throw SchemaError(line, "decode_meta.r",
                      "r = " + std::to_string(dm.r) + " but " +
                          std::to_string(rec.pool.size()) + " candidates given");
  }
  return rec;
}

inline json record_to_json(const StreamInput& rec) {
  const auto& ex = rec.example;
  json hist = json::array();
  for (const auto& u : ex.history) {
    hist.push_back({{"speaker", to_string(u.speaker)}, {"text", u.text}});
  }
  json j = {{"id", ex.id},
            {"topic", ex.topic},
            {"knowledge", ex.knowledge},
            {"history", std::move(hist)}};
  if (ex.gold_response) j["gold_response"] = *ex.gold_response;
  j["turn_index"] = ex.turn_index;
  j["candidates"] = rec.pool.candidates;
  const auto& dm = rec.pool.decode_meta;
  json meta = {{"strategy", to_string(dm.strategy)}};
  if (dm.n) meta["n"] = *dm.n;
  if (dm.k) meta["k"] = *dm.k;
  if (dm.p) meta["p"] = *dm.p;
  meta["r"] = dm.r;
  j["decode_meta"] = std::move(meta);
  return j;
}

// Blank lines are skipped; line numbers stay those of the file.
inline std::vector<StreamInput> read_examples(std::istream& in) {
  std::vector<StreamInput> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, e.what());
    }
    out.push_back(record_from_json(j, line));
  }
  return out;
}

inline std::vector<StreamInput> load_examples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file '" + path + "'");
  return read_examples(in);
}

inline void write_examples(std::ostream& out, const std::vector<StreamInput>& recs) {
  for (const auto& r : recs) out << record_to_json(r).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Rerank output

inline json breakdown_to_json(const ScoreBreakdown& b) {
  json reasons = json::array();
  for (auto r : b.verdict.reasons) reasons.push_back(to_string(r));
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {{"candidate_index", b.candidate_index},
          {"filtered", b.filtered},
          {"reasons", std::move(reasons)},
          {"mu_d", opt(b.mu_d)},
          {"mu_k", opt(b.mu_k)},
          {"mu", opt(b.mu)}};
}

inline json result_to_json(const RerankResult& r) {
  json bds = json::array();
  for (const auto& b : r.breakdowns) bds.push_back(breakdown_to_json(b));
  return {{"id", r.id},
          {"selected_index", r.selected_index},
          {"selected_text", r.selected_text},
          {"fallback_used", r.fallback_used},
          {"breakdowns", std::move(bds)}};
}

inline json error_to_json(const ErrorRecord& e, std::size_t line = 0) {
  json err = {{"kind", e.kind}, {"message", e.message}};
  json j = {{"id", e.id}, {"error", std::move(err)}};
  if (line) j["line"] = line;
  return j;
}

inline std::string stream_item_line(const StreamItem& item, std::size_t line = 0) {
  return std::visit(
      [&](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, RerankResult>) {
          return result_to_json(v).dump();
        } else {
          return error_to_json(v, line).dump();
        }
      },
      item);
}

struct Prediction {
  std::string id;
  std::string selected_text;
  bool fallback_used = false;
};

// Rerank output lines; error records are counted and skipped.
inline std::vector<Prediction> read_predictions(std::istream& in,
                                                std::size_t* skipped_errors = nullptr) {
  std::vector<Prediction> out;
  std::string text;
  std::size_t line = 0, errors = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, e.what());
    }
    if (!j.is_object()) throw SchemaError(line, "<record>", "expected an object");
    if (j.contains("error")) {
      ++errors;
      continue;
    }
    Prediction p;
    p.id = io_detail::require_string(j, "id", line);
    p.selected_text = io_detail::require_string(j, "selected_text", line);
    if (auto it = j.find("fallback_used"); it != j.end()) {
      if (!it->is_boolean()) throw SchemaError(line, "fallback_used", "expected a boolean");
      p.fallback_used = it->get<bool>();
    }
    out.push_back(std::move(p));
  }
  if (skipped_errors) *skipped_errors = errors;
  return out;
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  ScorerConfig scorer;
  FilterPolicy filter;
  std::string scorer_endpoint;  // "mock:<name>", http://..., or empty
  std::size_t concurrency = 1;
  bool strict = false;

  void validate() const {
    scorer.validate();
    if (filter.max_word_chars == 0 || filter.rep_run == 0) {
      throw ConfigError("filter thresholds must be positive");
    }
    if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
    if (!scorer_endpoint.empty()) {
      static const std::regex re(
          R"(^(mock:[a-z\-]+|http://[A-Za-z0-9.\-]+(:[0-9]{1,5})?(/[^?#]*)?)$)");
      if (!std::regex_match(scorer_endpoint, re)) {
        throw ConfigError("malformed scorer endpoint '" + scorer_endpoint + "'");
      }
    }
  }
};

namespace io_detail {

inline void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                       const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T get_as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for " + what + ": " + j.dump());
  }
}

inline std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : j) out.push_back(get_as<std::string>(s, what));
  return out;
}

}  // namespace io_detail

inline QualityDimension dimension_from_json(const json& j) {
  using namespace io_detail;
  if (!j.is_object()) throw ConfigError("dimension entries must be objects");
  check_keys(j, {"name", "level", "tier", "positive", "negative"}, "dimension");
  QualityDimension d;
  d.name = get_as<std::string>(j.value("name", json()), "dimension.name");
  const auto level = get_as<std::string>(j.value("level", json()), "dimension.level");
  const auto tier = get_as<std::string>(j.value("tier", json()), "dimension.tier");
  if (level == "turn") d.level = DialogueLevel::kTurn;
  else if (level == "dialogue") d.level = DialogueLevel::kDialogue;
  else throw ConfigError("dimension.level must be 'turn' or 'dialogue'");
  if (tier == "basic") d.tier = QualityTier::kBasic;
  else if (tier == "further") d.tier = QualityTier::kFurther;
  else throw ConfigError("dimension.tier must be 'basic' or 'further'");
  if (j.contains("positive")) d.positive_followups = string_list(j["positive"], "dimension.positive");
  if (j.contains("negative")) d.negative_followups = string_list(j["negative"], "dimension.negative");
  if (d.positive_followups.empty() && d.negative_followups.empty()) {
    throw ConfigError("dimension '" + d.name + "' has no follow-ups");
  }
  return d;
}

inline json dimension_to_json(const QualityDimension& d) {
  return {{"name", d.name},
          {"level", d.level == DialogueLevel::kTurn ? "turn" : "dialogue"},
          {"tier", d.tier == QualityTier::kBasic ? "basic" : "further"},
          {"positive", d.positive_followups},
          {"negative", d.negative_followups}};
}

inline RunConfig run_config_from_json(const json& j) {
  using namespace io_detail;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(j, {"scorer", "filter", "scorer_endpoint", "concurrency", "mode", "dimensions"},
             "config");
  RunConfig cfg;
  if (auto it = j.find("scorer"); it != j.end()) {
    check_keys(*it, {"faithfulness", "relevance_set", "aggregation"}, "scorer");
    if (it->contains("faithfulness")) {
      cfg.scorer.faithfulness = parse_faithfulness(
          get_as<std::string>((*it)["faithfulness"], "scorer.faithfulness"));
    }
    if (it->contains("relevance_set")) {
      cfg.scorer.relevance = parse_relevance_set(
          get_as<std::string>((*it)["relevance_set"], "scorer.relevance_set"));
    }
    if (it->contains("aggregation")) {
      const json& a = (*it)["aggregation"];
      check_keys(a, {"kind", "w_d", "w_k"}, "scorer.aggregation");
      const auto kind = get_as<std::string>(a.value("kind", json("sum")), "aggregation.kind");
      if (kind == "sum") {
        cfg.scorer.aggregation = Aggregation::sum();
      } else if (kind == "weighted_sum") {
        cfg.scorer.aggregation = Aggregation::weighted(
            get_as<double>(a.value("w_d", json(1.0)), "aggregation.w_d"),
            get_as<double>(a.value("w_k", json(1.0)), "aggregation.w_k"));
      } else {
        throw ConfigError("aggregation.kind must be 'sum' or 'weighted_sum'");
      }
    }
  }
  if (auto it = j.find("filter"); it != j.end()) {
    check_keys(*it, {"max_word_chars", "rep_run"}, "filter");
    if (it->contains("max_word_chars")) {
      cfg.filter.max_word_chars =
          get_as<std::size_t>((*it)["max_word_chars"], "filter.max_word_chars");
    }
    if (it->contains("rep_run")) {
      cfg.filter.rep_run = get_as<std::size_t>((*it)["rep_run"], "filter.rep_run");
    }
  }
  if (j.contains("scorer_endpoint")) {
    cfg.scorer_endpoint = get_as<std::string>(j["scorer_endpoint"], "scorer_endpoint");
  }
  if (j.contains("concurrency")) {
    cfg.concurrency = get_as<std::size_t>(j["concurrency"], "concurrency");
  }
  if (j.contains("mode")) {
    const auto mode = get_as<std::string>(j["mode"], "mode");
    if (mode != "strict" && mode != "lenient") {
      throw ConfigError("mode must be 'strict' or 'lenient'");
    }
    cfg.strict = mode == "strict";
  }
  if (j.contains("dimensions")) {
    const json& d = j["dimensions"];
    if (!d.is_array() || d.empty()) throw ConfigError("dimensions must be a non-empty array");
    cfg.scorer.dimensions.clear();
    for (const auto& e : d) cfg.scorer.dimensions.push_back(dimension_from_json(e));
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return run_config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline json report_to_json(const CorpusReport& r,
                           const std::optional<ConfigLabel>& label = std::nullopt) {
  json j = {{"split", r.split_name},   {"n", r.n_examples},
            {"bleu4", r.bleu4},        {"rouge_l", r.rouge_l},
            {"f1", r.f1},              {"kf1", r.kf1},
            {"kn_copy_rate", r.kn_copy_rate},
            {"fallback_rate", r.fallback_rate}};
  if (label) {
    j["config"] = {{"relevance", label->relevance},
                   {"faithfulness", label->faithfulness}};
  }
  return j;
}

inline CorpusReport report_from_json(const json& j, std::optional<ConfigLabel>* label = nullptr) {
  using io_detail::get_as;
  if (!j.is_object()) throw ConfigError("report must be a JSON object");
  auto field = [&](const char* k) -> const json& {
    auto it = j.find(k);
    if (it == j.end()) throw ConfigError(std::string("report lacks '") + k + "'");
    return *it;
  };
  CorpusReport r;
  r.split_name = get_as<std::string>(field("split"), "split");
  r.n_examples = get_as<std::size_t>(field("n"), "n");
  r.bleu4 = get_as<double>(field("bleu4"), "bleu4");
  r.rouge_l = get_as<double>(field("rouge_l"), "rouge_l");
  r.f1 = get_as<double>(field("f1"), "f1");
  r.kf1 = get_as<double>(field("kf1"), "kf1");
  r.kn_copy_rate = get_as<double>(field("kn_copy_rate"), "kn_copy_rate");
  r.fallback_rate = get_as<double>(field("fallback_rate"), "fallback_rate");
  if (label) {
    label->reset();
    if (auto it = j.find("config"); it != j.end() && it->is_object()) {
      *label = ConfigLabel{get_as<std::string>(it->value("relevance", json("")), "config.relevance"),
                           get_as<std::string>(it->value("faithfulness", json("")), "config.faithfulness")};
    }
  }
  return r;
}

inline json grid_to_json(const ComparisonGrid& g) {
  json cells = json::array();
  for (const auto& row : g.cells) {
    json r = json::array();
    for (const auto& c : row) r.push_back(c ? json(*c) : json(nullptr));
    cells.push_back(std::move(r));
  }
  json configs = json::array();
  for (std::size_t i = 0; i < g.configs.size(); ++i) {
    json norm;
    for (std::size_t m = 0; m < kComparedMetrics.size(); ++m)
      norm[std::string(kComparedMetrics[m])] = g.normalized[m][i];
    configs.push_back({{"relevance", g.configs[i].relevance},
                       {"faithfulness", g.configs[i].faithfulness},
                       {"normalized", std::move(norm)},
                       {"total", g.totals[i]}});
  }
  return {{"rows", g.rows}, {"cols", g.cols}, {"cells", std::move(cells)},
          {"configs", std::move(configs)}};
}

}  // namespace kgrerank

#endif  // KGRERANK_IO_HPP_
