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

// kgrerank rerank  --input examples.jsonl --output picked.jsonl [--config run.json]
// kgrerank eval    --pred picked.jsonl --input examples.jsonl
// kgrerank compare --reports reports/
//
// Exit codes: 0 success, 1 data or strict-mode failure, 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "kgrerank/evalharness.hpp"
#include "kgrerank/http_scorer.hpp"
#include "kgrerank/io.hpp"
#include "kgrerank/reranker.hpp"

namespace fs = std::filesystem;
using namespace kgrerank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

constexpr const char* kEndpointEnv = "PICK_SCORER_URL";

struct RerankArgs {
  std::string input, output, config;
  std::optional<std::string> scorer_url, mock_scorer, relevance_set, faithfulness;
  std::optional<std::size_t> concurrency;
  bool strict = false;
  bool lenient = false;
};

struct EvalArgs {
  std::string pred, input, split = "test", kn_copy_mode = "span", output;
  std::string relevance_label, faithfulness_label;
  bool json_out = false;
  bool vanilla = false;
};

struct CompareArgs {
  std::string reports, output;
  bool json_out = false;
};

// Resolves flags over the config file over the environment.
RunConfig resolve_run_config(const RerankArgs& a) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (a.faithfulness) cfg.scorer.faithfulness = parse_faithfulness(*a.faithfulness);
  if (a.relevance_set) cfg.scorer.relevance = parse_relevance_set(*a.relevance_set);
  if (a.concurrency) cfg.concurrency = *a.concurrency;
  if (a.strict) cfg.strict = true;
  if (a.lenient) cfg.strict = false;
  if (a.mock_scorer) {
    cfg.scorer_endpoint = "mock:" + *a.mock_scorer;
  } else if (a.scorer_url) {
    cfg.scorer_endpoint = *a.scorer_url;
  } else if (cfg.scorer_endpoint.empty()) {
    if (const char* env = std::getenv(kEndpointEnv)) cfg.scorer_endpoint = env;
  }
  cfg.validate();
  if (cfg.scorer.uses_relevance() && cfg.scorer_endpoint.empty()) {
    throw ConfigError("relevance set '" + std::string(to_string(cfg.scorer.relevance)) +
                      "' needs a scorer: pass --scorer-url, --mock-scorer or set " +
                      kEndpointEnv);
  }
  return cfg;
}

int run_rerank(const RerankArgs& a) {
  RunConfig cfg;
  std::unique_ptr<RelevanceScorer> client;
  try {
    cfg = resolve_run_config(a);
    if (cfg.scorer.uses_relevance()) client = make_scorer(cfg.scorer_endpoint);
  } catch (const Error& e) {
    std::cerr << "kgrerank rerank: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<StreamInput> inputs;
  try {
    inputs = load_examples(a.input);
  } catch (const Error& e) {
    std::cerr << "kgrerank rerank: " << a.input << ": " << e.what() << '\n';
    return kExitFailure;
  }

  std::vector<StreamItem> results;
  try {
    results = rerank_stream(inputs, cfg.scorer, cfg.filter, client.get(),
                            {cfg.concurrency, !cfg.strict});
  } catch (const std::exception& e) {
    std::cerr << "kgrerank rerank: " << e.what() << '\n';
    return kExitFailure;
  }

  std::ofstream out(a.output, std::ios::binary);
  if (!out) {
    std::cerr << "kgrerank rerank: cannot write '" << a.output << "'\n";
    return kExitFailure;
  }
  std::size_t errors = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    errors += std::holds_alternative<ErrorRecord>(results[i]);
    out << stream_item_line(results[i], inputs[i].source_line) << '\n';
  }
  if (errors) {
    std::cerr << "kgrerank rerank: " << errors << " of " << results.size()
              << " examples failed (error records written)\n";
  }
  return kExitOk;
}

int run_eval(const EvalArgs& a) {
  KnCopyMode mode;
  if (a.kn_copy_mode == "span") {
    mode = KnCopyMode::kSpan;
  } else if (a.kn_copy_mode == "exact") {
    mode = KnCopyMode::kExact;
  } else {
    std::cerr << "kgrerank eval: --kn-copy-mode must be span or exact\n";
    return kExitUsage;
  }

  try {
    const auto inputs = load_examples(a.input);
    std::map<std::string, const StreamInput*> by_id;
    for (const auto& in : inputs) {
      if (!by_id.emplace(in.example.id, &in).second) {
        throw ConfigError("duplicate example id '" + in.example.id + "' in " + a.input);
      }
    }
    std::ifstream pin(a.pred);
    if (!pin) throw ConfigError("cannot open predictions '" + a.pred + "'");
    std::size_t skipped = 0;
    const auto preds = read_predictions(pin, &skipped);
    if (skipped) {
      std::cerr << "kgrerank eval: skipping " << skipped << " error records\n";
    }

    std::vector<EvalItem> items, vanilla;
    for (const auto& p : preds) {
      auto it = by_id.find(p.id);
      if (it == by_id.end()) {
        throw ConfigError("prediction id '" + p.id + "' not found in " + a.input);
      }
      const auto& ex = it->second->example;
      items.push_back({ex.id, ex.knowledge, ex.gold_response, p.selected_text,
                       p.fallback_used});
      vanilla.push_back({ex.id, ex.knowledge, ex.gold_response,
                         it->second->pool.candidates.front(), false});
    }

    std::optional<ConfigLabel> label;
    if (!a.relevance_label.empty() || !a.faithfulness_label.empty()) {
      label = ConfigLabel{a.relevance_label, a.faithfulness_label};
    }
    const CorpusReport report = evaluate_corpus(items, a.split, mode);
    json j = report_to_json(report, label);
    std::optional<CorpusReport> base;
    if (a.vanilla) {
      base = evaluate_corpus(vanilla, a.split + "/vanilla", mode);
      j["vanilla"] = report_to_json(*base);
    }

    if (!a.output.empty()) {
      std::ofstream out(a.output);
      if (!out) throw ConfigError("cannot write '" + a.output + "'");
      out << j.dump(2) << '\n';
    }
    if (a.json_out) {
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << format_report_text(report);
      if (base) {
        const std::string table = format_report_text(*base);
        std::cout << table.substr(table.find('\n') + 1);
      }
    }
  } catch (const Error& e) {
    std::cerr << "kgrerank eval: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

// Config label of a report file: its "config" object, else a
// "<relevance>__<faithfulness>.json" file name, else the bare stem.
ConfigLabel label_for(const fs::path& file, const std::optional<ConfigLabel>& embedded) {
  if (embedded) return *embedded;
  const std::string stem = file.stem().string();
  const auto sep = stem.find("__");
  if (sep == std::string::npos) return {stem, "-"};
  return {stem.substr(0, sep), stem.substr(sep + 2)};
}

int run_compare(const CompareArgs& a) {
  try {
    if (!fs::is_directory(a.reports)) {
      throw ConfigError("'" + a.reports + "' is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.reports)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::pair<ConfigLabel, CorpusReport>> reports;
    for (const auto& f : files) {
      std::ifstream in(f);
      std::optional<ConfigLabel> embedded;
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(f.string() + ": " + e.what());
      }
      CorpusReport r = report_from_json(j, &embedded);
      reports.emplace_back(label_for(f, embedded), std::move(r));
    }
    const ComparisonGrid grid = compare_configs(reports);
    const json j = grid_to_json(grid);
    if (!a.output.empty()) {
      std::ofstream out(a.output);
      if (!out) throw ConfigError("cannot write '" + a.output + "'");
      out << j.dump(2) << '\n';
    }
    if (a.json_out) {
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << format_grid_text(grid);
    }
  } catch (const Error& e) {
    std::cerr << "kgrerank compare: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Re-rank knowledge-grounded dialogue response candidates and evaluate them"};
  app.require_subcommand(1);

  RerankArgs ra;
  auto* rerank_cmd = app.add_subcommand("rerank", "Select the best candidate per example");
  rerank_cmd->add_option("--input", ra.input, "Input examples (JSON Lines)")->required();
  rerank_cmd->add_option("--output", ra.output, "Output results (JSON Lines)")->required();
  rerank_cmd->add_option("--config", ra.config, "Run configuration (JSON)");
  rerank_cmd->add_option("--scorer-url", ra.scorer_url,
                         std::string("Relevance scorer base URL (default: $") + kEndpointEnv + ")");
  rerank_cmd->add_option("--mock-scorer", ra.mock_scorer, "Built-in scorer: zero or neg-length");
  rerank_cmd->add_option("--relevance-set", ra.relevance_set,
                         "fed_turn_basic, fed_turn_further, fed_dialogue_basic, "
                         "fed_dialogue_further, fed_turn_all, fed_dialogue_all, fed_all, none");
  rerank_cmd->add_option("--faithfulness", ra.faithfulness,
                         "kf1, sentence_bleu4, rouge_l, none");
  rerank_cmd->add_option("--concurrency", ra.concurrency, "Examples scored in parallel");
  auto* strict = rerank_cmd->add_flag("--strict", ra.strict, "Abort on the first failing example");
  rerank_cmd->add_flag("--lenient", ra.lenient, "Write error records and keep going")
      ->excludes(strict);

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "Score selected responses against gold");
  eval_cmd->add_option("--pred", ea.pred, "rerank output (JSON Lines)")->required();
  eval_cmd->add_option("--input", ea.input, "Examples with gold responses")->required();
  eval_cmd->add_option("--split", ea.split, "Split name recorded in the report");
  eval_cmd->add_option("--kn-copy-mode", ea.kn_copy_mode, "span or exact");
  eval_cmd->add_option("--output", ea.output, "Write the JSON report here");
  eval_cmd->add_option("--relevance-label", ea.relevance_label, "Config label for compare");
  eval_cmd->add_option("--faithfulness-label", ea.faithfulness_label, "Config label for compare");
  eval_cmd->add_flag("--vanilla", ea.vanilla, "Also report the decoder's top candidate");
  eval_cmd->add_flag("--json", ea.json_out, "Print JSON instead of a table");

  CompareArgs ca;
  auto* compare_cmd = app.add_subcommand("compare", "Mean-normalized comparison of reports");
  compare_cmd->add_option("--reports", ca.reports, "Directory of JSON reports")->required();
  compare_cmd->add_option("--output", ca.output, "Write the JSON grid here");
  compare_cmd->add_flag("--json", ca.json_out, "Print JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (rerank_cmd->parsed()) return run_rerank(ra);
  if (eval_cmd->parsed()) return run_eval(ea);
  return run_compare(ca);
}
