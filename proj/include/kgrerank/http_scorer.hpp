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

// HTTP client for a follow-up log-likelihood service.
//
//   POST <base>/v1/loglik        {"context","response","followup"}
//                                -> {"log_likelihood": number}
//   POST <base>/v1/loglik_batch  [request, ...] -> [reply, ...]  (aligned)
//
// Connection failures are retried; anything that is not a 200 with a
// well-formed body is a protocol error.

#ifndef KGRERANK_HTTP_SCORER_HPP_
#define KGRERANK_HTTP_SCORER_HPP_

#include <chrono>
#include <memory>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "kgrerank/errors.hpp"
#include "kgrerank/relevance.hpp"

namespace kgrerank {

struct HttpScorerOptions {
  int retries = 2;  // extra attempts after a transport failure
  std::chrono::milliseconds retry_backoff{200};
  std::chrono::seconds timeout{30};
};

struct ParsedEndpoint {
  std::string scheme_host_port;  // "http://host:port"
  std::string base_path;         // "" or "/prefix"
};

inline ParsedEndpoint parse_http_endpoint(const std::string& url) {
  static const std::regex re(R"(^(http://[A-Za-z0-9.\-]+(?::[0-9]{1,5})?)(/[^?#]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw ConfigError("malformed scorer endpoint '" + url +
                      "' (expected http://host[:port][/path] or mock:<name>)");
  }
  ParsedEndpoint out{m[1].str(), m[2].matched ? m[2].str() : ""};
  while (!out.base_path.empty() && out.base_path.back() == '/')
    out.base_path.pop_back();
  return out;
}

inline nlohmann::json to_json(const LoglikRequest& r) {
  return {{"context", r.context}, {"response", r.response}, {"followup", r.followup}};
}

inline double parse_loglik_reply(const nlohmann::json& j) {
  if (!j.is_object()) throw ScorerProtocol("reply is not a JSON object");
  auto it = j.find("log_likelihood");
  if (it == j.end() || !it->is_number()) {
    throw ScorerProtocol("reply lacks a numeric 'log_likelihood'");
  }
  return it->get<double>();
}

class HttpRelevanceScorer final : public RelevanceScorer {
 public:
  explicit HttpRelevanceScorer(const std::string& url,
                               HttpScorerOptions opts = {})
      : url_(url), endpoint_(parse_http_endpoint(url)), opts_(opts) {}

  double loglik(const LoglikRequest& req) override {
    return parse_loglik_reply(post("/v1/loglik", to_json(req)));
  }

  std::vector<double> loglik_batch(std::span<const LoglikRequest> reqs) override {
    if (reqs.empty()) return {};
    nlohmann::json body = nlohmann::json::array();
    for (const auto& r : reqs) body.push_back(to_json(r));
    const nlohmann::json reply = post("/v1/loglik_batch", body);
    if (!reply.is_array() || reply.size() != reqs.size()) {
      throw ScorerProtocol("batch reply is not an array of " +
                           std::to_string(reqs.size()) + " entries");
    }
    std::vector<double> out;
    out.reserve(reqs.size());
    for (const auto& r : reply) out.push_back(parse_loglik_reply(r));
    return out;
  }

  std::string name() const override { return url_; }

 private:
  // httplib::Client is not safe to share across threads; one per call.
  nlohmann::json post(const std::string& route, const nlohmann::json& body) {
    const std::string path = endpoint_.base_path + route;
    const std::string payload = body.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(opts_.retry_backoff * attempt);
      httplib::Client cli(endpoint_.scheme_host_port);
      cli.set_connection_timeout(opts_.timeout);
      cli.set_read_timeout(opts_.timeout);
      cli.set_write_timeout(opts_.timeout);
      auto res = cli.Post(path, payload, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        throw ScorerProtocol("POST " + path + " returned HTTP " +
                             std::to_string(res->status));
      }
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw ScorerProtocol("POST " + path + " returned malformed JSON: " +
                             e.what());
      }
    }
    throw ScorerUnavailable("POST " + endpoint_.scheme_host_port + path +
                            " failed after " + std::to_string(opts_.retries + 1) +
                            " attempts: " + last_error);
  }

  std::string url_;
  ParsedEndpoint endpoint_;
  HttpScorerOptions opts_;
};

// "mock:<name>" or an http:// URL.
inline std::unique_ptr<RelevanceScorer> make_scorer(const std::string& endpoint,
                                                    HttpScorerOptions opts = {}) {
  constexpr std::string_view kMock = "mock:";
  if (endpoint.starts_with(kMock)) {
    return make_mock_scorer(std::string_view(endpoint).substr(kMock.size()));
  }
  return std::make_unique<HttpRelevanceScorer>(endpoint, opts);
}

}  // namespace kgrerank

#endif  // KGRERANK_HTTP_SCORER_HPP_
