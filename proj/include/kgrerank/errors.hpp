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

#ifndef KGRERANK_ERRORS_HPP_
#define KGRERANK_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgrerank {

// Base class for every error raised by the library. kind() is a stable
// identifier used in JSON error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class EmptyCorpus : public Error {
 public:
  explicit EmptyCorpus(const std::string& what = "corpus is empty")
      : Error("EmptyCorpus", what) {}
};

class EmptyPool : public Error {
 public:
  EmptyPool() : Error("EmptyPool", "candidate pool is empty") {}
};

class MissingGold : public Error {
 public:
  explicit MissingGold(const std::string& id)
      : Error("MissingGold", "example '" + id + "' has no gold_response") {}
};

class TooFewConfigs : public Error {
 public:
  explicit TooFewConfigs(std::size_t n)
      : Error("TooFewConfigs", "need at least 2 configs to compare, got " +
                                   std::to_string(n)) {}
};

// Transport failure talking to a relevance scorer, after retries.
class ScorerUnavailable : public Error {
 public:
  explicit ScorerUnavailable(const std::string& what)
      : Error("ScorerUnavailable", what) {}
};

// The scorer answered, but not with what the wire protocol promises.
class ScorerProtocol : public Error {
 public:
  explicit ScorerProtocol(const std::string& what)
      : Error("ScorerProtocol", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("ParseError",
              "line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, std::string field, const std::string& reason)
      : Error("SchemaError", "line " + std::to_string(line) + ": field '" +
                                 field + "': " + reason),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

}  // namespace kgrerank

#endif  // KGRERANK_ERRORS_HPP_
