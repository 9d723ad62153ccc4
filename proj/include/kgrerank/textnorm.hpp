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

// Tokenization shared by every overlap metric and filter.
//
// normalize() is the metric view of a text: NFC, lowercased, Unicode
// punctuation (gc=P*) deleted, the articles "a", "an", "the" dropped, split
// on Unicode whitespace. raw_tokenize() is the surface view used by the
// candidate filters: whitespace split only.

#ifndef KGRERANK_TEXTNORM_HPP_
#define KGRERANK_TEXTNORM_HPP_

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/locid.h>
#include <unicode/unistr.h>

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kgrerank {

class TokenSequence {
 public:
  using value_type = std::string;
  using const_iterator = std::vector<std::string>::const_iterator;

  TokenSequence() = default;
  TokenSequence(std::vector<std::string> tokens, std::size_t source_len_chars)
      : tokens_(std::move(tokens)), source_len_chars_(source_len_chars) {}
  // Pre-tokenized input, mostly for tests and corpus fixtures.
  TokenSequence(std::initializer_list<std::string> tokens)
      : tokens_(tokens) {}
  explicit TokenSequence(std::vector<std::string> tokens)
      : tokens_(std::move(tokens)) {}

  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t source_len_chars() const noexcept { return source_len_chars_; }

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  const_iterator begin() const noexcept { return tokens_.begin(); }
  const_iterator end() const noexcept { return tokens_.end(); }

  // Space-joined tokens.
  std::string joined() const {
    std::string out;
    for (const auto& t : tokens_) {
      if (!out.empty()) out.push_back(' ');
      out += t;
    }
    return out;
  }

  // Equality is over tokens only; source_len_chars describes provenance.
  friend bool operator==(const TokenSequence& a, const TokenSequence& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t source_len_chars_ = 0;
};

namespace textnorm_detail {

inline const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
      throw std::runtime_error("ICU NFC normalizer unavailable");
    }
    return n;
  }();
  return *instance;
}

inline icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  return U_FAILURE(status) ? s : out;
}

inline bool is_article(std::string_view tok) {
  return tok == "a" || tok == "an" || tok == "the";
}

inline icu::UnicodeString from_utf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

}  // namespace textnorm_detail

// Number of code points in a UTF-8 string (continuation bytes skipped).
inline std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) n += (c & 0xC0u) != 0x80u;
  return n;
}

inline TokenSequence normalize(std::string_view text) {
  using namespace textnorm_detail;
  icu::UnicodeString s = to_nfc(from_utf8(text));
  s.toLower(icu::Locale::getRoot());

  std::vector<std::string> tokens;
  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    // Deleting punctuation can leave combining marks next to a base letter.
    std::string tok;
    to_nfc(current).toUTF8String(tok);
    current.remove();
    if (!is_article(tok)) tokens.push_back(std::move(tok));
  };
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      flush();
    } else if (!u_ispunct(c)) {
      current.append(c);
    }
  }
  flush();
  return TokenSequence(std::move(tokens), utf8_length(text));
}

inline TokenSequence raw_tokenize(std::string_view text) {
  using namespace textnorm_detail;
  const icu::UnicodeString s = from_utf8(text);
  std::vector<std::string> tokens;
  int32_t start = -1;
  auto flush = [&](int32_t end) {
    if (start < 0) return;
    std::string tok;
    s.tempSubStringBetween(start, end).toUTF8String(tok);
    tokens.push_back(std::move(tok));
    start = -1;
  };
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) {
      flush(i);
    } else if (start < 0) {
      start = i;
    }
    i += U16_LENGTH(c);
  }
  flush(s.length());
  return TokenSequence(std::move(tokens), utf8_length(text));
}

}  // namespace kgrerank

#endif  // KGRERANK_TEXTNORM_HPP_
