// Copyright 2026 The corpusforge Authors.
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpusforge/error.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/records.hpp"
#include "corpusforge/utf8.hpp"

namespace corpusforge::encode {

inline constexpr std::uint32_t kUnknown = 0;

namespace detail {

inline bool is_combining_mark(char32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036F) || (cp >= 0x0483 && cp <= 0x0489);
}

}  // namespace detail

// Lowercased tokens: letter runs, "0" for each run of ASCII digits, and one
// token per remaining non-space character.
inline std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  bool in_digits = false;
  for (std::size_t i = 0; i < s.size();) {
    const auto d = utf8::decode(s, i);
    i += d.length;
    const char32_t cp = d.valid ? d.cp : utf8::kReplacement;
    if (cp >= '0' && cp <= '9') {
      if (!in_digits) {
        flush();
        tokens.emplace_back("0");
        in_digits = true;
      }
      continue;
    }
    in_digits = false;
    if (utf8::is_letter(cp) || (!word.empty() && detail::is_combining_mark(cp))) {
      utf8::append(word, utf8::to_lower(cp));
      continue;
    }
    flush();
    if (utf8::is_space(cp)) continue;
    std::string symbol;
    utf8::append(symbol, utf8::to_lower(cp));
    tokens.push_back(std::move(symbol));
  }
  flush();
  return tokens;
}

using Counts = std::unordered_map<std::string, std::uint64_t>;

inline void count_tokens(std::string_view text, Counts& counts) {
  for (auto& t : tokenize(text)) ++counts[std::move(t)];
}

inline void merge_counts(Counts& into, const Counts& from) {
  for (const auto& [token, n] : from) into[token] += n;
}

class Vocabulary {
 public:
  Vocabulary() = default;

  // Keeps tokens counted at least min_freq times. Indices run 1..V by
  // descending count, ties in byte order.
  static Vocabulary from_counts(const Counts& counts, std::uint64_t min_freq) {
    if (min_freq < 1) throw ConfigError("min_freq must be at least 1");
    Vocabulary v;
    v.min_freq_ = min_freq;
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (const auto& [token, n] : counts) {
      v.total_tokens_ += n;
      if (n >= min_freq) kept.emplace_back(token, n);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    v.tokens_.reserve(kept.size());
    for (auto& [token, n] : kept) {
      v.index_.emplace(token, static_cast<std::uint32_t>(v.tokens_.size() + 1));
      v.tokens_.push_back({std::move(token), n});
    }
    return v;
  }

  std::uint32_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnknown : it->second;
  }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  std::uint64_t min_freq() const { return min_freq_; }
  std::uint64_t total_tokens() const { return total_tokens_; }

  // Token and count for index 1..V.
  const std::string& token(std::uint32_t index) const { return tokens_.at(index - 1).first; }
  std::uint64_t frequency(std::uint32_t index) const { return tokens_.at(index - 1).second; }
  std::uint64_t frequency(const std::string& token) const {
    const auto i = index_of(token);
    return i == kUnknown ? 0 : frequency(i);
  }

  ordered_json to_json() const {
    ordered_json tokens = ordered_json::object();
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      tokens[tokens_[i].first] = {i + 1, tokens_[i].second};
    }
    return tokens;
  }

  // Writes {token: [index, frequency]}.
  void save(const fs::path& path) const { write_json_file(path, to_json()); }

  static Vocabulary from_json(const json& j, std::uint64_t min_freq = 1) {
    Vocabulary v;
    v.min_freq_ = min_freq;
    if (!j.is_object()) throw IoError("vocabulary must be a JSON object");
    v.tokens_.resize(j.size());
    for (const auto& [token, entry] : j.items()) {
      const auto index = entry.at(0).get<std::uint64_t>();
      if (index < 1 || index > v.tokens_.size() || !v.tokens_[index - 1].first.empty()) {
        throw IoError("vocabulary index out of range or repeated for '" + token + "'");
      }
      v.tokens_[index - 1] = {token, entry.at(1).get<std::uint64_t>()};
      v.index_.emplace(token, static_cast<std::uint32_t>(index));
    }
    return v;
  }

  static Vocabulary load(const fs::path& path) { return from_json(read_json_file(path)); }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::pair<std::string, std::uint64_t>> tokens_;
  std::uint64_t min_freq_ = 3;
  std::uint64_t total_tokens_ = 0;
};

// Counts in parallel over fixed-size slices, merged in slice order.
inline Vocabulary build_vocabulary(const std::vector<CleanArticle>& articles,
                                   std::uint64_t min_freq = 3, unsigned workers = 1) {
  constexpr std::size_t kSlice = 256;
  const std::size_t slices = (articles.size() + kSlice - 1) / kSlice;
  std::vector<Counts> partial(slices);
  parallel_for(slices, workers, [&](std::size_t s) {
    const std::size_t end = std::min(articles.size(), (s + 1) * kSlice);
    for (std::size_t i = s * kSlice; i < end; ++i) count_tokens(articles[i].text, partial[s]);
  });
  Counts total;
  for (const auto& c : partial) merge_counts(total, c);
  return Vocabulary::from_counts(total, min_freq);
}

struct EncodedArticle {
  std::int64_t page_id = 0;
  std::vector<std::uint32_t> vector;
  std::vector<std::string> categories;

  bool operator==(const EncodedArticle&) const = default;
};

struct EncodeOptions {
  std::size_t max_words = 2000;
  std::size_t prefix = 500;
};

// nullopt for articles over the word limit; they stay in the corpus but are
// never scored.
inline std::optional<EncodedArticle> encode_article(const CleanArticle& article,
                                                    const Vocabulary& vocab,
                                                    const EncodeOptions& options = {}) {
  if (article.word_count > options.max_words) return std::nullopt;
  EncodedArticle e{article.page_id, {}, article.categories};
  auto tokens = tokenize(article.text);
  const std::size_t n = std::min(tokens.size(), options.prefix);
  e.vector.reserve(n);
  for (std::size_t i = 0; i < n; ++i) e.vector.push_back(vocab.index_of(tokens[i]));
  return e;
}

inline ordered_json to_json(const EncodedArticle& e) {
  ordered_json j;
  j["id"] = e.page_id;
  j["vector"] = e.vector;
  j["categories"] = e.categories;
  return j;
}

inline EncodedArticle encoded_from_json(const json& j) {
  try {
    return {j.at("id").get<std::int64_t>(), j.at("vector").get<std::vector<std::uint32_t>>(),
            j.value("categories", std::vector<std::string>{})};
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed encoded record: ") + e.what());
  }
}

inline std::size_t write_encoded(const std::vector<EncodedArticle>& records, const fs::path& out) {
  JsonlWriter w(out);
  for (const auto& r : records) w.write(to_json(r));
  w.close();
  return w.count();
}

inline std::vector<EncodedArticle> read_encoded(const fs::path& path) {
  std::vector<EncodedArticle> out;
  JsonlReader r(path);
  json j;
  while (r.next(j)) out.push_back(encoded_from_json(j));
  return out;
}

struct EncodeResult {
  Vocabulary vocabulary;
  std::vector<EncodedArticle> encoded;
  std::size_t excluded_long = 0;
};

inline EncodeResult encode_corpus(const std::vector<CleanArticle>& articles,
                                  std::uint64_t min_freq = 3, const EncodeOptions& options = {},
                                  unsigned workers = 1) {
  EncodeResult r;
  r.vocabulary = build_vocabulary(articles, min_freq, workers);
  auto maybe = parallel_map(articles, workers, [&](const CleanArticle& a) {
    return encode_article(a, r.vocabulary, options);
  });
  for (auto& m : maybe) {
    if (m) {
      r.encoded.push_back(std::move(*m));
    } else {
      ++r.excluded_long;
    }
  }
  return r;
}

}  // namespace corpusforge::encode
