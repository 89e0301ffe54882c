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

#include <string>
#include <vector>

#include "corpusforge/io.hpp"
#include "corpusforge/wikitext/clean.hpp"

namespace corpusforge {

using wikitext::CleanArticle;

inline ordered_json to_json(const CleanArticle& a) {
  ordered_json j;
  j["id"] = a.page_id;
  j["title"] = a.title;
  j["url"] = a.url;
  j["text"] = a.text;
  j["categories"] = a.categories;
  j["word_count"] = a.word_count;
  j["cyrillic_ratio"] = a.cyrillic_ratio;
  return j;
}

inline CleanArticle article_from_json(const json& j) {
  try {
    CleanArticle a;
    a.page_id = j.at("id").get<std::int64_t>();
    a.title = j.value("title", std::string{});
    a.url = j.value("url", std::string{});
    a.text = j.at("text").get<std::string>();
    a.categories = j.value("categories", std::vector<std::string>{});
    a.word_count = j.contains("word_count") ? j.at("word_count").get<std::size_t>()
                                            : text::count_words(a.text);
    a.cyrillic_ratio = j.value("cyrillic_ratio", 0.0);
    return a;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed article record: ") + e.what());
  }
}

// Streams CleanArticle records from a JSONL file.
class ArticleReader {
 public:
  explicit ArticleReader(const fs::path& path) : reader_(path) {}

  std::optional<CleanArticle> next() {
    json j;
    if (!reader_.next(j)) return std::nullopt;
    try {
      return article_from_json(j);
    } catch (const IoError& e) {
      throw IoError(e.what() + std::string(" (line ") + std::to_string(reader_.line_number()) +
                    ")");
    }
  }

 private:
  JsonlReader reader_;
};

template <typename Fn>
void for_each_article(const fs::path& path, Fn&& fn) {
  ArticleReader reader(path);
  while (auto a = reader.next()) fn(std::move(*a));
}

inline std::vector<CleanArticle> read_articles(const fs::path& path) {
  std::vector<CleanArticle> out;
  for_each_article(path, [&out](CleanArticle a) { out.push_back(std::move(a)); });
  return out;
}

inline std::size_t write_articles(const std::vector<CleanArticle>& articles, const fs::path& path) {
  JsonlWriter out(path);
  for (const auto& a : articles) out.write(to_json(a));
  out.close();
  return out.count();
}

}  // namespace corpusforge
