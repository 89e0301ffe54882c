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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "corpusforge/stats.hpp"
#include "test_support.hpp"

namespace cf = corpusforge;
namespace st = corpusforge::stats;
using testing_support::TempDir;

namespace {

cf::CleanArticle article(std::int64_t id, std::string text, std::size_t words = 0,
                         std::string host = "sr.wikipedia.org") {
  cf::CleanArticle a;
  a.page_id = id;
  a.title = "A" + std::to_string(id);
  a.url = "https://" + host + "/wiki/A" + std::to_string(id);
  a.text = std::move(text);
  a.word_count = words ? words : cf::text::count_words(a.text);
  return a;
}

std::vector<cf::CleanArticle> random_corpus(unsigned seed, std::size_t n) {
  std::mt19937 rng(seed);
  std::vector<cf::CleanArticle> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int k = 0; k < 80; ++k) {
      // Zipf-like: low ids far more common.
      const auto r = rng() % 200;
      const auto w = r * r / 400;
      text += 't';
      text += static_cast<char>('a' + w % 26);
      text += static_cast<char>('a' + w / 26);
      text += ' ';
    }
    out.push_back(article(static_cast<std::int64_t>(i + 1), text));
  }
  return out;
}

st::FreqProfile manual(std::vector<std::pair<std::string, double>> entries) {
  st::FreqProfile p;
  for (auto& [t, f] : entries) {
    p.tokens.push_back(t);
    p.rel_freq[t] = f;
  }
  p.total_tokens = 1;
  return p;
}

}  // namespace

TEST(Profile, RelativeFrequencies) {
  auto p = st::profile({article(1, "a a b")}, 2);
  EXPECT_DOUBLE_EQ(p.freq("a"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.freq("b"), 1.0 / 3.0);
  EXPECT_EQ(p.tokens, (std::vector<std::string>{"a", "b"}));
}

TEST(Profile, LargeKKeepsWholeVocabulary) {
  auto p = st::profile({article(1, "a a b c")}, 100);
  EXPECT_EQ(p.tokens.size(), 3u);
}

TEST(Profile, OrderInvariant) {
  auto corpus = random_corpus(1, 30);
  auto p = st::profile(corpus, 20);
  std::reverse(corpus.begin(), corpus.end());
  auto q = st::profile(corpus, 20);
  EXPECT_EQ(p.tokens, q.tokens);
  EXPECT_EQ(p.rel_freq, q.rel_freq);
}

TEST(Profile, SumsToOne) {
  auto p = st::profile(random_corpus(2, 20), 5);
  double sum = 0.0;
  for (const auto& [t, f] : p.rel_freq) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Profile, EmptyCorpusIsError) {
  EXPECT_THROW(st::profile(std::vector<cf::CleanArticle>{}, 10), cf::Error);
  EXPECT_THROW(st::profile({article(1, "a")}, 0), cf::ConfigError);
}

TEST(CosineDelta, IdenticalProfilesGiveZero) {
  auto p = st::profile(random_corpus(3, 40), 100);
  EXPECT_NEAR(st::cosine_delta(p, p), 0.0, 1e-12);
  EXPECT_NEAR(st::cosine_delta(p, p, st::AxisMode::kUnion), 0.0, 1e-12);
}

TEST(CosineDelta, AntiCorrelatedGiveTwo) {
  // Over axis a,b,c the standardised vectors are (+1,0,-1) and (-1,0,+1).
  auto p = manual({{"a", 0.5}, {"b", 0.3}, {"c", 0.1}});
  auto q = manual({{"c", 0.5}, {"b", 0.3}, {"a", 0.1}});
  EXPECT_NEAR(st::cosine_delta(p, q, std::vector<std::string>{"a", "b", "c"}), 2.0, 1e-12);
}

TEST(CosineDelta, SymmetricAndBounded) {
  auto p = st::profile(random_corpus(4, 30), 50);
  auto q = st::profile(random_corpus(5, 30), 50);
  const double d1 = st::cosine_delta(p, q, st::AxisMode::kUnion);
  const double d2 = st::cosine_delta(q, p, st::AxisMode::kUnion);
  EXPECT_NEAR(d1, d2, 1e-12);
  EXPECT_GE(d1, 0.0);
  EXPECT_LE(d1, 2.0);
}

TEST(CosineDelta, ScaleInvariance) {
  auto corpus = random_corpus(6, 25);
  auto other = random_corpus(7, 25);
  cf::encode::Counts counts, scaled;
  for (const auto& a : corpus) cf::encode::count_tokens(a.text, counts);
  for (const auto& [t, n] : counts) scaled[t] = n * 10;
  auto p = st::profile_from_counts(counts, 100);
  auto p10 = st::profile_from_counts(scaled, 100);
  EXPECT_EQ(p.tokens, p10.tokens);
  for (const auto& [t, f] : p.rel_freq) EXPECT_NEAR(f, p10.freq(t), 1e-15);
  auto q = st::profile(other, 100);
  EXPECT_NEAR(st::cosine_delta(p, q), st::cosine_delta(p10, q), 1e-12);
}

TEST(CosineDelta, ZeroVarianceIsError) {
  auto flat = manual({{"a", 0.5}, {"b", 0.5}});
  auto other = manual({{"a", 0.9}, {"b", 0.1}});
  EXPECT_THROW(st::cosine_delta(flat, other), cf::Error);
}

TEST(CosineDelta, PlainModeUsesRawFrequencies) {
  auto p = manual({{"a", 0.6}, {"b", 0.4}});
  auto q = manual({{"a", 0.4}, {"b", 0.6}});
  const std::vector<std::string> axis{"a", "b"};
  const double expected = 1.0 - (0.6 * 0.4 + 0.4 * 0.6) / (0.36 + 0.16);
  EXPECT_NEAR(st::cosine_delta(p, q, axis, true), expected, 1e-12);
}

TEST(CosineDelta, AxisModes) {
  auto p = manual({{"a", 0.5}, {"b", 0.3}});
  auto q = manual({{"c", 0.6}, {"a", 0.2}});
  EXPECT_EQ(st::reference_axis(p, q), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(st::reference_axis(p, q, st::AxisMode::kUnion),
            (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Report, Reductions) {
  std::vector<cf::CleanArticle> before, after;
  for (int i = 1; i <= 10; ++i) before.push_back(article(i, "x", 500));
  for (int i = 1; i <= 6; ++i) after.push_back(article(i, "x", 500));
  after.push_back(article(7, "x", 600));
  auto c = st::report(before, after);
  EXPECT_EQ(c.before.total.articles, 10u);
  EXPECT_EQ(c.before.total.words, 5000u);
  EXPECT_EQ(c.after.total.articles, 7u);
  EXPECT_EQ(c.after.total.words, 3600u);
  EXPECT_NEAR(c.article_reduction(), 30.0, 1e-12);
  EXPECT_NEAR(c.word_reduction(), 28.0, 1e-12);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Report, IdenticalCorporaZeroReduction) {
  auto corpus = random_corpus(8, 5);
  auto c = st::report(corpus, corpus);
  EXPECT_EQ(c.article_reduction(), 0.0);
  EXPECT_EQ(c.word_reduction(), 0.0);
}

TEST(Report, NonSubsetWarns) {
  auto c = st::report({article(1, "a"), article(2, "b")}, {article(1, "a"), article(3, "c")});
  ASSERT_EQ(c.warnings.size(), 1u);
  EXPECT_NE(c.warnings[0].find("1 article"), std::string::npos);
}

TEST(Report, PerProjectBreakdownAndTable) {
  auto c = st::report({article(1, "a b", 0, "sr.wikipedia.org"),
                       article(2, "a b c", 0, "sr.wikiquote.org")},
                      {article(1, "a b", 0, "sr.wikipedia.org")});
  ASSERT_EQ(c.before.per_project.size(), 2u);
  EXPECT_EQ(c.before.per_project.at("sr.wikiquote.org").words, 3u);
  auto table = c.render_table();
  EXPECT_NE(table.find("sr.wikiquote.org"), std::string::npos);
  EXPECT_NE(table.find("Total"), std::string::npos);
  auto j = c.to_json();
  EXPECT_EQ(j["projects"]["sr.wikiquote.org"]["after"]["articles"], 0);
}

TEST(Report, FromFiles) {
  TempDir dir;
  cf::write_articles({article(1, "a b"), article(2, "c")}, dir / "before.jsonl");
  cf::write_articles({article(2, "c")}, dir / "after.jsonl");
  auto c = st::report(dir / "before.jsonl", dir / "after.jsonl");
  EXPECT_EQ(c.before.total.articles, 2u);
  EXPECT_EQ(c.after.total.words, 1u);
  auto p = st::profile(dir / "before.jsonl", 10);
  EXPECT_DOUBLE_EQ(p.freq("a"), 1.0 / 3.0);
}
