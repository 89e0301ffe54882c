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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpusforge/encode.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/records.hpp"

namespace corpusforge::stats {

struct FreqProfile {
  std::vector<std::string> tokens;                   // top-k, most frequent first
  std::unordered_map<std::string, double> rel_freq;  // every token in the corpus
  std::uint64_t total_tokens = 0;

  double freq(const std::string& token) const {
    auto it = rel_freq.find(token);
    return it == rel_freq.end() ? 0.0 : it->second;
  }
};

inline FreqProfile profile_from_counts(const encode::Counts& counts, std::size_t k = 100) {
  if (k < 1) throw ConfigError("profile size k must be at least 1");
  FreqProfile p;
  for (const auto& [t, n] : counts) p.total_tokens += n;
  if (p.total_tokens == 0) throw Error("cannot profile an empty corpus");
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  const auto total = static_cast<double>(p.total_tokens);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    p.rel_freq.emplace(ranked[i].first, static_cast<double>(ranked[i].second) / total);
    if (i < k) p.tokens.push_back(ranked[i].first);
  }
  return p;
}

inline FreqProfile profile(const std::vector<CleanArticle>& corpus, std::size_t k = 100) {
  encode::Counts counts;
  for (const auto& a : corpus) encode::count_tokens(a.text, counts);
  return profile_from_counts(counts, k);
}

inline FreqProfile profile(const fs::path& corpus, std::size_t k = 100) {
  encode::Counts counts;
  for_each_article(corpus, [&counts](CleanArticle a) { encode::count_tokens(a.text, counts); });
  return profile_from_counts(counts, k);
}

enum class AxisMode { kFirst, kUnion };

inline std::vector<std::string> reference_axis(const FreqProfile& p, const FreqProfile& q,
                                               AxisMode mode = AxisMode::kFirst) {
  std::vector<std::string> axis = p.tokens;
  if (mode == AxisMode::kUnion) {
    std::unordered_set<std::string> seen(axis.begin(), axis.end());
    for (const auto& t : q.tokens) {
      if (seen.insert(t).second) axis.push_back(t);
    }
  }
  return axis;
}

namespace detail {

inline std::vector<double> project(const FreqProfile& p, const std::vector<std::string>& axis) {
  std::vector<double> v;
  v.reserve(axis.size());
  for (const auto& t : axis) v.push_back(p.freq(t));
  return v;
}

inline void standardize(std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd > 0.0)) throw Error("degenerate profile: zero variance over the reference axis");
  for (double& x : v) x = (x - mean) / sd;
}

}  // namespace detail

inline double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw Error("cosine of a zero vector");
  const double c = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
  return 1.0 - c;
}

// 1 - cos of the z-scored projections onto `axis`; plain = true skips the
// standardisation and compares relative frequencies directly.
inline double cosine_delta(const FreqProfile& p, const FreqProfile& q,
                           const std::vector<std::string>& axis, bool plain = false) {
  if (axis.size() < 2) throw Error("reference axis needs at least two tokens");
  auto a = detail::project(p, axis);
  auto b = detail::project(q, axis);
  if (!plain) {
    detail::standardize(a);
    detail::standardize(b);
  }
  return cosine_distance(a, b);
}

inline double cosine_delta(const FreqProfile& p, const FreqProfile& q,
                           AxisMode mode = AxisMode::kFirst, bool plain = false) {
  return cosine_delta(p, q, reference_axis(p, q, mode), plain);
}

struct Counts {
  std::size_t articles = 0;
  std::size_t words = 0;
};

struct CorpusReport {
  Counts total;
  std::map<std::string, Counts> per_project;  // keyed by URL host, e.g. sr.wikipedia.org
};

inline std::string url_host(std::string_view url) {
  auto p = url.find("://");
  if (p == std::string_view::npos) return "unknown";
  url.remove_prefix(p + 3);
  return std::string(url.substr(0, url.find('/')));
}

struct ReportBuilder {
  CorpusReport report;
  std::vector<std::int64_t> ids;

  void add(const CleanArticle& a) {
    report.total.articles += 1;
    report.total.words += a.word_count;
    auto& c = report.per_project[url_host(a.url)];
    c.articles += 1;
    c.words += a.word_count;
    ids.push_back(a.page_id);
  }
};

inline ReportBuilder scan(const fs::path& corpus) {
  ReportBuilder b;
  for_each_article(corpus, [&b](CleanArticle a) { b.add(a); });
  return b;
}

inline ReportBuilder scan(const std::vector<CleanArticle>& corpus) {
  ReportBuilder b;
  for (const auto& a : corpus) b.add(a);
  return b;
}

inline double reduction_pct(std::size_t before, std::size_t after) {
  if (before == 0) return 0.0;
  return 100.0 * (static_cast<double>(before) - static_cast<double>(after)) /
         static_cast<double>(before);
}

struct Comparison {
  CorpusReport before;
  CorpusReport after;
  std::vector<std::string> warnings;

  double article_reduction() const {
    return reduction_pct(before.total.articles, after.total.articles);
  }
  double word_reduction() const { return reduction_pct(before.total.words, after.total.words); }

  ordered_json to_json() const {
    auto counts = [](const Counts& c) {
      return ordered_json{{"articles", c.articles}, {"words", c.words}};
    };
    ordered_json j;
    j["before"] = counts(before.total);
    j["after"] = counts(after.total);
    j["article_reduction_pct"] = article_reduction();
    j["word_reduction_pct"] = word_reduction();
    ordered_json projects = ordered_json::object();
    for (const auto& [host, c] : before.per_project) {
      Counts a;
      if (auto it = after.per_project.find(host); it != after.per_project.end()) a = it->second;
      projects[host] = {{"before", counts(c)}, {"after", counts(a)}};
    }
    j["projects"] = projects;
    j["warnings"] = warnings;
    return j;
  }

  // Plain-text table: one row per project plus a total row.
  std::string render_table() const {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %12s %12s %15s %15s\n", "Project", "Articles before",
                  "Articles after", "Words before", "Words after");
    out += line;
    auto row = [&](const std::string& name, const Counts& b, const Counts& a) {
      std::snprintf(line, sizeof line, "%-28s %12zu %12zu %15zu %15zu\n", name.c_str(),
                    b.articles, a.articles, b.words, a.words);
      out += line;
    };
    for (const auto& [host, c] : before.per_project) {
      Counts a;
      if (auto it = after.per_project.find(host); it != after.per_project.end()) a = it->second;
      row(host, c, a);
    }
    row("Total", before.total, after.total);
    std::snprintf(line, sizeof line, "Reduction: %.2f%% articles, %.2f%% words\n",
                  article_reduction(), word_reduction());
    out += line;
    return out;
  }
};

inline Comparison compare(ReportBuilder before, ReportBuilder after) {
  Comparison c{std::move(before.report), std::move(after.report), {}};
  std::sort(before.ids.begin(), before.ids.end());
  std::size_t missing = 0;
  for (auto id : after.ids) {
    if (!std::binary_search(before.ids.begin(), before.ids.end(), id)) ++missing;
  }
  if (missing > 0) {
    c.warnings.push_back(std::to_string(missing) +
                         " article(s) in the filtered corpus are absent from the original");
  }
  return c;
}

inline Comparison report(const std::vector<CleanArticle>& before,
                         const std::vector<CleanArticle>& after) {
  return compare(scan(before), scan(after));
}

inline Comparison report(const fs::path& before, const fs::path& after) {
  return compare(scan(before), scan(after));
}

}  // namespace corpusforge::stats
