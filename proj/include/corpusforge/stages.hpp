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

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "corpusforge/cluster.hpp"
#include "corpusforge/dedup.hpp"
#include "corpusforge/encode.hpp"
#include "corpusforge/ingest.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/records.hpp"
#include "corpusforge/stats.hpp"
#include "corpusforge/wikitext/clean.hpp"

// File-to-file drivers for each stage. The CLI and the pipeline runner both
// go through these.
namespace corpusforge::stages {

inline void log_line(const std::string& msg) { std::cerr << "corpusforge: " << msg << '\n'; }

// --- ingest ----------------------------------------------------------------

inline IngestStats ingest(const fs::path& archive, const fs::path& out,
                          const IngestOptions& options = {}) {
  DumpReader reader(archive, options);
  return serialize_pages(reader, out);
}

// --- clean -----------------------------------------------------------------

struct CleanOptions {
  unsigned workers = 1;
  double timeout_s = 60.0;
  std::size_t batch = 512;
};

struct CleanStats {
  std::uint64_t pages_read = 0;
  std::uint64_t retained = 0;
  std::uint64_t dropped_empty = 0;
  std::vector<std::int64_t> timed_out;

  ordered_json to_json() const {
    ordered_json j;
    j["pages_read"] = pages_read;
    j["retained"] = retained;
    j["dropped_empty"] = dropped_empty;
    j["timed_out"] = timed_out;
    return j;
  }
};

inline RawPage raw_page_from_json(const json& j) {
  try {
    RawPage p;
    p.page_id = j.at("id").get<std::int64_t>();
    p.title = j.at("title").get<std::string>();
    p.text = j.at("text").get<std::string>();
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed page record: ") + e.what());
  }
}

// Cleans pages in batches; output keeps input order whatever the worker
// count. Pages that exceed the per-article timeout are dropped and logged.
inline CleanStats clean(const fs::path& raw_in, const fs::path& out,
                        const wikitext::CleanConfig& config, const CleanOptions& options = {}) {
  CleanStats stats;
  JsonlReader reader(raw_in);
  JsonlWriter writer(out);
  struct Outcome {
    std::optional<CleanArticle> article;
    bool timed_out = false;
  };
  std::vector<RawPage> batch;
  auto flush = [&] {
    auto outcomes = parallel_map(batch, options.workers, [&](const RawPage& page) {
      Deadline deadline{std::chrono::duration<double>(options.timeout_s)};
      try {
        return Outcome{wikitext::clean_article(page, config, &deadline), false};
      } catch (const TimeoutError&) {
        return Outcome{std::nullopt, true};
      }
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      auto& o = outcomes[i];
      if (o.timed_out) {
        stats.timed_out.push_back(batch[i].page_id);
        log_line("timeout cleaning page " + std::to_string(batch[i].page_id) + " (" +
                 batch[i].title + "), dropped");
      } else if (!o.article) {
        ++stats.dropped_empty;
      } else {
        ++stats.retained;
        writer.write(to_json(*o.article));
      }
    }
    batch.clear();
  };
  json j;
  while (reader.next(j)) {
    ++stats.pages_read;
    batch.push_back(raw_page_from_json(j));
    if (batch.size() >= options.batch) flush();
  }
  if (!batch.empty()) flush();
  writer.close();
  return stats;
}

// --- encode ----------------------------------------------------------------

struct EncodeStats {
  std::uint64_t articles = 0;
  std::uint64_t encoded = 0;
  std::uint64_t excluded_long = 0;
  std::uint64_t vocabulary = 0;

  ordered_json to_json() const {
    return {{"articles", articles}, {"encoded", encoded}, {"excluded_long", excluded_long},
            {"vocabulary", vocabulary}};
  }
};

inline EncodeStats encode(const fs::path& clean_in, const fs::path& encoded_out,
                          const fs::path& vocab_out, std::uint64_t min_freq = 3,
                          const encode::EncodeOptions& options = {}, unsigned workers = 1) {
  const auto articles = read_articles(clean_in);
  auto r = encode::encode_corpus(articles, min_freq, options, workers);
  encode::write_encoded(r.encoded, encoded_out);
  r.vocabulary.save(vocab_out);
  return {articles.size(), r.encoded.size(), r.excluded_long, r.vocabulary.size()};
}

// --- cluster ---------------------------------------------------------------

struct ClusterStats {
  std::uint64_t buckets = 0;
  std::uint64_t total_pairs = 0;

  ordered_json to_json() const { return {{"buckets", buckets}, {"total_pairs", total_pairs}}; }
};

inline ClusterStats cluster(const fs::path& encoded_in, const fs::path& buckets_out,
                            std::size_t max_bucket = 3000) {
  const auto buckets = cluster::bucket_by_category(encode::read_encoded(encoded_in), max_bucket);
  cluster::write_buckets(buckets, buckets_out);
  return {buckets.size(), cluster::total_pairs(buckets)};
}

// --- dedup -----------------------------------------------------------------

struct DedupPaths {
  fs::path corpus;
  fs::path manifest;
  fs::path summary;
  fs::path signatures;  // optional
};

inline dedup::PruneSummary dedup(const fs::path& clean_in, const fs::path& encoded_in,
                                 const fs::path& buckets_in, const DedupPaths& out,
                                 const dedup::DedupOptions& options = {}) {
  const auto encoded = encode::read_encoded(encoded_in);
  const auto buckets = cluster::read_buckets(buckets_in);
  dedup::SignatureMap sigs;
  auto selection = dedup::run_dedup(encoded, buckets, options, &sigs);
  if (!out.signatures.empty()) dedup::write_signatures(encoded, sigs, out.signatures);
  if (!selection.warning.empty()) log_line("warning: " + selection.warning);
  auto summary = dedup::prune_corpus(clean_in, selection, out.corpus, out.manifest);
  write_json_file(out.summary, summary.to_json());
  return summary;
}

// --- stats -----------------------------------------------------------------

struct StatsOptions {
  std::size_t top = 100;
  stats::AxisMode axis = stats::AxisMode::kFirst;
  bool plain = false;
};

inline ordered_json stats_report(const fs::path& before, const fs::path& after,
                                 const StatsOptions& options = {}) {
  auto comparison = stats::report(before, after);
  ordered_json j = comparison.to_json();
  try {
    const auto p = stats::profile(before, options.top);
    const auto q = stats::profile(after, options.top);
    j["cosine_delta"] = stats::cosine_delta(p, q, options.axis, options.plain);
  } catch (const Error& e) {
    j["cosine_delta"] = nullptr;
    j["warnings"].push_back(std::string("cosine delta unavailable: ") + e.what());
  }
  j["table"] = comparison.render_table();
  return j;
}

}  // namespace corpusforge::stages
