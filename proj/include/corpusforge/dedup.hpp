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
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpusforge/cluster.hpp"
#include "corpusforge/encode.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/knee.hpp"
#include "corpusforge/minhash.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/records.hpp"

namespace corpusforge::dedup {

using SignatureMap = std::unordered_map<std::int64_t, minhash::Signature>;

inline SignatureMap compute_signatures(const std::vector<encode::EncodedArticle>& records,
                                       std::uint64_t seed, std::size_t permutations = 128,
                                       unsigned workers = 1) {
  const minhash::Hasher hasher(seed, permutations);
  auto sigs = parallel_map(records, workers, [&hasher](const encode::EncodedArticle& r) {
    return hasher(minhash::trigram_set(r.vector));
  });
  SignatureMap out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!out.emplace(records[i].page_id, std::move(sigs[i])).second) {
      throw ConsistencyError("duplicate encoded id " + std::to_string(records[i].page_id));
    }
  }
  return out;
}

inline void write_signatures(const std::vector<encode::EncodedArticle>& order,
                             const SignatureMap& sigs, const fs::path& out) {
  JsonlWriter w(out);
  for (const auto& r : order) {
    const auto& s = sigs.at(r.page_id);
    ordered_json j;
    j["id"] = r.page_id;
    j["sig"] = s.values;
    j["seed"] = s.seed;
    w.write(j);
  }
  w.close();
}

// Running top three (score, partner) entries above the threshold, one entry
// per partner, ordered by score descending then partner ascending.
class TopThree {
 public:
  void offer(double score, std::int64_t partner) {
    for (const auto& e : entries_) {
      if (e.second == partner) return;
    }
    entries_.emplace_back(score, partner);
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (entries_.size() > 3) entries_.pop_back();
  }

  void merge(const TopThree& other) {
    for (const auto& [s, p] : other.entries_) offer(s, p);
  }

  std::vector<double> scores() const {
    std::vector<double> out;
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

 private:
  std::vector<std::pair<double, std::int64_t>> entries_;
};

struct SimilarityRecord {
  std::int64_t page_id = 0;
  std::vector<double> top_scores;  // descending, at most three, each above threshold
  double aggregate = 0.0;

  bool operator==(const SimilarityRecord&) const = default;
};

// Mean of three slots, absent slots counted as zero.
inline double aggregate_score(const std::vector<double>& top_scores) {
  double sum = 0.0;
  for (std::size_t i = 0; i < top_scores.size() && i < 3; ++i) sum += top_scores[i];
  return sum / 3.0;
}

struct ScoreOptions {
  double threshold = 0.5;
  unsigned workers = 1;
  // Score each article pair once, in the first bucket holding both.
  bool dedup_pairs = true;
};

// Records exist for every article that took part in at least one comparison
// between two non-empty signatures. Ordered by page id.
inline std::map<std::int64_t, SimilarityRecord> score_buckets(
    const std::vector<cluster::Bucket>& buckets, const SignatureMap& signatures,
    const ScoreOptions& options = {}) {
  std::unordered_map<std::int64_t, std::vector<std::size_t>> memberships;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    for (auto id : buckets[b].members) {
      if (!signatures.count(id)) {
        throw ConsistencyError("no signature for article " + std::to_string(id) +
                               " in bucket '" + buckets[b].category + "'");
      }
      memberships[id].push_back(b);
    }
  }
  // Lowest bucket index shared by two articles (both lists ascending).
  auto first_shared = [&memberships](std::int64_t x, std::int64_t y) {
    const auto& a = memberships.at(x);
    const auto& b = memberships.at(y);
    for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        return *i;
      }
    }
    return std::size_t{0};
  };

  struct Partial {
    std::unordered_map<std::int64_t, TopThree> top;
  };
  std::vector<Partial> partials(buckets.size());
  parallel_for(buckets.size(), options.workers, [&](std::size_t b) {
    auto& part = partials[b];
    const auto& members = buckets[b].members;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& si = signatures.at(members[i]);
      if (si.empty()) continue;
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (members[i] == members[j]) continue;
        if (options.dedup_pairs && first_shared(members[i], members[j]) != b) continue;
        const auto& sj = signatures.at(members[j]);
        if (sj.empty()) continue;
        const double s = minhash::similarity(si, sj);
        auto& ti = part.top[members[i]];
        auto& tj = part.top[members[j]];
        if (s > options.threshold) {
          ti.offer(s, members[j]);
          tj.offer(s, members[i]);
        }
      }
    }
  });
  std::map<std::int64_t, TopThree> merged;
  for (const auto& part : partials) {
    for (const auto& [id, top] : part.top) merged[id].merge(top);
  }
  std::map<std::int64_t, SimilarityRecord> out;
  for (const auto& [id, top] : merged) {
    SimilarityRecord r{id, top.scores(), 0.0};
    r.aggregate = aggregate_score(r.top_scores);
    out.emplace(id, std::move(r));
  }
  return out;
}

// Aggregates of every compared article, ascending.
inline std::vector<double> knee_pool(const std::map<std::int64_t, SimilarityRecord>& records) {
  std::vector<double> pool;
  pool.reserve(records.size());
  for (const auto& [id, r] : records) pool.push_back(r.aggregate);
  std::sort(pool.begin(), pool.end());
  return pool;
}

struct DedupOptions {
  std::size_t permutations = 128;
  double threshold = 0.5;
  std::uint64_t seed = 42;
  double sensitivity = 1.0;
  unsigned workers = 1;
};

struct Selection {
  std::map<std::int64_t, SimilarityRecord> records;
  knee::KneeResult knee;
  std::size_t pool_size = 0;
  std::vector<std::int64_t> removed;  // ascending
  std::string warning;
};

// Articles whose aggregate is above the knee cutoff. Without a knee nothing
// is selected.
inline Selection select_for_removal(std::map<std::int64_t, SimilarityRecord> records,
                                    double sensitivity = 1.0) {
  Selection s;
  s.records = std::move(records);
  auto pool = knee_pool(s.records);
  s.pool_size = pool.size();
  s.knee = knee::find_knee(std::move(pool), {sensitivity});
  if (!s.knee.found) {
    s.warning = "no knee found in " + std::to_string(s.pool_size) +
                " aggregate scores; nothing removed";
    return s;
  }
  for (const auto& [id, r] : s.records) {
    if (r.aggregate > s.knee.cutoff) s.removed.push_back(id);
  }
  return s;
}

inline Selection run_dedup(const std::vector<encode::EncodedArticle>& encoded,
                           const std::vector<cluster::Bucket>& buckets,
                           const DedupOptions& options = {},
                           SignatureMap* signatures_out = nullptr) {
  auto sigs = compute_signatures(encoded, options.seed, options.permutations, options.workers);
  auto records = score_buckets(buckets, sigs, {options.threshold, options.workers, true});
  if (signatures_out) *signatures_out = std::move(sigs);
  return select_for_removal(std::move(records), options.sensitivity);
}

struct CorpusCounts {
  std::size_t articles = 0;
  std::size_t words = 0;
};

struct PruneSummary {
  CorpusCounts before;
  CorpusCounts after;
  std::size_t removed = 0;
  knee::KneeResult knee;
  std::size_t pool_size = 0;
  std::string warning;

  ordered_json to_json() const {
    ordered_json j;
    j["articles_before"] = before.articles;
    j["articles_after"] = after.articles;
    j["words_before"] = before.words;
    j["words_after"] = after.words;
    j["removed"] = removed;
    j["knee"] = {{"found", knee.found}, {"cutoff", knee.cutoff}, {"index", knee.index},
                 {"pool_size", pool_size}};
    if (!warning.empty()) j["warning"] = warning;
    return j;
  }
};

inline ordered_json removal_entry(const SimilarityRecord& r) {
  ordered_json j;
  j["id"] = r.page_id;
  j["aggregate"] = r.aggregate;
  j["top_scores"] = r.top_scores;
  return j;
}

// Streams the cleaned corpus, writing kept articles to `kept_out` and the
// removed ones (with their scores) to `manifest_out`.
inline PruneSummary prune_corpus(const fs::path& clean_in, const Selection& selection,
                                 const fs::path& kept_out, const fs::path& manifest_out) {
  PruneSummary summary;
  summary.knee = selection.knee;
  summary.pool_size = selection.pool_size;
  summary.warning = selection.warning;
  JsonlWriter kept(kept_out);
  JsonlWriter manifest(manifest_out);
  for_each_article(clean_in, [&](CleanArticle a) {
    ++summary.before.articles;
    summary.before.words += a.word_count;
    if (std::binary_search(selection.removed.begin(), selection.removed.end(), a.page_id)) {
      manifest.write(removal_entry(selection.records.at(a.page_id)));
      ++summary.removed;
      return;
    }
    ++summary.after.articles;
    summary.after.words += a.word_count;
    kept.write(to_json(a));
  });
  kept.close();
  manifest.close();
  if (summary.removed != selection.removed.size()) {
    throw ConsistencyError("removal set names " + std::to_string(selection.removed.size()) +
                           " articles but " + std::to_string(summary.removed) +
                           " were found in " + clean_in.string());
  }
  return summary;
}

}  // namespace corpusforge::dedup
