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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corpusforge/encode.hpp"
#include "corpusforge/io.hpp"

namespace corpusforge::cluster {

struct Bucket {
  std::string category;
  std::size_t chunk = 0;
  std::vector<std::int64_t> members;

  bool operator==(const Bucket&) const = default;
};

inline std::uint64_t pair_count(std::size_t m) {
  return m < 2 ? 0 : static_cast<std::uint64_t>(m) * (m - 1) / 2;
}

// Buckets ordered by category, then chunk. Oversized groups are cut into
// consecutive chunks of at most max_bucket members in input order; chunks
// with fewer than two members are dropped.
inline std::vector<Bucket> bucket_by_category(const std::vector<encode::EncodedArticle>& records,
                                              std::size_t max_bucket = 3000) {
  if (max_bucket < 2) throw ConfigError("max_bucket must be at least 2");
  std::map<std::string, std::vector<std::int64_t>> groups;
  for (const auto& r : records) {
    for (const auto& c : r.categories) {
      auto& g = groups[c];
      // Categories are unique per article, but guard against repeats.
      if (g.empty() || g.back() != r.page_id) g.push_back(r.page_id);
    }
  }
  std::vector<Bucket> out;
  for (auto& [category, ids] : groups) {
    for (std::size_t start = 0, chunk = 0; start < ids.size(); start += max_bucket, ++chunk) {
      const std::size_t end = std::min(ids.size(), start + max_bucket);
      if (end - start < 2) continue;
      out.push_back({category, chunk,
                     std::vector<std::int64_t>(ids.begin() + static_cast<std::ptrdiff_t>(start),
                                               ids.begin() + static_cast<std::ptrdiff_t>(end))});
    }
  }
  return out;
}

inline std::uint64_t total_pairs(const std::vector<Bucket>& buckets) {
  std::uint64_t total = 0;
  for (const auto& b : buckets) total += pair_count(b.members.size());
  return total;
}

// One {"category","chunk","members"} line per bucket, then a summary line.
inline void write_buckets(const std::vector<Bucket>& buckets, const fs::path& out) {
  JsonlWriter w(out);
  std::size_t largest = 0;
  for (const auto& b : buckets) {
    ordered_json j;
    j["category"] = b.category;
    j["chunk"] = b.chunk;
    j["members"] = b.members;
    w.write(j);
    largest = std::max(largest, b.members.size());
  }
  ordered_json summary;
  summary["summary"] = true;
  summary["buckets"] = buckets.size();
  summary["largest"] = largest;
  summary["total_pairs"] = total_pairs(buckets);
  w.write(summary);
  w.close();
}

inline std::vector<Bucket> read_buckets(const fs::path& path) {
  std::vector<Bucket> out;
  JsonlReader r(path);
  json j;
  while (r.next(j)) {
    if (j.value("summary", false)) continue;
    try {
      out.push_back({j.at("category").get<std::string>(), j.at("chunk").get<std::size_t>(),
                     j.at("members").get<std::vector<std::int64_t>>()});
    } catch (const json::exception& e) {
      throw IoError(path.string() + ": malformed bucket line " +
                    std::to_string(r.line_number()) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace corpusforge::cluster
