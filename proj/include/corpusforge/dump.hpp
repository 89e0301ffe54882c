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
#include <string>
#include <string_view>

#include "corpusforge/error.hpp"

namespace corpusforge {

enum class Project { kWikipedia, kWikisource, kWikiquote, kWikibooks, kWikinews };

inline std::string_view to_string(Project p) {
  switch (p) {
    case Project::kWikipedia: return "wikipedia";
    case Project::kWikisource: return "wikisource";
    case Project::kWikiquote: return "wikiquote";
    case Project::kWikibooks: return "wikibooks";
    case Project::kWikinews: return "wikinews";
  }
  return "wikipedia";
}

inline Project parse_project(std::string_view name) {
  for (auto p : {Project::kWikipedia, Project::kWikisource, Project::kWikiquote,
                 Project::kWikibooks, Project::kWikinews}) {
    if (name == to_string(p)) return p;
  }
  throw ConfigError("unknown project '" + std::string(name) +
                    "' (expected wikipedia, wikisource, wikiquote, wikibooks or wikinews)");
}

// Database-name suffix used in dump file names: srwiki, srwikiquote, ...
inline std::string_view dump_suffix(Project p) {
  return p == Project::kWikipedia ? "wiki" : to_string(p);
}

inline std::string project_domain(Project p) {
  return std::string(to_string(p)) + ".org";
}

inline constexpr std::string_view kDefaultUrlTemplate =
    "https://dumps.wikimedia.org/{db}/{version}/{db}-{version}-pages-articles.xml.bz2";

// Identifies one pages-articles dump. Construct with make().
struct DumpDescriptor {
  std::string language_code;
  Project project = Project::kWikipedia;
  std::string dump_version;
  std::string source_url;

  std::string database() const {
    return language_code + std::string(dump_suffix(project));
  }

  std::string file_name() const {
    return database() + "-" + dump_version + "-pages-articles.xml.bz2";
  }

  static bool valid_version(std::string_view v) {
    if (v.size() != 8) return false;
    for (char c : v) {
      if (c < '0' || c > '9') return false;
    }
    const int month = (v[4] - '0') * 10 + (v[5] - '0');
    const int day = (v[6] - '0') * 10 + (v[7] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
  }

  static bool valid_language(std::string_view code) {
    if (code.size() < 2 || code.size() > 3) return false;
    for (char c : code) {
      if (c < 'a' || c > 'z') return false;
    }
    return true;
  }

  // url_template placeholders: {lang}, {db}, {version}, {file}.
  static DumpDescriptor make(std::string language, Project project, std::string version,
                             std::string_view url_template = kDefaultUrlTemplate) {
    if (!valid_language(language)) {
      throw ConfigError("invalid language code '" + language + "'");
    }
    if (!valid_version(version)) {
      throw ConfigError("dump version must be YYYYMMDD, got '" + version + "'");
    }
    DumpDescriptor d{std::move(language), project, std::move(version), {}};
    std::string url(url_template);
    auto substitute = [&url](std::string_view key, const std::string& value) {
      for (auto pos = url.find(key); pos != std::string::npos; pos = url.find(key, pos)) {
        url.replace(pos, key.size(), value);
        pos += value.size();
      }
    };
    substitute("{lang}", d.language_code);
    substitute("{db}", d.database());
    substitute("{version}", d.dump_version);
    substitute("{file}", d.file_name());
    d.source_url = std::move(url);
    return d;
  }
};

// One <page> of a dump.
struct RawPage {
  std::int64_t page_id = 0;
  std::string title;
  int ns = 0;
  std::string text;
  bool is_redirect = false;
};

}  // namespace corpusforge
