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

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corpusforge/dump.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/text.hpp"

namespace corpusforge::wikitext {

// What happens to HTML-like tags in the last cleaning stage. Names are
// lowercase. Tags in neither set are stripped with their content kept.
struct TagPolicy {
  std::set<std::string> destroy{"noinclude", "ref", "gallery", "timeline"};
  std::set<std::string> preserve{"math", "code", "syntaxhighlight", "b", "sup", "sub"};

  void validate() const {
    for (const auto& name : destroy) {
      if (preserve.count(name)) {
        throw ConfigError("tag '" + name + "' is in both destroy and preserve lists");
      }
    }
  }
};

enum class SectionMode { kExcludeListed, kIncludeOnlyListed };

struct SectionPolicy {
  SectionMode mode = SectionMode::kExcludeListed;
  std::set<std::string> titles;  // normalised with text::normalize_name
  // include_only_listed: keep the lead when it carries list (quote) markup.
  bool keep_lead = false;

  bool matches(std::string_view heading) const {
    return titles.count(text::normalize_name(heading)) > 0;
  }

  template <typename Range>
  static std::set<std::string> normalize_all(const Range& names) {
    std::set<std::string> out;
    for (const auto& n : names) out.insert(text::normalize_name(n));
    return out;
  }
};

struct TemplateKeepList {
  std::set<std::string> names{"ppoem", "cquote"};  // normalised

  bool contains(std::string_view name) const {
    return names.count(text::normalize_name(name)) > 0;
  }
};

// Localised tables for one language. Prefix lists are matched
// case-insensitively against the text before the first ':' of a link target.
struct LanguageTables {
  std::vector<std::string> category_prefixes{"Category"};
  std::vector<std::string> file_prefixes{"File", "Image", "Media"};
  std::vector<std::string> interwiki_prefixes{
      "af", "als", "am", "an", "ar", "arz", "ast", "az", "ba", "bar", "be", "be-tarask",
      "bg", "bn", "br", "bs", "ca", "ce", "ceb", "ckb", "cs", "cv", "cy", "da", "de",
      "el", "en", "eo", "es", "et", "eu", "fa", "fi", "fr", "fy", "ga", "gd", "gl",
      "gu", "he", "hi", "hr", "hsb", "ht", "hu", "hy", "ia", "id", "io", "is", "it",
      "ja", "jv", "ka", "kk", "kn", "ko", "ku", "ky", "la", "lb", "li", "lmo", "lt",
      "lv", "mg", "min", "mk", "ml", "mn", "mr", "ms", "my", "nds", "ne", "nl", "nn",
      "no", "oc", "pa", "pl", "pms", "pnb", "pt", "qu", "ro", "ru", "rue", "sah",
      "sco", "sh", "simple", "si", "sk", "sl", "sq", "sr", "su", "sv", "sw", "szl",
      "ta", "te", "tg", "th", "tl", "tr", "tt", "uk", "ur", "uz", "vec", "vi", "war",
      "wuu", "yi", "yo", "zh", "zh-classical", "zh-min-nan", "zh-yue"};
  std::vector<std::string> redirect_keywords{"#REDIRECT"};
  std::vector<std::string> unwanted_sections{"References", "Gallery", "External links",
                                             "See also", "Sources", "Notes",
                                             "Further reading", "Bibliography"};
  std::vector<std::string> quote_sections{"Quotes", "Sourced", "Attributed"};
  // Literal replacements applied during final cleaning.
  std::vector<std::pair<std::string, std::string>> replacements;

  static bool matches_prefix(std::string_view target, const std::vector<std::string>& prefixes) {
    auto colon = target.find(':');
    if (colon == std::string_view::npos) return false;
    const std::string head = text::normalize_name(target.substr(0, colon));
    if (head.empty()) return false;
    for (const auto& p : prefixes) {
      if (head == text::normalize_name(p)) return true;
    }
    return false;
  }

  bool is_category(std::string_view target) const {
    return matches_prefix(target, category_prefixes);
  }
  bool is_file(std::string_view target) const { return matches_prefix(target, file_prefixes); }
  bool is_interwiki(std::string_view target) const {
    return matches_prefix(target, interwiki_prefixes);
  }
};

struct CleanConfig {
  std::string language = "en";
  Project project = Project::kWikipedia;
  TagPolicy tags;
  SectionPolicy sections;
  TemplateKeepList keep;
  LanguageTables tables;
  // Tags whose content is not wikitext; shielded from markup stages.
  std::set<std::string> verbatim_tags{"math", "chem", "ce", "code", "syntaxhighlight",
                                      "source", "nowiki", "pre", "score", "timeline"};
  double timeout_s = 60.0;

  // Section policy follows the project: Wikiquote keeps only quote sections.
  void derive_section_policy() {
    if (project == Project::kWikiquote) {
      sections.mode = SectionMode::kIncludeOnlyListed;
      sections.titles = SectionPolicy::normalize_all(tables.quote_sections);
    } else {
      sections.mode = SectionMode::kExcludeListed;
      sections.titles = SectionPolicy::normalize_all(tables.unwanted_sections);
    }
  }

  static CleanConfig defaults(std::string language = "en",
                              Project project = Project::kWikipedia) {
    CleanConfig c;
    c.language = std::move(language);
    c.project = project;
    c.derive_section_policy();
    return c;
  }

  // Builds a config from JSON; absent keys keep their defaults.
  static CleanConfig from_json(const json& j) {
    CleanConfig c;
    try {
      c.language = j.value("language", c.language);
      if (j.contains("project")) c.project = parse_project(j.at("project").get<std::string>());
      auto list = [&j](const char* key, std::vector<std::string>& out) {
        if (j.contains(key)) out = j.at(key).get<std::vector<std::string>>();
      };
      list("category_prefixes", c.tables.category_prefixes);
      list("file_prefixes", c.tables.file_prefixes);
      list("interwiki_prefixes", c.tables.interwiki_prefixes);
      list("redirect_keywords", c.tables.redirect_keywords);
      list("unwanted_sections", c.tables.unwanted_sections);
      list("quote_sections", c.tables.quote_sections);
      if (j.contains("replacements")) {
        c.tables.replacements.clear();
        for (const auto& pair : j.at("replacements")) {
          c.tables.replacements.emplace_back(pair.at(0).get<std::string>(),
                                             pair.at(1).get<std::string>());
        }
      }
      if (j.contains("tag_policy")) {
        const auto& t = j.at("tag_policy");
        if (t.contains("destroy")) c.tags.destroy = lowered(t.at("destroy"));
        if (t.contains("preserve")) c.tags.preserve = lowered(t.at("preserve"));
      }
      if (j.contains("template_keep_list")) {
        c.keep.names = SectionPolicy::normalize_all(
            j.at("template_keep_list").get<std::vector<std::string>>());
      }
      if (j.contains("verbatim_tags")) c.verbatim_tags = lowered(j.at("verbatim_tags"));
      c.timeout_s = j.value("timeout_s", c.timeout_s);
      c.derive_section_policy();
      if (j.contains("section_policy")) {
        const auto& s = j.at("section_policy");
        if (s.contains("mode")) {
          const auto mode = s.at("mode").get<std::string>();
          if (mode == "exclude_listed") {
            c.sections.mode = SectionMode::kExcludeListed;
          } else if (mode == "include_only_listed") {
            c.sections.mode = SectionMode::kIncludeOnlyListed;
          } else {
            throw ConfigError("unknown section_policy.mode '" + mode + "'");
          }
        }
        if (s.contains("titles")) {
          c.sections.titles =
              SectionPolicy::normalize_all(s.at("titles").get<std::vector<std::string>>());
        }
        c.sections.keep_lead = s.value("keep_lead", c.sections.keep_lead);
      }
    } catch (const json::exception& e) {
      throw ConfigError(std::string("invalid cleaning config: ") + e.what());
    }
    c.tags.validate();
    if (c.timeout_s <= 0) throw ConfigError("timeout_s must be positive");
    return c;
  }

  static CleanConfig load(const fs::path& path);

 private:
  static std::set<std::string> lowered(const json& names) {
    std::set<std::string> out;
    for (const auto& n : names) out.insert(utf8::to_lower(n.get<std::string>()));
    return out;
  }
};

// Reads a JSON config, resolving an optional "include" list (paths relative to
// the including file) merged in order, then the file itself on top.
inline json load_config_json(const fs::path& path, int depth = 0) {
  if (depth > 8) throw ConfigError("config include depth exceeded at " + path.string());
  json self;
  try {
    self = read_json_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  if (!self.is_object()) throw ConfigError(path.string() + ": config must be a JSON object");
  json merged = json::object();
  if (self.contains("include")) {
    auto includes = self.at("include");
    if (includes.is_string()) includes = json::array({includes});
    for (const auto& inc : includes) {
      merged.merge_patch(load_config_json(path.parent_path() / inc.get<std::string>(), depth + 1));
    }
    self.erase("include");
  }
  merged.merge_patch(self);
  return merged;
}

inline CleanConfig CleanConfig::load(const fs::path& path) {
  return from_json(load_config_json(path));
}

}  // namespace corpusforge::wikitext
