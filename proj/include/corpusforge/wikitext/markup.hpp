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

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "corpusforge/text.hpp"

// Low-level scanners for HTML-like tags, headings and protected spans.
namespace corpusforge::wikitext::markup {

struct TagToken {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past '>'
  std::string name;     // lowercase
  bool closing = false;
  bool self_closing = false;
};

inline bool ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool ascii_alnum(char c) { return ascii_alpha(c) || (c >= '0' && c <= '9'); }
inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

// Recognises <name ...>, </name> and <name .../> at pos.
inline std::optional<TagToken> tag_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size() || s[pos] != '<') return std::nullopt;
  TagToken t;
  t.begin = pos;
  std::size_t p = pos + 1;
  if (p < s.size() && s[p] == '/') {
    t.closing = true;
    ++p;
  }
  if (p >= s.size() || !ascii_alpha(s[p])) return std::nullopt;
  while (p < s.size() && ascii_alnum(s[p])) t.name.push_back(ascii_lower(s[p++]));
  if (p >= s.size()) return std::nullopt;
  if (s[p] != '>' && s[p] != '/' && s[p] != ' ' && s[p] != '\t' && s[p] != '\n') {
    return std::nullopt;
  }
  constexpr std::size_t kMaxTagLength = 2048;
  char quote = 0;
  for (; p < s.size() && p - pos < kMaxTagLength; ++p) {
    const char c = s[p];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') {
      // Only attribute values open quotes: <a title="x">
      if (p > 0 && s[p - 1] == '=') quote = c;
      continue;
    }
    if (c == '<') return std::nullopt;
    if (c == '>') {
      t.end = p + 1;
      t.self_closing = !t.closing && s[p - 1] == '/';
      return t;
    }
  }
  return std::nullopt;
}

// Finds the closing tag matching an opening `name` tag whose markup ends at
// `from`, honouring nested tags of the same name. Returns the closing token.
inline std::optional<TagToken> matching_close(std::string_view s, std::size_t from,
                                              const std::string& name) {
  int depth = 1;
  for (std::size_t p = s.find('<', from); p != std::string_view::npos; p = s.find('<', p + 1)) {
    auto t = tag_at(s, p);
    if (!t || t->name != name) continue;
    if (t->closing) {
      if (--depth == 0) return t;
    } else if (!t->self_closing) {
      ++depth;
    }
    p = t->end - 1;
  }
  return std::nullopt;
}

struct Heading {
  int level = 0;
  std::string_view title;
};

// "== Title ==" on a line of its own; level is the smaller of the two runs.
inline std::optional<Heading> heading_of(std::string_view line) {
  std::size_t e = line.size();
  while (e > 0 && text::is_blank(line[e - 1])) --e;
  line = line.substr(0, e);
  std::size_t open = 0;
  while (open < line.size() && line[open] == '=') ++open;
  if (open == 0 || open == line.size()) return std::nullopt;
  std::size_t close = 0;
  while (close < line.size() - open && line[line.size() - 1 - close] == '=') ++close;
  if (close == 0) return std::nullopt;
  const int level = static_cast<int>(std::min<std::size_t>({open, close, 6}));
  std::string_view inner = line.substr(static_cast<std::size_t>(level),
                                       line.size() - 2 * static_cast<std::size_t>(level));
  inner = text::trim(inner);
  if (inner.empty()) return std::nullopt;
  return Heading{level, inner};
}

// Replaces spans that must survive markup stages untouched (e.g. <math>) with
// private-use placeholders, and puts them back afterwards.
class Shield {
 public:
  static constexpr std::string_view kOpen = "\xEE\x80\x80";   // U+E000
  static constexpr std::string_view kClose = "\xEE\x80\x81";  // U+E001

  // Removes any pre-existing marker characters so restore() is unambiguous.
  static std::string scrub(std::string_view s) {
    std::string out(s);
    for (auto marker : {kOpen, kClose}) {
      for (auto p = out.find(marker); p != std::string::npos; p = out.find(marker, p)) {
        out.erase(p, marker.size());
      }
    }
    return out;
  }

  std::string protect(std::string_view s, const std::set<std::string>& tags) {
    std::string out;
    out.reserve(s.size());
    std::size_t copied = 0;
    for (std::size_t p = s.find('<'); p != std::string_view::npos; p = s.find('<', p + 1)) {
      auto open = tag_at(s, p);
      if (!open || open->closing || !tags.count(open->name)) continue;
      std::size_t end = open->end;
      if (!open->self_closing) {
        auto close = matching_close(s, open->end, open->name);
        if (!close) continue;
        end = close->end;
      }
      out.append(s.substr(copied, p - copied));
      out += kOpen;
      out += std::to_string(saved_.size());
      out += kClose;
      saved_.emplace_back(s.substr(p, end - p));
      copied = end;
      p = end - 1;
    }
    out.append(s.substr(copied));
    return out;
  }

  std::string restore(std::string_view s) const {
    std::string out;
    out.reserve(s.size());
    std::size_t p = 0;
    while (p < s.size()) {
      const auto open = s.find(kOpen, p);
      if (open == std::string_view::npos) break;
      const auto close = s.find(kClose, open + kOpen.size());
      if (close == std::string_view::npos) break;
      out.append(s.substr(p, open - p));
      const auto digits = s.substr(open + kOpen.size(), close - open - kOpen.size());
      std::size_t index = 0;
      bool ok = !digits.empty();
      for (char c : digits) {
        if (c < '0' || c > '9') ok = false;
        index = index * 10 + static_cast<std::size_t>(c - '0');
      }
      if (ok && index < saved_.size()) out += saved_[index];
      p = close + kClose.size();
    }
    out.append(s.substr(p));
    return out;
  }

 private:
  std::vector<std::string> saved_;
};

}  // namespace corpusforge::wikitext::markup
