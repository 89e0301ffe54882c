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
#include <utility>
#include <vector>

#include "corpusforge/dump.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/text.hpp"
#include "corpusforge/utf8.hpp"
#include "corpusforge/wikitext/config.hpp"
#include "corpusforge/wikitext/markup.hpp"
#include "corpusforge/wikitext/parser.hpp"

namespace corpusforge::wikitext {

// ---------------------------------------------------------------------------
// Stage 1: regex-style pre-pass.

namespace detail {

inline std::string remove_comments(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t p = 0;
  for (;;) {
    const auto open = s.find("<!--", p);
    if (open == std::string_view::npos) break;
    out.append(s.substr(p, open - p));
    const auto close = s.find("-->", open + 4);
    if (close == std::string_view::npos) return out;  // unterminated: runs to the end
    p = close + 3;
  }
  out.append(s.substr(p));
  return out;
}

// End of the "]]" matching the "[[" at pos, counting nested [[...]] pairs.
inline std::optional<std::size_t> matching_brackets(std::string_view s, std::size_t pos) {
  int depth = 0;
  for (std::size_t p = pos; p + 1 < s.size();) {
    if (s[p] == '[' && s[p + 1] == '[') {
      ++depth;
      p += 2;
    } else if (s[p] == ']' && s[p + 1] == ']') {
      if (--depth == 0) return p + 2;
      p += 2;
    } else {
      ++p;
    }
  }
  return std::nullopt;
}

// Removes [[<prefix>:...]] links (with nested links in captions) whose
// prefix satisfies `pred`.
template <typename Pred>
std::string remove_prefixed_links(std::string_view s, Pred&& pred) {
  std::string out;
  out.reserve(s.size());
  std::size_t copied = 0;
  for (auto p = s.find("[["); p != std::string_view::npos; p = s.find("[[", p + 2)) {
    std::size_t t = p + 2;
    while (t < s.size() && (s[t] == ' ' || s[t] == '\t')) ++t;
    const auto bar = s.find_first_of("|]\n", t);
    const auto target = s.substr(t, bar == std::string_view::npos ? s.size() - t : bar - t);
    if (!pred(target)) continue;
    auto end = matching_brackets(s, p);
    if (!end) continue;
    out.append(s.substr(copied, p - copied));
    copied = *end;
    p = *end - 2;
  }
  out.append(s.substr(copied));
  return out;
}

inline std::string remove_references_blocks(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t copied = 0;
  for (auto p = s.find('<'); p != std::string_view::npos; p = s.find('<', p + 1)) {
    auto t = markup::tag_at(s, p);
    if (!t || t->name != "references" || t->closing) continue;
    std::size_t end = t->end;
    if (!t->self_closing) {
      if (auto close = markup::matching_close(s, t->end, "references")) end = close->end;
    }
    out.append(s.substr(copied, p - copied));
    copied = end;
    p = end - 1;
  }
  out.append(s.substr(copied));
  return out;
}

// Horizontal rules (---- lines) and runs of two or more apostrophes
// (bold/italic markers).
inline std::string remove_rules_and_quotes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool first = true;
  for (auto line : text::split_lines(s)) {
    if (!first) out.push_back('\n');
    first = false;
    const auto trimmed = text::trim(line);
    if (trimmed.size() >= 4 && trimmed.find_first_not_of('-') == std::string_view::npos) {
      continue;
    }
    for (std::size_t i = 0; i < line.size();) {
      if (line[i] == '\'' && i + 1 < line.size() && line[i + 1] == '\'') {
        while (i < line.size() && line[i] == '\'') ++i;
        continue;
      }
      out.push_back(line[i++]);
    }
  }
  return out;
}

}  // namespace detail

// Removes the high-frequency noise constructs before node parsing: comments,
// embedded file/image links, <references> blocks, horizontal rules and
// bold/italic quote markers.
inline std::string pre_clean(std::string_view wikitext,
                             const LanguageTables& tables = LanguageTables{}) {
  std::string s = detail::remove_comments(wikitext);
  s = detail::remove_prefixed_links(
      s, [&tables](std::string_view target) { return tables.is_file(target); });
  s = detail::remove_references_blocks(s);
  return detail::remove_rules_and_quotes(s);
}

// ---------------------------------------------------------------------------
// Stage 2: categories.

namespace detail {

inline std::string category_name(std::string_view target) {
  const auto colon = target.find(':');
  std::string name;
  bool space = false;
  for (char c : text::trim(target.substr(colon + 1))) {
    if (c == '_' || c == ' ' || c == '\t') {
      space = true;
      continue;
    }
    if (space && !name.empty()) name.push_back(' ');
    space = false;
    name.push_back(c);
  }
  return name;
}

inline bool is_categorisation(const WikiLink& link, const LanguageTables& tables) {
  const auto target = text::trim(link.target);
  return !target.empty() && target.front() != ':' && tables.is_category(target);
}

inline void collect_categories(NodeList& nodes, const LanguageTables& tables,
                               std::vector<std::string>& out) {
  NodeList kept;
  kept.reserve(nodes.size());
  for (auto& node : nodes) {
    if (auto* link = node.as<WikiLink>()) {
      if (is_categorisation(*link, tables)) {
        auto name = category_name(text::trim(link->target));
        if (!name.empty() && std::find(out.begin(), out.end(), name) == out.end()) {
          out.push_back(std::move(name));
        }
        continue;
      }
      if (link->label) collect_categories(*link->label, tables, out);
    } else if (auto* tpl = node.as<Template>()) {
      for (auto& p : tpl->params) collect_categories(p.value, tables, out);
    } else if (auto* ext = node.as<ExternalLink>()) {
      if (ext->label) collect_categories(*ext->label, tables, out);
    }
    kept.push_back(std::move(node));
  }
  nodes = std::move(kept);
}

}  // namespace detail

// Removes every category link from `nodes` and returns the category names
// (prefix and sort key stripped) in order of first appearance.
inline std::vector<std::string> extract_categories(NodeList& nodes, const LanguageTables& tables) {
  std::vector<std::string> out;
  detail::collect_categories(nodes, tables, out);
  return out;
}

struct CategoryExtraction {
  std::string text;
  std::vector<std::string> categories;
};

inline CategoryExtraction extract_categories(std::string_view wikitext,
                                             const LanguageTables& tables = LanguageTables{}) {
  NodeList nodes = parse(wikitext);
  auto categories = extract_categories(nodes, tables);
  return {render(nodes), std::move(categories)};
}

// ---------------------------------------------------------------------------
// Stage 3: markup removal.

namespace detail {

inline void trim_nodes(NodeList& nodes) {
  while (!nodes.empty()) {
    auto* t = nodes.front().as<Text>();
    if (!t) break;
    auto trimmed = text::trim(t->value);
    if (trimmed.empty()) {
      nodes.erase(nodes.begin());
      continue;
    }
    t->value = std::string(trimmed.data(), t->value.data() + t->value.size() - trimmed.data());
    break;
  }
  while (!nodes.empty()) {
    auto* t = nodes.back().as<Text>();
    if (!t) break;
    auto& v = t->value;
    while (!v.empty() && (text::is_blank(v.back()) || v.back() == '\n')) v.pop_back();
    if (v.empty()) {
      nodes.pop_back();
      continue;
    }
    break;
  }
}

}  // namespace detail

// Drops comments, template argument markers and templates. Templates on the
// keep list are replaced by their parameter values (not names) joined with
// single spaces. A template is resolved before anything nested in it, so the
// longest enclosing template decides first and discarded templates take their
// children with them.
inline NodeList flatten_templates(NodeList nodes, const TemplateKeepList& keep) {
  NodeList out;
  out.reserve(nodes.size());
  for (auto& node : nodes) {
    if (node.as<Comment>() || node.as<Argument>()) continue;
    if (auto* tpl = node.as<Template>()) {
      if (!keep.contains(tpl->name())) continue;
      bool first = true;
      for (auto& param : tpl->params) {
        NodeList value = flatten_templates(std::move(param.value), keep);
        detail::trim_nodes(value);
        if (value.empty()) continue;
        if (!first) out.push_back(Node{Text{" "}});
        first = false;
        for (auto& v : value) out.push_back(std::move(v));
      }
      continue;
    }
    if (auto* link = node.as<WikiLink>()) {
      if (link->label) link->label = flatten_templates(std::move(*link->label), keep);
    } else if (auto* ext = node.as<ExternalLink>()) {
      if (ext->label) ext->label = flatten_templates(std::move(*ext->label), keep);
    }
    out.push_back(std::move(node));
  }
  return out;
}

// Removes every balanced {{...}} range, nested pairs matched by depth
// counting. Unbalanced openers are left for final_clean.
inline std::string strip_braces(std::string_view s) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i + 1 < s.size();) {
    if (s[i] == '{' && s[i + 1] == '{') {
      open.push_back(i);
      i += 2;
    } else if (s[i] == '}' && s[i + 1] == '}' && !open.empty()) {
      spans.emplace_back(open.back(), i + 2);
      open.pop_back();
      i += 2;
    } else {
      ++i;
    }
  }
  if (spans.empty()) return std::string(s);
  std::sort(spans.begin(), spans.end());
  std::string out;
  out.reserve(s.size());
  std::size_t copied = 0;
  for (const auto& [b, e] : spans) {
    if (b < copied) continue;  // nested inside an already removed span
    out.append(s.substr(copied, b - copied));
    copied = e;
  }
  out.append(s.substr(copied));
  return out;
}

// File links are dropped, [[T|V]] becomes V, [[T]] becomes T, [url label]
// becomes label and bare bracketed URLs disappear. Category and interwiki
// links carry no inline text and are dropped as well.
inline NodeList simplify_links(NodeList nodes, const LanguageTables& tables = LanguageTables{}) {
  NodeList out;
  out.reserve(nodes.size());
  for (auto& node : nodes) {
    if (auto* link = node.as<WikiLink>()) {
      auto target = text::trim(link->target);
      const bool leading_colon = !target.empty() && target.front() == ':';
      if (!leading_colon && (tables.is_file(target) || tables.is_category(target) ||
                             tables.is_interwiki(target))) {
        continue;
      }
      if (link->label) {
        NodeList label = simplify_links(std::move(*link->label), tables);
        if (!text::trim(render(label)).empty()) {
          for (auto& n : label) out.push_back(std::move(n));
          continue;
        }
      }
      if (leading_colon) target.remove_prefix(1);
      out.push_back(Node{Text{std::string(text::trim(target))}});
      continue;
    }
    if (auto* ext = node.as<ExternalLink>()) {
      if (ext->label) {
        NodeList label = simplify_links(std::move(*ext->label), tables);
        for (auto& n : label) out.push_back(std::move(n));
      }
      continue;
    }
    if (auto* tpl = node.as<Template>()) {
      for (auto& p : tpl->params) p.value = simplify_links(std::move(p.value), tables);
    }
    out.push_back(std::move(node));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tables.

namespace detail {

inline bool at_line_start(std::string_view s, std::size_t pos) {
  while (pos > 0) {
    const char c = s[pos - 1];
    if (c == '\n') return true;
    if (!text::is_blank(c)) return false;
    --pos;
  }
  return true;
}

struct TableToken {
  std::size_t pos;
  bool open;
};

// "{|" anywhere; "|}" only at the start of a line.
inline std::vector<TableToken> table_tokens(std::string_view s) {
  std::vector<TableToken> tokens;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '{' && s[i + 1] == '|') {
      tokens.push_back({i, true});
      ++i;
    } else if (s[i] == '|' && s[i + 1] == '}' && at_line_start(s, i)) {
      tokens.push_back({i, false});
      ++i;
    }
  }
  return tokens;
}

// Closes tables left open at the next heading or at the end of the text.
inline std::string balance_tables(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 8);
  int depth = 0;
  bool first = true;
  for (auto line : text::split_lines(s)) {
    if (depth > 0 && markup::heading_of(line)) {
      for (; depth > 0; --depth) out += first ? "|}" : "\n|}";
    }
    if (!first) out.push_back('\n');
    first = false;
    out.append(line);
    for (const auto& t : table_tokens(line)) {
      if (t.open) {
        ++depth;
      } else if (depth > 0) {
        --depth;
      }
    }
  }
  for (; depth > 0; --depth) out += "\n|}";
  return out;
}

inline std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

// Drops the attribute part of a cell ("style=x | content").
inline std::string cell_content(std::string_view cell) {
  const auto bar = cell.find('|');
  if (bar != std::string_view::npos) cell = cell.substr(bar + 1);
  return collapse_spaces(cell);
}

inline void split_cells(std::string_view s, std::vector<std::string_view> seps,
                        std::vector<std::string>& row) {
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < s.size();) {
    bool matched = false;
    for (auto sep : seps) {
      if (s.compare(i, sep.size(), sep) == 0) {
        row.push_back(cell_content(s.substr(start, i - start)));
        i += sep.size();
        start = i;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  row.push_back(cell_content(s.substr(start)));
}

// Flattens the body of one table (text after "{|" up to "|}"). The first
// line holds table attributes.
inline std::string flatten_table_body(std::string_view body) {
  std::vector<std::vector<std::string>> rows(1);
  auto lines = text::split_lines(body);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    while (!line.empty() && text::is_blank(line.front())) line.remove_prefix(1);
    auto& row = rows.back();
    if (text::starts_with(line, "|-")) {
      rows.emplace_back();
    } else if (text::starts_with(line, "|+")) {
      rows.insert(rows.end() - 1, std::vector<std::string>{cell_content(line.substr(2))});
    } else if (text::starts_with(line, "!")) {
      split_cells(line.substr(1), {"!!", "||"}, row);
    } else if (text::starts_with(line, "|")) {
      split_cells(line.substr(1), {"||"}, row);
    } else {
      auto extra = collapse_spaces(line);
      if (extra.empty()) continue;
      if (row.empty()) {
        row.push_back(std::move(extra));
      } else {
        auto& cell = row.back();
        if (!cell.empty()) cell.push_back(' ');
        cell += extra;
      }
    }
  }
  std::vector<std::string> rendered;
  for (const auto& row : rows) {
    std::vector<std::string_view> cells;
    for (const auto& c : row) {
      if (!c.empty()) cells.push_back(c);
    }
    if (!cells.empty()) rendered.push_back(text::join(cells, " "));
  }
  return text::join(rendered, "\n");
}

// Rows left behind by a table whose opener vanished (e.g. inside a removed
// template): from a "|-" line up to the next heading.
inline std::string flatten_orphan_rows(std::string_view s) {
  auto lines = text::split_lines(s);
  std::string out;
  out.reserve(s.size());
  bool first = true;
  auto emit = [&](std::string_view line) {
    if (!first) out.push_back('\n');
    first = false;
    out.append(line);
  };
  for (std::size_t i = 0; i < lines.size();) {
    std::string_view line = lines[i];
    if (!text::starts_with(text::trim(line), "|-")) {
      emit(line);
      ++i;
      continue;
    }
    std::string body;  // first line is the (empty) attribute line
    std::size_t j = i;
    for (; j < lines.size() && !markup::heading_of(lines[j]); ++j) {
      body.push_back('\n');
      body.append(lines[j]);
    }
    auto flat = flatten_table_body(body);
    if (!flat.empty()) emit(flat);
    i = j;
  }
  return out;
}

}  // namespace detail

// Flattens wikitext tables to plain rows: cells joined with single spaces,
// rows with newlines. Innermost tables go first; unclosed tables are closed
// before the next heading or at the end; orphan "|-" rows and stray "|}"
// markers are handled afterwards.
inline std::string flatten_tables(std::string_view input, const Deadline* deadline = nullptr) {
  std::string s = detail::balance_tables(input);
  for (;;) {
    if (deadline) deadline->check();
    const auto tokens = detail::table_tokens(s);
    std::vector<std::pair<std::size_t, std::size_t>> innermost;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (tokens[i].open && !tokens[i + 1].open) {
        innermost.emplace_back(tokens[i].pos, tokens[i + 1].pos);
      }
    }
    if (innermost.empty()) break;
    for (auto it = innermost.rbegin(); it != innermost.rend(); ++it) {
      const auto [open, close] = *it;
      std::string flat =
          detail::flatten_table_body(std::string_view(s).substr(open + 2, close - open - 2));
      std::string replacement;
      if (!detail::at_line_start(s, open)) replacement.push_back('\n');
      replacement += flat;
      // Remainder of the "|}" line.
      std::size_t end = close + 2;
      s.replace(open, end - open, replacement);
    }
  }
  // Any "{|" left has no closer even after balancing; drop the marker.
  for (auto p = s.find("{|"); p != std::string::npos; p = s.find("{|", p)) s.erase(p, 2);
  s = detail::flatten_orphan_rows(s);
  for (auto p = s.find("|}"); p != std::string::npos; p = s.find("|}", p)) s.erase(p, 2);
  return s;
}

// ---------------------------------------------------------------------------
// Tags (final stage, but needed by section handling for emptiness checks).

enum class TagAction { kDestroy, kPreserve, kStrip };

struct TagEvent {
  std::string name;
  TagAction action;
  std::size_t offset;
};

// Destroy-list tags vanish with their content, preserve-list tags are copied
// verbatim with their content, any other tag loses its markup but keeps the
// text. `trace`, when given, receives one event per top-level tag occurrence.
inline std::string apply_tag_policy(std::string_view s, const TagPolicy& policy,
                                    std::vector<TagEvent>* trace = nullptr) {
  std::string out;
  out.reserve(s.size());
  std::size_t copied = 0;
  auto record = [&](const std::string& name, TagAction a, std::size_t at) {
    if (trace) trace->push_back({name, a, at});
  };
  for (auto p = s.find('<'); p != std::string_view::npos; p = s.find('<', p)) {
    auto tag = markup::tag_at(s, p);
    if (!tag) {
      ++p;
      continue;
    }
    out.append(s.substr(copied, p - copied));
    std::size_t next = tag->end;
    if (policy.destroy.count(tag->name)) {
      record(tag->name, TagAction::kDestroy, p);
      if (!tag->closing && !tag->self_closing) {
        if (auto close = markup::matching_close(s, tag->end, tag->name)) next = close->end;
      }
    } else if (policy.preserve.count(tag->name)) {
      record(tag->name, TagAction::kPreserve, p);
      if (!tag->closing && !tag->self_closing) {
        if (auto close = markup::matching_close(s, tag->end, tag->name)) next = close->end;
      }
      out.append(s.substr(p, next - p));
    } else {
      record(tag->name, TagAction::kStrip, p);
      if (tag->name == "br") out.push_back(' ');
    }
    copied = next;
    p = next;
  }
  out.append(s.substr(copied));
  return out;
}

// ---------------------------------------------------------------------------
// Stage 4: sections and headings.

namespace detail {

inline bool blank_body(std::string_view body, const TagPolicy* tags) {
  if (text::trim(body).empty()) return true;
  if (!tags) return false;
  TagPolicy destroy_only;
  destroy_only.destroy = tags->destroy;
  destroy_only.preserve.clear();
  return text::trim(apply_tag_policy(body, destroy_only)).empty();
}

inline bool has_list_markup(std::string_view s) {
  for (auto line : text::split_lines(s)) {
    auto t = text::trim(line);
    if (!t.empty() && (t.front() == '*' || t.front() == '#' || t.front() == ':')) return true;
  }
  return false;
}

}  // namespace detail

// Sections are delimited by heading lines of any level and include their
// subsections. exclude_listed drops matching sections; include_only_listed
// keeps only matching sections (and their subsections). Sections with no
// text anywhere in their subtree are dropped in both modes. When `tags` is
// given, text inside destroy-list tags does not count as content.
inline std::string filter_sections(std::string_view s, const SectionPolicy& policy,
                                   const TagPolicy* tags = nullptr) {
  const auto lines = text::split_lines(s);
  struct Section {
    int level;
    std::string_view title;
    std::size_t first_line;
    std::size_t end_line = 0;
    int parent = -1;
  };
  std::vector<Section> sections;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (auto h = markup::heading_of(lines[i])) sections.push_back({h->level, h->title, i});
  }
  const std::size_t lead_end = sections.empty() ? lines.size() : sections.front().first_line;
  std::vector<int> stack;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    sections[k].end_line = k + 1 < sections.size() ? sections[k + 1].first_line : lines.size();
    while (!stack.empty() && sections[static_cast<std::size_t>(stack.back())].level >= sections[k].level) {
      stack.pop_back();
    }
    sections[k].parent = stack.empty() ? -1 : stack.back();
    stack.push_back(static_cast<int>(k));
  }

  const std::size_t n = sections.size();
  std::vector<bool> listed(n), drop(n), has_content(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int parent = sections[k].parent;
    const bool inherited = parent >= 0 && listed[static_cast<std::size_t>(parent)];
    listed[k] = inherited || policy.matches(sections[k].title);
    drop[k] = policy.mode == SectionMode::kExcludeListed ? listed[k] : !listed[k];
  }
  auto body_of = [&](const Section& sec) {
    std::string body;
    for (std::size_t i = sec.first_line + 1; i < sec.end_line; ++i) {
      body.append(lines[i]);
      body.push_back('\n');
    }
    return body;
  };
  for (std::size_t k = n; k-- > 0;) {
    if (!drop[k] && !detail::blank_body(body_of(sections[k]), tags)) has_content[k] = true;
    const int parent = sections[k].parent;
    if (has_content[k] && parent >= 0) has_content[static_cast<std::size_t>(parent)] = true;
  }
  // A kept subsection keeps its parent heading in include mode.
  for (std::size_t k = n; k-- > 0;) {
    if (drop[k] || !has_content[k]) continue;
    for (int p = sections[k].parent; p >= 0; p = sections[static_cast<std::size_t>(p)].parent) {
      drop[static_cast<std::size_t>(p)] = false;
    }
  }

  std::vector<std::string_view> kept;
  bool keep_lead = policy.mode == SectionMode::kExcludeListed;
  if (!keep_lead && policy.keep_lead) {
    std::string lead;
    for (std::size_t i = 0; i < lead_end; ++i) {
      lead.append(lines[i]);
      lead.push_back('\n');
    }
    keep_lead = detail::has_list_markup(lead);
  }
  if (keep_lead) {
    for (std::size_t i = 0; i < lead_end; ++i) kept.push_back(lines[i]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (drop[k] || !has_content[k]) continue;
    for (std::size_t i = sections[k].first_line; i < sections[k].end_line; ++i) {
      kept.push_back(lines[i]);
    }
  }
  return text::join(kept, "\n");
}

namespace detail {

inline std::string plain_heading(std::string_view title, const TagPolicy& tags) {
  std::string t = apply_tag_policy(title, tags);
  TagPolicy strip_all;
  strip_all.destroy.clear();
  strip_all.preserve.clear();
  t = apply_tag_policy(t, strip_all);
  return collapse_spaces(t);
}

}  // namespace detail

// Rewrites heading lines as "N[.M[.K]] Title". Numbering follows the outline:
// a heading is a child of the nearest preceding heading with a smaller level.
inline std::string enumerate_headings(std::string_view s, const TagPolicy& tags = TagPolicy{}) {
  struct Open {
    int level;
    int count;
  };
  std::vector<Open> stack;
  std::string out;
  out.reserve(s.size());
  bool first = true;
  for (auto line : text::split_lines(s)) {
    if (!first) out.push_back('\n');
    first = false;
    auto h = markup::heading_of(line);
    if (!h) {
      out.append(line);
      continue;
    }
    std::optional<int> popped;
    while (!stack.empty() && stack.back().level > h->level) {
      popped = stack.back().count;
      stack.pop_back();
    }
    if (!stack.empty() && stack.back().level == h->level) {
      ++stack.back().count;
    } else {
      stack.push_back({h->level, popped ? *popped + 1 : 1});
    }
    std::string number;
    for (std::size_t i = 0; i < stack.size(); ++i) {
      if (i) number.push_back('.');
      number += std::to_string(stack[i].count);
    }
    out += number;
    const auto title = detail::plain_heading(h->title, tags);
    if (!title.empty()) {
      out.push_back(' ');
      out += title;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stage 5: final clean-up.

namespace detail {

inline std::string render_plain(const NodeList& nodes, const LanguageTables& tables);

inline void render_plain_into(std::string& out, const NodeList& nodes,
                              const LanguageTables& tables) {
  for (const auto& node : nodes) {
    if (const auto* t = node.as<Text>()) {
      out += t->value;
    } else if (const auto* link = node.as<WikiLink>()) {
      auto target = text::trim(link->target);
      const bool colon = !target.empty() && target.front() == ':';
      if (!colon && (tables.is_file(target) || tables.is_category(target) ||
                     tables.is_interwiki(target))) {
        continue;
      }
      if (link->label) {
        const auto label = render_plain(*link->label, tables);
        if (!text::trim(label).empty()) {
          out += label;
          continue;
        }
      }
      if (colon) target.remove_prefix(1);
      out += text::trim(target);
    } else if (const auto* ext = node.as<ExternalLink>()) {
      if (ext->label) render_plain_into(out, *ext->label, tables);
    }
    // Comments, arguments and templates contribute nothing.
  }
}

inline std::string render_plain(const NodeList& nodes, const LanguageTables& tables) {
  std::string out;
  render_plain_into(out, nodes, tables);
  return out;
}

// "{{name|" fragments whose closing braces never came.
inline std::string collapse_hanging_templates(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '{' && i + 1 < s.size() && s[i + 1] == '{') {
      std::size_t j = i;
      while (j < s.size() && s[j] == '{') ++j;
      while (j < s.size() && s[j] != '|' && s[j] != '{' && s[j] != '}' && s[j] != '\n' &&
             s[j] != '[' && s[j] != ']' && j - i < 256) {
        ++j;
      }
      if (j < s.size() && s[j] == '|') ++j;
      i = j;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

inline bool is_magic_word_char(char32_t cp) {
  return cp == '_' || (cp >= '0' && cp <= '9') || (utf8::is_letter(cp) && utf8::is_upper(cp));
}

// __TOC__, __NOTOC__, __БЕЗСАДРЖАЈА__ ...
inline std::string remove_magic_words(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '_' && i + 1 < s.size() && s[i + 1] == '_') {
      std::size_t j = i + 2;
      std::size_t letters = 0;
      while (j < s.size()) {
        if (s[j] == '_' && j + 1 < s.size() && s[j + 1] == '_') break;
        auto d = utf8::decode(s, j);
        if (!d.valid || !is_magic_word_char(d.cp) || d.cp == '_') break;
        ++letters;
        j += d.length;
      }
      if (letters >= 2 && j + 1 < s.size() && s[j] == '_' && s[j + 1] == '_') {
        i = j + 2;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

inline std::string remove_stray_closing_tags(std::string_view s, const TagPolicy& policy) {
  std::string out;
  out.reserve(s.size());
  std::size_t copied = 0;
  for (auto p = s.find("</"); p != std::string_view::npos; p = s.find("</", p + 1)) {
    auto tag = markup::tag_at(s, p);
    if (!tag || !tag->closing || policy.preserve.count(tag->name)) continue;
    out.append(s.substr(copied, p - copied));
    copied = tag->end;
    p = tag->end - 1;
  }
  out.append(s.substr(copied));
  return out;
}

inline bool attribute_name_char(char c) {
  return markup::ascii_alnum(c) || c == '-' || c == '_';
}

// Template parameter lines ("| name = value") and quoted HTML attributes
// (style="...") left behind by removed markup.
inline std::string remove_leftover_attributes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool first = true;
  for (auto line : text::split_lines(s)) {
    auto t = text::trim(line);
    if (!t.empty() && t.front() == '|') {
      auto eq = t.find('=');
      if (eq != std::string_view::npos) {
        auto name = text::trim(t.substr(1, eq - 1));
        if (!name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
              return attribute_name_char(c) || c == ' ' || static_cast<unsigned char>(c) >= 0x80;
            })) {
          continue;
        }
      }
    }
    if (!first) out.push_back('\n');
    first = false;
    for (std::size_t i = 0; i < line.size();) {
      if (attribute_name_char(line[i]) && (i == 0 || !attribute_name_char(line[i - 1]))) {
        std::size_t j = i;
        while (j < line.size() && attribute_name_char(line[j])) ++j;
        std::size_t k = j;
        while (k < line.size() && line[k] == ' ') ++k;
        if (k < line.size() && line[k] == '=') {
          ++k;
          while (k < line.size() && line[k] == ' ') ++k;
          if (k < line.size() && (line[k] == '"' || line[k] == '\'')) {
            const auto close = line.find(line[k], k + 1);
            if (close != std::string_view::npos) {
              i = close + 1;
              continue;
            }
          }
        }
        out.append(line.substr(i, j - i));
        i = j;
        continue;
      }
      out.push_back(line[i++]);
    }
  }
  return out;
}

inline void erase_all(std::string& s, std::string_view token) {
  for (auto p = s.find(token); p != std::string::npos; p = s.find(token, p)) {
    s.erase(p, token.size());
  }
}

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
  if (from.empty()) return;
  for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
    s.replace(p, from.size(), to);
  }
}

// Plain-text reading of residual wiki lines: heading markers and list
// markers at the start of lines are dropped.
inline std::string strip_line_markup(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool first = true;
  for (auto line : text::split_lines(s)) {
    if (!first) out.push_back('\n');
    first = false;
    if (auto h = markup::heading_of(line)) {
      out.append(h->title);
      continue;
    }
    std::size_t i = 0;
    for (;;) {
      while (i < line.size() && text::is_blank(line[i])) ++i;
      if (i < line.size() && (line[i] == '*' || line[i] == '#' || line[i] == ':' ||
                              line[i] == ';')) {
        ++i;
        continue;
      }
      break;
    }
    out.append(line.substr(i));
  }
  return out;
}

// Spaces/tabs collapse to one space, lines are trimmed, three or more
// newlines become two, and the whole text is trimmed.
inline std::string normalize_whitespace(std::string_view s) {
  std::string lines_done;
  lines_done.reserve(s.size());
  bool first = true;
  for (auto line : text::split_lines(s)) {
    if (!first) lines_done.push_back('\n');
    first = false;
    std::string collapsed;
    bool space = false;
    for (char c : line) {
      if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
        space = !collapsed.empty();
        continue;
      }
      if (space) collapsed.push_back(' ');
      space = false;
      collapsed.push_back(c);
    }
    lines_done += collapsed;
  }
  std::string out;
  out.reserve(lines_done.size());
  std::size_t newlines = 0;
  for (char c : lines_done) {
    if (c == '\n') {
      ++newlines;
      continue;
    }
    if (newlines) out.append(std::min<std::size_t>(newlines, 2), '\n');
    newlines = 0;
    out.push_back(c);
  }
  return std::string(text::trim(out));
}

}  // namespace detail

// Final regex-style sweep. Removes interwiki links, collapses hanging
// "{{name|" fragments, renders residual wiki nodes as plain text, removes
// magic words, stray closing tags and leftover attributes, applies the
// language replacement table and normalises whitespace. Preserve-list tag
// spans are left untouched.
inline std::string final_clean(std::string_view input, const CleanConfig& config = CleanConfig{}) {
  markup::Shield shield;
  std::string s = shield.protect(markup::Shield::scrub(input), config.tags.preserve);
  const auto& tables = config.tables;
  s = detail::remove_prefixed_links(
      s, [&tables](std::string_view target) { return tables.is_interwiki(target); });
  s = strip_braces(s);
  s = detail::collapse_hanging_templates(s);
  s = detail::render_plain(parse(s), tables);
  s = detail::strip_line_markup(s);
  s = detail::remove_magic_words(s);
  s = detail::remove_stray_closing_tags(s, config.tags);
  s = detail::remove_leftover_attributes(s);
  for (const auto& [from, to] : tables.replacements) detail::replace_all(s, from, to);
  // Erasing one marker can join the halves of another, so repeat until stable.
  for (std::size_t before = s.size() + 1; s.size() != before;) {
    before = s.size();
    for (std::string_view token : {"<!--", "-->", "{{", "}}", "[[", "]]", "{|", "|}", "__"}) {
      detail::erase_all(s, token);
    }
  }
  s = detail::normalize_whitespace(s);
  return shield.restore(s);
}

// ---------------------------------------------------------------------------
// Metadata and the full article pipeline.

struct ArticleMetadata {
  std::string url;
  std::size_t word_count = 0;
  double cyrillic_ratio = 0.0;
};

// MediaWiki-style title encoding: spaces become underscores, everything
// outside the unreserved set and ;:@$!*(),/~ is percent-encoded.
inline std::string encode_title(std::string_view title) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : text::trim(title)) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == ' ') {
      out.push_back('_');
    } else if (markup::ascii_alnum(ch) || std::string_view("-._~;:@$!*(),/").find(ch) !=
                                               std::string_view::npos) {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

inline double cyrillic_ratio(std::string_view s) {
  std::size_t words = 0, cyrillic = 0;
  bool in_word = false, has_cyrillic = false;
  for (std::size_t i = 0; i <= s.size();) {
    const bool end = i == s.size();
    utf8::Decoded d{' ', 1, true};
    if (!end) d = utf8::decode(s, i);
    const bool space = utf8::is_space(d.cp);
    if (space && in_word) {
      ++words;
      if (has_cyrillic) ++cyrillic;
      in_word = false;
      has_cyrillic = false;
    } else if (!space) {
      in_word = true;
      if (utf8::is_cyrillic(d.cp)) has_cyrillic = true;
    }
    if (end) break;
    i += d.length;
  }
  return words == 0 ? 0.0 : static_cast<double>(cyrillic) / static_cast<double>(words);
}

inline ArticleMetadata compute_metadata(std::string_view text, std::string_view title,
                                        std::string_view language, Project project) {
  ArticleMetadata m;
  m.url = "https://" + std::string(language) + "." + project_domain(project) + "/wiki/" +
          encode_title(title);
  m.word_count = text::count_words(text);
  m.cyrillic_ratio = cyrillic_ratio(text);
  return m;
}

inline ArticleMetadata compute_metadata(std::string_view text, std::string_view title,
                                        const DumpDescriptor& descriptor) {
  return compute_metadata(text, title, descriptor.language_code, descriptor.project);
}

struct CleanText {
  std::string text;
  std::vector<std::string> categories;
};

// Runs the five stages on raw wikitext. Throws TimeoutError when the
// deadline passes.
inline CleanText clean_text(std::string_view wikitext, const CleanConfig& config,
                            const Deadline* deadline = nullptr) {
  auto check = [deadline] {
    if (deadline) deadline->check();
  };
  markup::Shield shield;
  std::string s = shield.protect(markup::Shield::scrub(wikitext), config.verbatim_tags);
  s = pre_clean(s, config.tables);
  check();

  NodeList nodes = parse(s, deadline);
  CleanText result;
  result.categories = extract_categories(nodes, config.tables);
  check();

  nodes = flatten_templates(std::move(nodes), config.keep);
  nodes = simplify_links(std::move(nodes), config.tables);
  s = render(nodes);
  nodes.clear();
  s = strip_braces(s);
  check();
  s = flatten_tables(s, deadline);
  check();

  s = filter_sections(s, config.sections, &config.tags);
  s = enumerate_headings(s, config.tags);
  check();

  s = shield.restore(s);
  s = apply_tag_policy(s, config.tags);
  s = final_clean(s, config);
  result.text = std::move(s);
  return result;
}

struct CleanArticle {
  std::int64_t page_id = 0;
  std::string title;
  std::string url;
  std::string text;
  std::vector<std::string> categories;
  std::size_t word_count = 0;
  double cyrillic_ratio = 0.0;
};

// nullopt when nothing is left after cleaning.
inline std::optional<CleanArticle> clean_article(const RawPage& page, const CleanConfig& config,
                                                 const Deadline* deadline = nullptr) {
  CleanText cleaned = clean_text(page.text, config, deadline);
  if (cleaned.text.empty()) return std::nullopt;
  auto meta = compute_metadata(cleaned.text, page.title, config.language, config.project);
  return CleanArticle{page.page_id,         page.title,
                      std::move(meta.url),  std::move(cleaned.text),
                      std::move(cleaned.categories), meta.word_count,
                      meta.cyrillic_ratio};
}

}  // namespace corpusforge::wikitext
