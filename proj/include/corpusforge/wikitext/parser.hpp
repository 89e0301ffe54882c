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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "corpusforge/parallel.hpp"
#include "corpusforge/text.hpp"

// A small wikitext node parser: templates, template arguments, wikilinks,
// bracketed external links and comments. Everything else (tags, tables,
// headings, lists) stays in Text nodes and is handled by later text passes.
namespace corpusforge::wikitext {

struct Node;
using NodeList = std::vector<Node>;

struct Text {
  std::string value;
};

struct Comment {
  std::string body;
  bool closed = true;
};

// {{{name|default}}}
struct Argument {
  std::string source;
};

struct Parameter {
  std::optional<std::string> raw_name;  // text before '=' for named parameters
  NodeList value;

  std::string_view name() const { return raw_name ? text::trim(*raw_name) : std::string_view{}; }
};

struct Template {
  std::string raw_name;
  std::vector<Parameter> params;
  std::size_t source_length = 0;

  std::string_view name() const { return text::trim(raw_name); }
};

struct WikiLink {
  std::string target;
  std::optional<NodeList> label;
  std::size_t source_length = 0;
};

struct ExternalLink {
  std::string url;
  std::optional<NodeList> label;
};

struct Node {
  std::variant<Text, Comment, Argument, Template, WikiLink, ExternalLink> value;

  template <typename T>
  const T* as() const { return std::get_if<T>(&value); }
  template <typename T>
  T* as() { return std::get_if<T>(&value); }
};

inline std::string render(const NodeList& nodes);

inline void render_into(std::string& out, const NodeList& nodes);

inline void render_into(std::string& out, const Node& node) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Text>) {
          out += n.value;
        } else if constexpr (std::is_same_v<T, Comment>) {
          out += "<!--";
          out += n.body;
          if (n.closed) out += "-->";
        } else if constexpr (std::is_same_v<T, Argument>) {
          out += n.source;
        } else if constexpr (std::is_same_v<T, Template>) {
          out += "{{";
          out += n.raw_name;
          for (const auto& p : n.params) {
            out += '|';
            if (p.raw_name) {
              out += *p.raw_name;
              out += '=';
            }
            render_into(out, p.value);
          }
          out += "}}";
        } else if constexpr (std::is_same_v<T, WikiLink>) {
          out += "[[";
          out += n.target;
          if (n.label) {
            out += '|';
            render_into(out, *n.label);
          }
          out += "]]";
        } else if constexpr (std::is_same_v<T, ExternalLink>) {
          out += '[';
          out += n.url;
          if (n.label) {
            out += ' ';
            render_into(out, *n.label);
          }
          out += ']';
        }
      },
      node.value);
}

inline void render_into(std::string& out, const NodeList& nodes) {
  for (const auto& n : nodes) render_into(out, n);
}

inline std::string render(const NodeList& nodes) {
  std::string out;
  render_into(out, nodes);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view source, const Deadline* deadline = nullptr)
      : src_(source), deadline_(deadline) {}

  NodeList parse() {
    std::size_t pos = 0;
    bool hit = false;
    return parse_nodes(pos, 0, hit);
  }

 private:
  enum Stop : unsigned {
    kPipe = 1u << 0,
    kBraces = 1u << 1,        // }}
    kBrackets = 1u << 2,      // ]]
    kBracket = 1u << 3,       // ]
    kTripleBraces = 1u << 4,  // }}}
    kNewline = 1u << 5,
  };
  enum Kind : std::uint64_t { kTemplate = 0, kArgument = 1, kLink = 2, kExtLink = 3 };
  static constexpr int kMaxDepth = 200;

  bool at(std::size_t pos, std::string_view token) const {
    return src_.compare(pos, token.size(), token) == 0;
  }

  bool is_stop(std::size_t pos, unsigned stops) const {
    const char c = src_[pos];
    if ((stops & kTripleBraces) && c == '}' && at(pos, "}}}")) return true;
    if ((stops & kBraces) && c == '}' && at(pos, "}}")) return true;
    if ((stops & kBrackets) && c == ']' && at(pos, "]]")) return true;
    if ((stops & kBracket) && c == ']') return true;
    if ((stops & kPipe) && c == '|') return true;
    if ((stops & kNewline) && c == '\n') return true;
    return false;
  }

  bool failed(std::size_t pos, Kind kind) const { return failures_.count(pos * 4 + kind) > 0; }

  // A construct whose content scan starting at `start` ran off the end of the
  // input. Any scan reaching `start` whose stop set is a subset of that scan's
  // first stop set visits the same positions and also runs off the end.
  bool doomed(std::size_t pos, unsigned stops) const {
    if (eof_failures_.empty() || pos == 0 || (src_[pos - 1] != '{' && src_[pos - 1] != '[')) {
      return false;
    }
    auto it = eof_failures_.find(pos);
    return it != eof_failures_.end() && (stops & ~it->second) == 0;
  }

  static unsigned first_stops(Kind kind) {
    switch (kind) {
      case kTemplate: return kPipe | kBraces;
      case kArgument: return kPipe | kTripleBraces;
      case kLink: return kPipe | kBrackets | kNewline;
      default: return 0;
    }
  }

  static std::size_t opener_length(Kind kind) { return kind == kArgument ? 3 : 2; }
  void mark_failed(std::size_t pos, Kind kind) {
    if (depth_ < kMaxDepth) failures_.insert(pos * 4 + kind);
  }

  static void push_text(NodeList& nodes, std::string_view s) {
    if (!nodes.empty()) {
      if (auto* t = nodes.back().as<Text>()) {
        t->value += s;
        return;
      }
    }
    nodes.push_back(Node{Text{std::string(s)}});
  }

  NodeList parse_nodes(std::size_t& pos, unsigned stops, bool& hit_stop) {
    NodeList nodes;
    hit_stop = false;
    std::size_t text_start = pos;
    auto flush = [&] {
      if (pos > text_start) push_text(nodes, src_.substr(text_start, pos - text_start));
    };
    while (pos < src_.size()) {
      if (deadline_ && (++ticks_ & 0xFFF) == 0) deadline_->check();
      if (stops && doomed(pos, stops)) {
        pos = src_.size();
        return nodes;
      }
      if (stops && is_stop(pos, stops)) {
        hit_stop = true;
        break;
      }
      const char c = src_[pos];
      if (c == '<' && at(pos, "<!--")) {
        flush();
        nodes.push_back(parse_comment(pos));
        text_start = pos;
        continue;
      }
      if (c == '{' && at(pos, "{{")) {
        flush();
        if (at(pos, "{{{")) {
          if (auto n = try_parse(pos, kArgument)) {
            nodes.push_back(std::move(*n));
            text_start = pos;
            continue;
          }
          push_text(nodes, "{");
          ++pos;
          text_start = pos;
          continue;
        }
        if (auto n = try_parse(pos, kTemplate)) {
          nodes.push_back(std::move(*n));
        } else {
          push_text(nodes, "{{");
          pos += 2;
        }
        text_start = pos;
        continue;
      }
      if (c == '[') {
        const Kind kind = at(pos, "[[") ? kLink : kExtLink;
        if (kind == kLink || starts_url(pos + 1)) {
          flush();
          if (auto n = try_parse(pos, kind)) {
            nodes.push_back(std::move(*n));
          } else {
            push_text(nodes, "[");
            ++pos;
          }
          text_start = pos;
          continue;
        }
      }
      ++pos;
    }
    flush();
    return nodes;
  }

  Node parse_comment(std::size_t& pos) {
    const std::size_t body = pos + 4;
    const auto end = src_.find("-->", body);
    if (end == std::string_view::npos) {
      Node n{Comment{std::string(src_.substr(body)), false}};
      pos = src_.size();
      return n;
    }
    Node n{Comment{std::string(src_.substr(body, end - body)), true}};
    pos = end + 3;
    return n;
  }

  bool starts_url(std::size_t pos) const {
    for (std::string_view scheme : {"http://", "https://", "ftp://", "//", "mailto:", "news:",
                                    "irc://", "ircs://", "ftps://", "sftp://", "git://"}) {
      if (at(pos, scheme)) return true;
    }
    return false;
  }

  // On success advances pos past the construct.
  std::optional<Node> try_parse(std::size_t& pos, Kind kind) {
    if (failed(pos, kind) || depth_ >= kMaxDepth) return std::nullopt;
    ++depth_;
    std::size_t p = pos;
    std::optional<Node> result;
    switch (kind) {
      case kTemplate: result = parse_template(p); break;
      case kArgument: result = parse_argument(p); break;
      case kLink: result = parse_link(p); break;
      case kExtLink: result = parse_ext_link(p); break;
    }
    --depth_;
    if (!result) {
      mark_failed(pos, kind);
      if (p >= src_.size() && kind != kExtLink && depth_ < kMaxDepth) {
        eof_failures_.emplace(pos + opener_length(kind), first_stops(kind));
      }
      return std::nullopt;
    }
    pos = p;
    return result;
  }

  std::optional<Node> parse_template(std::size_t& p) {
    const std::size_t start = p;
    p += 2;
    bool hit = false;
    NodeList name = parse_nodes(p, kPipe | kBraces, hit);
    if (!hit) return std::nullopt;
    Template t;
    t.raw_name = render(name);
    while (src_[p] == '|') {
      ++p;
      NodeList value = parse_nodes(p, kPipe | kBraces, hit);
      if (!hit) return std::nullopt;
      t.params.push_back(split_parameter(std::move(value)));
    }
    p += 2;
    t.source_length = p - start;
    return Node{std::move(t)};
  }

  static Parameter split_parameter(NodeList value) {
    Parameter param;
    if (!value.empty()) {
      if (auto* first = value.front().as<Text>()) {
        const auto eq = first->value.find('=');
        if (eq != std::string::npos) {
          param.raw_name = first->value.substr(0, eq);
          first->value.erase(0, eq + 1);
          if (first->value.empty()) value.erase(value.begin());
        }
      }
    }
    param.value = std::move(value);
    return param;
  }

  std::optional<Node> parse_argument(std::size_t& p) {
    const std::size_t start = p;
    p += 3;
    bool hit = false;
    for (;;) {
      parse_nodes(p, kPipe | kTripleBraces, hit);
      if (!hit) return std::nullopt;
      if (src_[p] == '|') {
        ++p;
        continue;
      }
      break;
    }
    p += 3;
    return Node{Argument{std::string(src_.substr(start, p - start))}};
  }

  std::optional<Node> parse_link(std::size_t& p) {
    const std::size_t start = p;
    p += 2;
    bool hit = false;
    NodeList target = parse_nodes(p, kPipe | kBrackets | kNewline, hit);
    if (!hit || src_[p] == '\n') return std::nullopt;
    WikiLink link;
    link.target = render(target);
    if (src_[p] == '|') {
      ++p;
      NodeList label = parse_nodes(p, kBrackets | kNewline, hit);
      if (!hit || src_[p] == '\n') return std::nullopt;
      link.label = std::move(label);
    }
    p += 2;
    link.source_length = p - start;
    return Node{std::move(link)};
  }

  std::optional<Node> parse_ext_link(std::size_t& p) {
    std::size_t q = p + 1;
    while (q < src_.size() && src_[q] != ' ' && src_[q] != ']' && src_[q] != '\n' &&
           src_[q] != '<' && src_[q] != '[') {
      ++q;
    }
    if (q >= src_.size() || src_[q] == '\n' || src_[q] == '<' || src_[q] == '[') {
      return std::nullopt;
    }
    ExternalLink link;
    link.url = std::string(src_.substr(p + 1, q - p - 1));
    if (src_[q] == ']') {
      p = q + 1;
      return Node{std::move(link)};
    }
    std::size_t r = q + 1;
    bool hit = false;
    NodeList label = parse_nodes(r, kBracket | kNewline, hit);
    if (!hit || src_[r] == '\n') return std::nullopt;
    link.label = std::move(label);
    p = r + 1;
    return Node{std::move(link)};
  }

  std::string_view src_;
  const Deadline* deadline_;
  std::unordered_set<std::uint64_t> failures_;
  std::unordered_map<std::size_t, unsigned> eof_failures_;
  int depth_ = 0;
  std::uint64_t ticks_ = 0;
};

inline NodeList parse(std::string_view source, const Deadline* deadline = nullptr) {
  return Parser(source, deadline).parse();
}

}  // namespace corpusforge::wikitext
