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

#include <expat.h>

#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "corpusforge/dump.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/utf8.hpp"

namespace corpusforge {

struct IngestOptions {
  std::size_t min_chars = 80;
  // Matched case-insensitively at the start of the text, e.g. "#REDIRECT".
  std::vector<std::string> redirect_keywords{"#REDIRECT"};
};

struct IngestStats {
  std::uint64_t pages_read = 0;
  std::uint64_t retained = 0;
  std::map<std::string, std::uint64_t> skipped;  // reason -> count
  std::uint64_t replaced_sequences = 0;

  std::uint64_t skipped_total() const {
    std::uint64_t n = 0;
    for (const auto& [reason, count] : skipped) n += count;
    return n;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["pages_read"] = pages_read;
    j["retained"] = retained;
    j["skipped"] = ordered_json::object();
    for (const auto& [reason, count] : skipped) j["skipped"][reason] = count;
    j["replaced_sequences"] = replaced_sequences;
    return j;
  }
};

namespace skip_reason {
inline constexpr const char* kRedirect = "redirect";
inline constexpr const char* kNamespace = "namespace";
inline constexpr const char* kShort = "short";
inline constexpr const char* kDuplicate = "duplicate_id";
inline constexpr const char* kMalformed = "malformed";
}  // namespace skip_reason

inline bool starts_with_redirect(std::string_view text,
                                 const std::vector<std::string>& keywords) {
  std::size_t i = 0;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                             text[i] == '\r')) {
    ++i;
  }
  // Keywords are short; lowercase a bounded prefix only.
  const std::string head = utf8::to_lower(text.substr(i, 64));
  for (const auto& kw : keywords) {
    const std::string k = utf8::to_lower(kw);
    if (head.compare(0, k.size(), k) != 0) continue;
    if (head.size() == k.size()) return true;
    auto d = utf8::decode(head, k.size());
    if (!utf8::is_letter(d.cp)) return true;
  }
  return false;
}

// Returns the skip reason for a page, or nullptr when it is retained.
inline const char* classify_page(const RawPage& page, const IngestOptions& options) {
  if (page.page_id <= 0 || page.title.empty()) return skip_reason::kMalformed;
  if (page.ns != 0) return skip_reason::kNamespace;
  if (page.is_redirect || starts_with_redirect(page.text, options.redirect_keywords)) {
    return skip_reason::kRedirect;
  }
  if (utf8::length(page.text) < options.min_chars) return skip_reason::kShort;
  return nullptr;
}

// Streaming reader over a pages-articles export (.xml.bz2 or plain .xml).
// Yields retained pages in document order; memory is bounded by the largest
// single page plus one read buffer.
class DumpReader {
 public:
  explicit DumpReader(const fs::path& archive, IngestOptions options = {})
      : path_(archive), options_(std::move(options)), file_(archive, std::ios::binary) {
    if (!file_) throw IoError("cannot open " + archive.string());
    std::array<char, 3> magic{};
    file_.read(magic.data(), magic.size());
    compressed_ = file_.gcount() == 3 && magic[0] == 'B' && magic[1] == 'Z' && magic[2] == 'h';
    file_.clear();
    file_.seekg(0);
    if (compressed_) input_.push(boost::iostreams::bzip2_decompressor());
    input_.push(file_);

    parser_.reset(XML_ParserCreate(nullptr));
    if (!parser_) throw Error("cannot create XML parser");
    XML_SetUserData(parser_.get(), this);
    XML_SetElementHandler(parser_.get(), &DumpReader::on_start, &DumpReader::on_end);
    XML_SetCharacterDataHandler(parser_.get(), &DumpReader::on_chars);
  }

  DumpReader(const DumpReader&) = delete;
  DumpReader& operator=(const DumpReader&) = delete;

  std::optional<RawPage> next() {
    while (ready_.empty() && !finished_) feed();
    if (ready_.empty()) return std::nullopt;
    RawPage page = std::move(ready_.front());
    ready_.pop_front();
    ++emitted_;
    return page;
  }

  const IngestStats& stats() const { return stats_; }

 private:
  enum class Field { kNone, kTitle, kNs, kId, kText };

  struct ParserDeleter {
    void operator()(XML_Parser p) const { XML_ParserFree(p); }
  };

  void feed() {
    input_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    const auto n = static_cast<std::size_t>(input_.gcount());
    if (input_.bad()) {
      throw TruncatedStreamError("corrupt or truncated compressed stream in " + path_.string(),
                                 emitted_ + ready_.size());
    }
    const bool last = n < buffer_.size() && input_.eof();
    if (XML_Parse(parser_.get(), buffer_.data(), static_cast<int>(n), last ? 1 : 0) ==
        XML_STATUS_ERROR) {
      const auto code = XML_GetErrorCode(parser_.get());
      const auto offset = static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser_.get()));
      if (last && (code == XML_ERROR_NO_ELEMENTS || code == XML_ERROR_UNCLOSED_TOKEN ||
                   code == XML_ERROR_PARTIAL_CHAR)) {
        throw TruncatedStreamError("XML document ends prematurely in " + path_.string(),
                                   emitted_ + ready_.size());
      }
      throw ParseError(std::string("malformed XML in ") + path_.string() + ": " +
                           XML_ErrorString(code),
                       offset);
    }
    if (last) {
      finished_ = true;
      if (depth_ != 0) {
        throw TruncatedStreamError("XML document ends prematurely in " + path_.string(),
                                   emitted_ + ready_.size());
      }
    }
  }

  static void on_start(void* self_ptr, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<DumpReader*>(self_ptr);
    ++self->depth_;
    const std::string_view tag(name);
    if (tag == "page") {
      self->in_page_ = true;
      self->page_depth_ = self->depth_;
      self->page_ = RawPage{};
      self->has_id_ = false;
      self->has_ns_ = false;
      return;
    }
    if (!self->in_page_) return;
    const bool page_child = self->depth_ == self->page_depth_ + 1;
    self->field_ = Field::kNone;
    if (page_child && tag == "title") {
      self->field_ = Field::kTitle;
    } else if (page_child && tag == "ns") {
      self->field_ = Field::kNs;
    } else if (page_child && tag == "id" && !self->has_id_) {
      self->field_ = Field::kId;
    } else if (page_child && tag == "redirect") {
      self->page_.is_redirect = true;
    } else if (tag == "text") {
      self->field_ = Field::kText;
      self->page_.text.clear();
    }
    if (self->field_ != Field::kNone) self->chars_.clear();
    (void)attrs;
  }

  static void on_chars(void* self_ptr, const XML_Char* s, int len) {
    auto* self = static_cast<DumpReader*>(self_ptr);
    if (self->field_ == Field::kText) {
      self->page_.text.append(s, static_cast<std::size_t>(len));
    } else if (self->field_ != Field::kNone) {
      self->chars_.append(s, static_cast<std::size_t>(len));
    }
  }

  static void on_end(void* self_ptr, const XML_Char* name) {
    auto* self = static_cast<DumpReader*>(self_ptr);
    const std::string_view tag(name);
    if (self->in_page_) {
      switch (self->field_) {
        case Field::kTitle: self->page_.title = self->chars_; break;
        case Field::kNs: self->page_.ns = parse_int(self->chars_, -1); self->has_ns_ = true; break;
        case Field::kId:
          self->page_.page_id = parse_int(self->chars_, 0);
          self->has_id_ = true;
          break;
        default: break;
      }
      self->field_ = Field::kNone;
      if (tag == "page" && self->depth_ == self->page_depth_) {
        self->in_page_ = false;
        self->finish_page();
      }
    }
    --self->depth_;
  }

  static std::int64_t parse_int(const std::string& s, std::int64_t fallback) {
    try {
      std::size_t used = 0;
      const auto v = std::stoll(s, &used);
      return used == 0 ? fallback : v;
    } catch (const std::exception&) {
      return fallback;
    }
  }

  void finish_page() {
    ++stats_.pages_read;
    const char* reason = classify_page(page_, options_);
    if (reason == nullptr && !seen_ids_.insert(page_.page_id).second) {
      reason = skip_reason::kDuplicate;
    }
    if (reason != nullptr) {
      ++stats_.skipped[reason];
      return;
    }
    ++stats_.retained;
    ready_.push_back(std::move(page_));
  }

  fs::path path_;
  IngestOptions options_;
  std::ifstream file_;
  boost::iostreams::filtering_istream input_;
  bool compressed_ = false;
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser_;
  std::array<char, 1 << 16> buffer_{};

  int depth_ = 0;
  int page_depth_ = 0;
  bool in_page_ = false;
  bool has_id_ = false;
  bool has_ns_ = false;
  Field field_ = Field::kNone;
  std::string chars_;
  RawPage page_;
  std::deque<RawPage> ready_;
  std::unordered_set<std::int64_t> seen_ids_;
  std::uint64_t emitted_ = 0;
  bool finished_ = false;
  IngestStats stats_;
};

// Yields the retained pages of a dump in document order.
inline DumpReader parse_dump(const fs::path& archive, IngestOptions options = {}) {
  return DumpReader(archive, std::move(options));
}

// Writes {"id","title","text"} lines. `source` is anything with
// std::optional<RawPage> next() and const IngestStats& stats().
template <typename PageSource>
IngestStats serialize_pages(PageSource& source, const fs::path& out) {
  JsonlWriter writer(out);
  std::uint64_t replaced = 0;
  while (auto page = source.next()) {
    replaced += utf8::sanitize(page->title);
    replaced += utf8::sanitize(page->text);
    ordered_json line;
    line["id"] = page->page_id;
    line["title"] = std::move(page->title);
    line["text"] = std::move(page->text);
    writer.write(line);
  }
  writer.close();
  IngestStats stats = source.stats();
  stats.replaced_sequences += replaced;
  return stats;
}

// Adapts an in-memory list of pages, applying the same filters as DumpReader.
class PageListSource {
 public:
  explicit PageListSource(std::vector<RawPage> pages, IngestOptions options = {})
      : pages_(std::move(pages)), options_(std::move(options)) {}

  std::optional<RawPage> next() {
    while (pos_ < pages_.size()) {
      RawPage& page = pages_[pos_++];
      ++stats_.pages_read;
      const char* reason = classify_page(page, options_);
      if (reason == nullptr && !seen_.insert(page.page_id).second) {
        reason = skip_reason::kDuplicate;
      }
      if (reason) {
        ++stats_.skipped[reason];
        continue;
      }
      ++stats_.retained;
      return std::move(page);
    }
    return std::nullopt;
  }

  const IngestStats& stats() const { return stats_; }

 private:
  std::vector<RawPage> pages_;
  IngestOptions options_;
  std::size_t pos_ = 0;
  std::unordered_set<std::int64_t> seen_;
  IngestStats stats_;
};

}  // namespace corpusforge
