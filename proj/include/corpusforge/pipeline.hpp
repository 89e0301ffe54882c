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
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpusforge/dump.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/fetch.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/stages.hpp"
#include "corpusforge/wikitext/config.hpp"

namespace corpusforge::pipeline {

inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"fetch",   "ingest", "clean", "encode",
                                              "cluster", "dedup",  "stats"};
  return names;
}

struct PipelineConfig {
  DumpDescriptor descriptor;
  std::optional<fs::path> archive;  // local dump; skips fetch
  fs::path workdir = "work";
  wikitext::CleanConfig clean;
  IngestOptions ingest;
  std::uint64_t min_freq = 3;
  encode::EncodeOptions encode;
  std::size_t max_bucket = 3000;
  dedup::DedupOptions dedup;
  stages::StatsOptions stats;
  unsigned workers = 1;
  FetchOptions fetch;
  json source;  // merged JSON the config was built from

  // Parameters that influence outputs, per stage. Worker counts are left out
  // so that changing them never invalidates cached results.
  json stage_params(const std::string& stage) const {
    if (stage == "fetch") return {{"url", descriptor.source_url}};
    if (stage == "ingest") {
      return {{"min_chars", ingest.min_chars}, {"redirects", ingest.redirect_keywords}};
    }
    if (stage == "clean") {
      json c = source;
      for (const char* k : {"workers", "workdir", "archive", "encode", "cluster", "dedup",
                            "stats", "ingest", "dump_version", "url_template", "fetch"}) {
        c.erase(k);
      }
      return c;
    }
    if (stage == "encode") {
      return {{"min_freq", min_freq}, {"max_words", encode.max_words}, {"prefix", encode.prefix}};
    }
    if (stage == "cluster") return {{"max_bucket", max_bucket}};
    if (stage == "dedup") {
      return {{"perms", dedup.permutations},
              {"threshold", dedup.threshold},
              {"seed", dedup.seed},
              {"sensitivity", dedup.sensitivity}};
    }
    if (stage == "stats") {
      return {{"top", stats.top},
              {"axis", stats.axis == stats::AxisMode::kUnion ? "union" : "first"},
              {"plain", stats.plain}};
    }
    throw ConfigError("unknown stage '" + stage + "'");
  }

  static PipelineConfig from_json(const json& j, const fs::path& base_dir = {}) {
    PipelineConfig c;
    c.source = j;
    try {
      c.clean = wikitext::CleanConfig::from_json(j);
      c.workers = j.value("workers", 1u);
      if (c.workers < 1) throw ConfigError("workers must be positive");
      c.workdir = j.value("workdir", std::string("work"));
      if (c.workdir.is_relative() && !base_dir.empty()) c.workdir = base_dir / c.workdir;
      if (j.contains("archive")) {
        fs::path a = j.at("archive").get<std::string>();
        if (a.is_relative() && !base_dir.empty()) a = base_dir / a;
        c.archive = a;
      }
      const auto version = j.value("dump_version", std::string("20260401"));
      const auto url = j.value("url_template", std::string(kDefaultUrlTemplate));
      c.descriptor = DumpDescriptor::make(c.clean.language, c.clean.project, version, url);

      c.ingest.redirect_keywords = c.clean.tables.redirect_keywords;
      if (j.contains("ingest")) {
        c.ingest.min_chars = j["ingest"].value("min_chars", c.ingest.min_chars);
      }
      if (j.contains("encode")) {
        const auto& e = j["encode"];
        c.min_freq = e.value("min_freq", c.min_freq);
        c.encode.max_words = e.value("max_words", c.encode.max_words);
        c.encode.prefix = e.value("prefix", c.encode.prefix);
      }
      if (j.contains("cluster")) c.max_bucket = j["cluster"].value("max_bucket", c.max_bucket);
      if (!j.contains("dedup") || !j["dedup"].contains("seed")) {
        throw ConfigError("dedup.seed is required");
      }
      const auto& d = j["dedup"];
      c.dedup.permutations = d.value("perms", c.dedup.permutations);
      c.dedup.threshold = d.value("threshold", c.dedup.threshold);
      c.dedup.seed = d.at("seed").get<std::uint64_t>();
      c.dedup.sensitivity = d.value("sensitivity", c.dedup.sensitivity);
      if (j.contains("stats")) {
        const auto& s = j["stats"];
        c.stats.top = s.value("top", c.stats.top);
        const auto axis = s.value("axis", std::string("first"));
        if (axis != "first" && axis != "union") throw ConfigError("stats.axis must be first|union");
        c.stats.axis = axis == "union" ? stats::AxisMode::kUnion : stats::AxisMode::kFirst;
        c.stats.plain = s.value("plain", false);
      }
      if (j.contains("fetch")) {
        const auto& f = j["fetch"];
        c.fetch.max_attempts = f.value("max_attempts", c.fetch.max_attempts);
        c.fetch.backoff = std::chrono::milliseconds(
            f.value("backoff_ms", static_cast<long>(c.fetch.backoff.count())));
      }
    } catch (const json::exception& e) {
      throw ConfigError(std::string("invalid pipeline config: ") + e.what());
    }
    if (c.min_freq < 1 || c.encode.max_words < 1 || c.encode.prefix < 1 || c.max_bucket < 2 ||
        c.dedup.permutations < 1 || !(c.dedup.threshold > 0.0) || !(c.dedup.sensitivity > 0.0) ||
        c.stats.top < 2 || c.ingest.min_chars < 1) {
      throw ConfigError("numeric pipeline parameters must be positive");
    }
    c.clean.timeout_s = j.value("timeout_s", c.clean.timeout_s);
    return c;
  }

  // The workdir named by CORPUSFORGE_WORKDIR wins over the config file.
  static PipelineConfig load(const fs::path& path) {
    auto c = from_json(wikitext::load_config_json(path), path.parent_path());
    if (const char* env = std::getenv("CORPUSFORGE_WORKDIR"); env && *env) c.workdir = env;
    return c;
  }
};

struct StageReport {
  std::string name;
  std::string status;  // ran | cached | skipped
  double seconds = 0.0;
  json counts = json::object();
};

struct RunSummary {
  std::vector<StageReport> stages;
  fs::path workdir;

  ordered_json to_json() const {
    ordered_json j;
    j["workdir"] = workdir.string();
    j["stages"] = ordered_json::array();
    for (const auto& s : stages) {
      j["stages"].push_back(
          {{"name", s.name}, {"status", s.status}, {"seconds", s.seconds}, {"counts", s.counts}});
    }
    return j;
  }
};

// Files in the working directory.
struct Layout {
  fs::path root;

  fs::path raw() const { return root / "raw.jsonl"; }
  fs::path clean() const { return root / "clean.jsonl"; }
  fs::path encoded() const { return root / "encoded.jsonl"; }
  fs::path vocab() const { return root / "vocab.json"; }
  fs::path buckets() const { return root / "buckets.jsonl"; }
  fs::path signatures() const { return root / "signatures.jsonl"; }
  fs::path corpus() const { return root / "corpus.jsonl"; }
  fs::path removed() const { return root / "removed.jsonl"; }
  fs::path dedup_summary() const { return root / "dedup_summary.json"; }
  fs::path report() const { return root / "report.json"; }
  fs::path stamps() const { return root / "stamps"; }
  fs::path quarantine() const { return root / "quarantine"; }
  fs::path download() const { return root / "download"; }
  fs::path summary() const { return root / "run_summary.json"; }
};

class Runner {
 public:
  explicit Runner(PipelineConfig config) : config_(std::move(config)), layout_{config_.workdir} {}

  bool force = false;

  RunSummary run(const std::set<std::string>& selected = {}) {
    for (const auto& s : selected) {
      if (std::find(stage_names().begin(), stage_names().end(), s) == stage_names().end()) {
        throw ConfigError("unknown stage '" + s + "'");
      }
    }
    fs::create_directories(layout_.stamps());
    RunSummary summary;
    summary.workdir = layout_.root;
    for (const auto& name : stage_names()) {
      if (!selected.empty() && !selected.count(name)) continue;
      summary.stages.push_back(run_stage(name));
      write_json_file(layout_.summary(), summary.to_json());
    }
    return summary;
  }

  const Layout& layout() const { return layout_; }
  fs::path archive_path() const {
    return config_.archive ? *config_.archive : layout_.download() / config_.descriptor.file_name();
  }

 private:
  struct Spec {
    std::vector<fs::path> inputs;
    std::vector<fs::path> outputs;
    // Receives temporary output paths, parallel to `outputs`.
    std::function<json(const std::vector<fs::path>&)> body;
  };

  Spec spec_for(const std::string& name) const {
    const auto& c = config_;
    const auto& l = layout_;
    if (name == "ingest") {
      return {{archive_path()}, {l.raw()}, [&c, this](const std::vector<fs::path>& out) {
                return stages::ingest(archive_path(), out[0], c.ingest).to_json();
              }};
    }
    if (name == "clean") {
      return {{l.raw()}, {l.clean()}, [&c, &l](const std::vector<fs::path>& out) {
                return stages::clean(l.raw(), out[0], c.clean,
                                     {c.workers, c.clean.timeout_s, 512})
                    .to_json();
              }};
    }
    if (name == "encode") {
      return {{l.clean()}, {l.encoded(), l.vocab()}, [&c, &l](const std::vector<fs::path>& out) {
                return stages::encode(l.clean(), out[0], out[1], c.min_freq, c.encode, c.workers)
                    .to_json();
              }};
    }
    if (name == "cluster") {
      return {{l.encoded()}, {l.buckets()}, [&c, &l](const std::vector<fs::path>& out) {
                return stages::cluster(l.encoded(), out[0], c.max_bucket).to_json();
              }};
    }
    if (name == "dedup") {
      return {{l.clean(), l.encoded(), l.buckets()},
              {l.corpus(), l.removed(), l.dedup_summary(), l.signatures()},
              [&c, &l](const std::vector<fs::path>& out) {
                auto opts = c.dedup;
                opts.workers = c.workers;
                return json(stages::dedup(l.clean(), l.encoded(), l.buckets(),
                                          {out[0], out[1], out[2], out[3]}, opts)
                                .to_json());
              }};
    }
    if (name == "stats") {
      return {{l.clean(), l.corpus()}, {l.report()}, [&c, &l](const std::vector<fs::path>& out) {
                auto report = stages::stats_report(l.clean(), l.corpus(), c.stats);
                write_json_file(out[0], report);
                return json{{"articles_before", report["before"]["articles"]},
                            {"articles_after", report["after"]["articles"]},
                            {"cosine_delta", report["cosine_delta"]}};
              }};
    }
    throw ConfigError("unknown stage '" + name + "'");
  }

  StageReport run_fetch() {
    StageReport r{"fetch", "skipped", 0.0, json::object()};
    if (config_.archive) {
      r.counts["archive"] = config_.archive->string();
      r.counts["note"] = "local archive configured";
      return r;
    }
    const auto start = std::chrono::steady_clock::now();
    const bool present = fs::exists(archive_path());
    try {
      auto path = fetch_dump(config_.descriptor, layout_.download(), config_.fetch);
      r.counts["archive"] = path.string();
    } catch (const Error& e) {
      throw StageError("fetch", e.what());
    }
    r.status = present ? "cached" : "ran";
    r.seconds = seconds_since(start);
    return r;
  }

  static double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
  }

  std::string stage_key(const std::string& name, const Spec& spec) const {
    Sha256 h;
    h.update(name);
    h.update(config_.stage_params(name).dump());
    for (const auto& in : spec.inputs) {
      h.update(in.filename().string());
      h.update(sha256_file(in));
    }
    return h.hex();
  }

  fs::path stamp_path(const std::string& name) const { return layout_.stamps() / (name + ".json"); }

  std::optional<json> valid_stamp(const std::string& name, const Spec& spec,
                                  const std::string& key) const {
    const auto path = stamp_path(name);
    if (force || !fs::exists(path)) return std::nullopt;
    json stamp;
    try {
      stamp = read_json_file(path);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (stamp.value("key", std::string{}) != key) return std::nullopt;
    const auto& outputs = stamp["outputs"];
    for (const auto& out : spec.outputs) {
      const auto file = out.filename().string();
      if (!fs::exists(out) || !outputs.contains(file) ||
          outputs[file].get<std::string>() != sha256_file(out)) {
        return std::nullopt;
      }
    }
    return stamp;
  }

  void quarantine(const std::string& name, const std::vector<fs::path>& temps) const {
    const auto stamp = std::chrono::system_clock::now().time_since_epoch().count();
    const fs::path dir = layout_.quarantine() / (name + "-" + std::to_string(stamp));
    for (const auto& t : temps) {
      if (!fs::exists(t)) continue;
      fs::create_directories(dir);
      std::error_code ec;
      fs::rename(t, dir / t.filename(), ec);
      if (ec) fs::remove(t, ec);
    }
  }

  StageReport run_stage(const std::string& name) {
    if (name == "fetch") return run_fetch();
    const auto start = std::chrono::steady_clock::now();
    const Spec spec = spec_for(name);
    for (const auto& in : spec.inputs) {
      if (!fs::exists(in)) {
        throw StageError(name, "missing input " + in.string() +
                                   " (run the producing stage first)");
      }
    }
    const auto key = stage_key(name, spec);
    if (auto stamp = valid_stamp(name, spec, key)) {
      return {name, "cached", seconds_since(start), stamp->value("counts", json::object())};
    }
    fs::remove(stamp_path(name));
    std::vector<fs::path> temps;
    for (const auto& out : spec.outputs) temps.push_back(out.string() + ".tmp");
    json counts;
    try {
      counts = spec.body(temps);
      for (const auto& t : temps) {
        if (!fs::exists(t)) throw IoError("stage produced no " + t.filename().string());
      }
    } catch (const std::exception& e) {
      quarantine(name, temps);
      throw StageError(name, e.what());
    }
    json stamp{{"key", key}, {"counts", counts}, {"outputs", json::object()}};
    for (std::size_t i = 0; i < temps.size(); ++i) {
      fs::rename(temps[i], spec.outputs[i]);
      stamp["outputs"][spec.outputs[i].filename().string()] = sha256_file(spec.outputs[i]);
    }
    write_json_file(stamp_path(name), stamp);
    stages::log_line(name + ": done");
    return {name, "ran", seconds_since(start), counts};
  }

  PipelineConfig config_;
  Layout layout_;
};

}  // namespace corpusforge::pipeline
