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

#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "corpusforge/corpusforge.hpp"

namespace cf = corpusforge;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

void print_json(const cf::ordered_json& j) { std::cout << j.dump(2) << '\n'; }

cf::wikitext::CleanConfig clean_config(const std::string& path, const std::string& lang,
                                       const std::string& project) {
  cf::wikitext::CleanConfig c =
      path.empty() ? cf::wikitext::CleanConfig::defaults() : cf::wikitext::CleanConfig::load(path);
  if (!lang.empty()) c.language = lang;
  if (!project.empty()) {
    c.project = cf::parse_project(project);
    if (path.empty()) c.derive_section_policy();
  }
  return c;
}

std::set<std::string> split_stages(const std::string& list) {
  std::set<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

cf::stats::AxisMode parse_axis(const std::string& s) {
  return s == "union" ? cf::stats::AxisMode::kUnion : cf::stats::AxisMode::kFirst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpusforge: MediaWiki dumps to cleaned, deduplicated plain-text corpora"};
  app.require_subcommand(1);

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download a pages-articles dump");
  std::string f_lang, f_project = "wikipedia", f_version, f_dest = ".",
                      f_template = std::string(cf::kDefaultUrlTemplate);
  int f_attempts = 4;
  fetch->add_option("--lang", f_lang, "Language code")->required();
  fetch->add_option("--project", f_project, "wikipedia|wikisource|wikiquote|wikibooks|wikinews");
  fetch->add_option("--version", f_version, "Dump version, YYYYMMDD")->required();
  fetch->add_option("--dest", f_dest, "Target directory or file");
  fetch->add_option("--url-template", f_template, "Download URL template");
  fetch->add_option("--attempts", f_attempts, "Attempts before giving up")->check(CLI::PositiveNumber);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Stream a dump into raw JSONL");
  std::string i_archive, i_out, i_config, i_stats;
  std::size_t i_min_chars = 80;
  ingest->add_option("archive", i_archive, "Dump (.xml.bz2 or .xml)")->required();
  ingest->add_option("-o,--output", i_out, "Output JSONL")->required();
  ingest->add_option("--config", i_config, "Cleaning config (for redirect keywords)");
  ingest->add_option("--min-chars", i_min_chars, "Minimum raw text length")
      ->check(CLI::PositiveNumber);
  ingest->add_option("--stats", i_stats, "Write ingest counters to this JSON file");

  // clean
  auto* clean = app.add_subcommand("clean", "Convert raw wikitext to plain text");
  std::string c_in, c_out, c_config, c_lang, c_project;
  unsigned c_workers = 1;
  double c_timeout = 60.0;
  clean->add_option("input", c_in, "Raw JSONL from ingest")->required();
  clean->add_option("-o,--output", c_out, "Output JSONL")->required();
  clean->add_option("--config", c_config, "Cleaning config JSON");
  clean->add_option("--lang", c_lang, "Override config language");
  clean->add_option("--project", c_project, "Override config project");
  clean->add_option("--workers", c_workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* c_timeout_opt =
      clean->add_option("--timeout", c_timeout, "Per-article timeout in seconds")
          ->check(CLI::PositiveNumber);

  // encode
  auto* enc = app.add_subcommand("encode", "Build the vocabulary and encode article prefixes");
  std::string e_in, e_out, e_vocab = "vocab.json";
  std::uint64_t e_min_freq = 3;
  cf::encode::EncodeOptions e_opts;
  unsigned e_workers = 1;
  enc->add_option("input", e_in, "Cleaned JSONL")->required();
  enc->add_option("-o,--output", e_out, "Encoded JSONL")->required();
  enc->add_option("--vocab", e_vocab, "Vocabulary JSON output");
  enc->add_option("--min-freq", e_min_freq, "Minimum token frequency")->check(CLI::PositiveNumber);
  enc->add_option("--max-words", e_opts.max_words, "Skip longer articles")
      ->check(CLI::PositiveNumber);
  enc->add_option("--prefix", e_opts.prefix, "Leading tokens encoded")->check(CLI::PositiveNumber);
  enc->add_option("--workers", e_workers, "Worker threads")->check(CLI::PositiveNumber);

  // cluster
  auto* clu = app.add_subcommand("cluster", "Group encoded articles by category");
  std::string k_in, k_out;
  std::size_t k_max = 3000;
  clu->add_option("input", k_in, "Encoded JSONL")->required();
  clu->add_option("-o,--output", k_out, "Bucket manifest JSONL")->required();
  clu->add_option("--max-bucket", k_max, "Maximum bucket size")->check(CLI::Range(2, 1 << 30));

  // dedup
  auto* dd = app.add_subcommand("dedup", "Score buckets, find the knee and prune the corpus");
  std::string d_clean, d_encoded, d_buckets, d_out, d_manifest, d_summary, d_sigs;
  cf::dedup::DedupOptions d_opts;
  dd->add_option("clean", d_clean, "Cleaned JSONL")->required();
  dd->add_option("encoded", d_encoded, "Encoded JSONL")->required();
  dd->add_option("buckets", d_buckets, "Bucket manifest")->required();
  dd->add_option("-o,--output", d_out, "Pruned corpus JSONL")->required();
  dd->add_option("--manifest", d_manifest, "Removed articles JSONL (default <output>.removed.jsonl)");
  dd->add_option("--summary", d_summary, "Summary JSON (default <output>.summary.json)");
  dd->add_option("--signatures", d_sigs, "Also write signatures JSONL");
  dd->add_option("--perms", d_opts.permutations, "MinHash permutations")
      ->check(CLI::PositiveNumber);
  dd->add_option("--threshold", d_opts.threshold, "Pair similarity threshold (strict)");
  dd->add_option("--seed", d_opts.seed, "Permutation seed")->required();
  dd->add_option("--sensitivity", d_opts.sensitivity, "Knee sensitivity");
  dd->add_option("--workers", d_opts.workers, "Worker threads")->check(CLI::PositiveNumber);

  // stats
  auto* st = app.add_subcommand("stats", "Compare a corpus before and after filtering");
  std::string s_before, s_after, s_report, s_axis = "first";
  bool s_plain = false;
  std::size_t s_top = 100;
  st->add_option("before", s_before, "Corpus before filtering")->required();
  st->add_option("after", s_after, "Corpus after filtering")->required();
  st->add_option("--top", s_top, "Profile size")->check(CLI::Range(2, 1 << 30));
  st->add_option("--report", s_report, "Write the report JSON here");
  st->add_option("--axis", s_axis, "Reference axis")->check(CLI::IsMember({"first", "union"}));
  st->add_flag("--plain", s_plain, "Cosine of relative frequencies without z-scores");

  // delta
  auto* dl = app.add_subcommand("delta", "Cosine delta between two corpora");
  std::string l_a, l_b, l_axis = "first";
  bool l_plain = false;
  std::size_t l_top = 100;
  dl->add_option("a", l_a, "First corpus (axis source)")->required();
  dl->add_option("b", l_b, "Second corpus")->required();
  dl->add_option("--top", l_top, "Profile size")->check(CLI::Range(2, 1 << 30));
  dl->add_option("--axis", l_axis, "Reference axis")->check(CLI::IsMember({"first", "union"}));
  dl->add_flag("--plain", l_plain, "Cosine of relative frequencies without z-scores");

  // run
  auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file");
  std::string r_config, r_stages, r_workdir;
  bool r_force = false;
  int r_workers = 0;
  run->add_option("--config", r_config, "Pipeline config JSON")->required();
  run->add_option("--stages", r_stages, "Comma-separated subset of stages");
  run->add_option("--workdir", r_workdir, "Working directory (overrides config and env)");
  run->add_option("--workers", r_workers, "Override worker count")->check(CLI::PositiveNumber);
  run->add_flag("--force", r_force, "Ignore cached stage results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*fetch) {
      auto desc = cf::DumpDescriptor::make(f_lang, cf::parse_project(f_project), f_version,
                                           f_template);
      cf::FetchOptions opts;
      opts.max_attempts = f_attempts;
      std::cout << cf::fetch_dump(desc, f_dest, opts).string() << '\n';
    } else if (*ingest) {
      cf::IngestOptions opts;
      opts.min_chars = i_min_chars;
      if (!i_config.empty()) {
        opts.redirect_keywords = cf::wikitext::CleanConfig::load(i_config).tables.redirect_keywords;
      }
      auto stats = cf::stages::ingest(i_archive, i_out, opts);
      if (!i_stats.empty()) cf::write_json_file(i_stats, stats.to_json());
      print_json(stats.to_json());
    } else if (*clean) {
      auto cfg = clean_config(c_config, c_lang, c_project);
      if (!c_timeout_opt->count()) c_timeout = cfg.timeout_s;
      auto stats = cf::stages::clean(c_in, c_out, cfg, {c_workers, c_timeout, 512});
      print_json(stats.to_json());
    } else if (*enc) {
      print_json(cf::stages::encode(e_in, e_out, e_vocab, e_min_freq, e_opts, e_workers).to_json());
    } else if (*clu) {
      print_json(cf::stages::cluster(k_in, k_out, k_max).to_json());
    } else if (*dd) {
      cf::stages::DedupPaths paths{d_out, d_manifest, d_summary, d_sigs};
      if (paths.manifest.empty()) paths.manifest = d_out + ".removed.jsonl";
      if (paths.summary.empty()) paths.summary = d_out + ".summary.json";
      print_json(cf::stages::dedup(d_clean, d_encoded, d_buckets, paths, d_opts).to_json());
    } else if (*st) {
      auto report = cf::stages::stats_report(s_before, s_after, {s_top, parse_axis(s_axis), s_plain});
      if (!s_report.empty()) cf::write_json_file(s_report, report);
      std::cout << report["table"].get<std::string>();
      if (!report["cosine_delta"].is_null()) {
        std::cout << "Cosine delta: " << report["cosine_delta"].get<double>() << '\n';
      }
      for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
    } else if (*dl) {
      const auto p = cf::stats::profile(fs::path(l_a), l_top);
      const auto q = cf::stats::profile(fs::path(l_b), l_top);
      std::cout << cf::stats::cosine_delta(p, q, parse_axis(l_axis), l_plain) << '\n';
    } else if (*run) {
      auto cfg = cf::pipeline::PipelineConfig::load(r_config);
      if (!r_workdir.empty()) cfg.workdir = r_workdir;
      if (r_workers > 0) cfg.workers = static_cast<unsigned>(r_workers);
      cf::pipeline::Runner runner(std::move(cfg));
      runner.force = r_force;
      auto summary = runner.run(split_stages(r_stages));
      for (const auto& s : summary.stages) std::cout << s.name << ": " << s.status << '\n';
    }
  } catch (const cf::ConfigError& e) {
    std::cerr << "corpusforge: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "corpusforge: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
