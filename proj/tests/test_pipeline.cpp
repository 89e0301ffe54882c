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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpusforge/pipeline.hpp"
#include "test_support.hpp"

namespace cf = corpusforge;
namespace pl = corpusforge::pipeline;
using testing_support::fixture;
using testing_support::read_file;
using testing_support::TempDir;
using testing_support::write_file;

namespace {

const cf::fs::path kSource{CORPUSFORGE_SOURCE_DIR};

cf::json base_config(const TempDir& dir, unsigned workers = 2) {
  return {{"include", {(kSource / "config" / "sr-wikipedia.json").string()}},
          {"archive", fixture("mini_dump.xml.bz2").string()},
          {"workdir", (dir / "work").string()},
          {"workers", workers},
          {"encode", {{"min_freq", 1}}},
          {"dedup", {{"seed", 42}}},
          {"stats", {{"top", 20}}}};
}

cf::fs::path write_config(const TempDir& dir, const cf::json& j, const std::string& name = "p.json") {
  const auto path = dir / name;
  write_file(path, j.dump(2));
  return path;
}

pl::PipelineConfig load(const TempDir& dir, const cf::json& j) {
  return pl::PipelineConfig::load(write_config(dir, j));
}

std::map<std::string, std::string> statuses(const pl::RunSummary& s) {
  std::map<std::string, std::string> out;
  for (const auto& st : s.stages) out[st.name] = st.status;
  return out;
}

std::size_t line_count(const cf::fs::path& p) {
  const auto text = read_file(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CORPUSFORGE_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

class EnvGuard {
 public:
  EnvGuard(const char* name, const std::string& value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    ::setenv(name, value.c_str(), 1);
  }
  ~EnvGuard() {
    if (old_) {
      ::setenv(name_, old_->c_str(), 1);
    } else {
      ::unsetenv(name_);
    }
  }

 private:
  const char* name_;
  std::optional<std::string> old_;
};

}  // namespace

TEST(PipelineConfig, DefaultsAndRequiredSeed) {
  TempDir dir;
  auto c = load(dir, base_config(dir));
  EXPECT_EQ(c.min_freq, 1u);
  EXPECT_EQ(c.encode.max_words, 2000u);
  EXPECT_EQ(c.encode.prefix, 500u);
  EXPECT_EQ(c.max_bucket, 3000u);
  EXPECT_EQ(c.dedup.permutations, 128u);
  EXPECT_DOUBLE_EQ(c.dedup.threshold, 0.5);
  EXPECT_EQ(c.dedup.seed, 42u);
  EXPECT_EQ(c.clean.language, "sr");
  auto no_seed = base_config(dir);
  no_seed["dedup"].erase("seed");
  EXPECT_THROW(load(dir, no_seed), cf::ConfigError);
  auto bad = base_config(dir);
  bad["encode"]["prefix"] = 0;
  EXPECT_THROW(load(dir, bad), cf::ConfigError);
}

TEST(PipelineConfig, ShippedExampleLoads) {
  auto c = pl::PipelineConfig::load(kSource / "config" / "pipeline-sr.json");
  EXPECT_EQ(c.descriptor.database(), "srwiki");
  EXPECT_EQ(c.dedup.seed, 42u);
}

TEST(PipelineConfig, EnvironmentOverridesWorkdir) {
  TempDir dir;
  EnvGuard env("CORPUSFORGE_WORKDIR", (dir / "elsewhere").string());
  EXPECT_EQ(load(dir, base_config(dir)).workdir, dir / "elsewhere");
}

TEST(Pipeline, FreshRunThenCached) {
  TempDir dir;
  pl::Runner runner(load(dir, base_config(dir)));
  auto first = runner.run();
  const auto s1 = statuses(first);
  EXPECT_EQ(s1.at("fetch"), "skipped");
  for (const char* name : {"ingest", "clean", "encode", "cluster", "dedup", "stats"}) {
    EXPECT_EQ(s1.at(name), "ran") << name;
  }
  const auto& l = runner.layout();
  EXPECT_TRUE(cf::fs::exists(l.corpus()));
  EXPECT_TRUE(cf::fs::exists(l.report()));
  EXPECT_TRUE(cf::fs::exists(l.summary()));
  EXPECT_EQ(line_count(l.raw()), 10u);
  EXPECT_EQ(line_count(l.corpus()) + line_count(l.removed()), line_count(l.clean()));
  const auto corpus = read_file(l.corpus());

  pl::Runner again(load(dir, base_config(dir)));
  const auto s2 = statuses(again.run());
  for (const char* name : {"ingest", "clean", "encode", "cluster", "dedup", "stats"}) {
    EXPECT_EQ(s2.at(name), "cached") << name;
  }
  EXPECT_EQ(read_file(l.corpus()), corpus);
  auto summary = cf::read_json_file(l.summary());
  EXPECT_EQ(summary["stages"].size(), 7u);
}

TEST(Pipeline, StageSelection) {
  TempDir dir;
  pl::Runner runner(load(dir, base_config(dir)));
  runner.run({"ingest"});
  auto summary = runner.run({"clean", "encode"});
  ASSERT_EQ(summary.stages.size(), 2u);
  EXPECT_EQ(summary.stages[0].name, "clean");
  EXPECT_EQ(summary.stages[0].status, "ran");
  EXPECT_EQ(summary.stages[1].name, "encode");
  EXPECT_EQ(summary.stages[1].status, "ran");
  EXPECT_TRUE(cf::fs::exists(runner.layout().encoded()));
  EXPECT_FALSE(cf::fs::exists(runner.layout().buckets()));
  EXPECT_THROW(runner.run({"bogus"}), cf::ConfigError);
}

TEST(Pipeline, DeletedIntermediateReproducedIdentically) {
  TempDir dir;
  pl::Runner runner(load(dir, base_config(dir)));
  runner.run();
  const auto& l = runner.layout();
  const auto encoded = read_file(l.encoded());
  cf::fs::remove(l.encoded());
  const auto s = statuses(runner.run());
  EXPECT_EQ(s.at("clean"), "cached");
  EXPECT_EQ(s.at("encode"), "ran");
  EXPECT_EQ(read_file(l.encoded()), encoded);
  // Downstream inputs hash the same, so later stages stay cached.
  EXPECT_EQ(s.at("cluster"), "cached");
  EXPECT_EQ(s.at("dedup"), "cached");
}

TEST(Pipeline, ParameterChangeInvalidatesOnlyAffectedStages) {
  TempDir dir;
  pl::Runner(load(dir, base_config(dir))).run();
  auto changed = base_config(dir);
  changed["dedup"]["seed"] = 7;
  const auto s = statuses(pl::Runner(load(dir, changed)).run());
  EXPECT_EQ(s.at("cluster"), "cached");
  EXPECT_EQ(s.at("dedup"), "ran");
}

TEST(Pipeline, WorkerCountDoesNotChangeOutput) {
  TempDir a, b;
  pl::Runner one(load(a, base_config(a, 1)));
  pl::Runner four(load(b, base_config(b, 4)));
  one.run();
  four.run();
  EXPECT_EQ(read_file(one.layout().corpus()), read_file(four.layout().corpus()));
  EXPECT_EQ(read_file(one.layout().encoded()), read_file(four.layout().encoded()));
}

TEST(Pipeline, MissingInputNamesStage) {
  TempDir dir;
  pl::Runner runner(load(dir, base_config(dir)));
  try {
    runner.run({"encode"});
    FAIL() << "expected StageError";
  } catch (const cf::StageError& e) {
    EXPECT_EQ(e.stage(), "encode");
  }
}

TEST(Pipeline, FailedStageIsQuarantined) {
  TempDir dir;
  pl::Runner runner(load(dir, base_config(dir)));
  runner.run({"ingest"});
  const auto& l = runner.layout();
  write_file(l.raw(), read_file(l.raw()) + "{not json\n");
  try {
    runner.run({"clean"});
    FAIL() << "expected StageError";
  } catch (const cf::StageError& e) {
    EXPECT_EQ(e.stage(), "clean");
  }
  EXPECT_FALSE(cf::fs::exists(l.clean()));
  EXPECT_FALSE(cf::fs::exists(l.clean().string() + ".tmp"));
  EXPECT_FALSE(cf::fs::exists(l.stamps() / "clean.json"));
  ASSERT_TRUE(cf::fs::exists(l.quarantine()));
  EXPECT_FALSE(cf::fs::is_empty(l.quarantine()));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto good = write_config(dir, base_config(dir), "good.json");
  EXPECT_EQ(run_cli("run --config " + good.string()), 0);
  EXPECT_EQ(run_cli("run --config " + good.string() + " --stages clean"), 0);

  auto no_seed = base_config(dir);
  no_seed["dedup"] = cf::json::object();
  EXPECT_EQ(run_cli("run --config " + write_config(dir, no_seed, "bad.json").string()), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "absent.json").string()), 2);
  EXPECT_EQ(run_cli("run --bogus-flag"), 2);

  TempDir empty;
  EXPECT_EQ(run_cli("run --config " + good.string() + " --workdir " + (empty / "w").string() +
                    " --stages encode"),
            3);
}

TEST(Cli, StagesByHand) {
  TempDir dir;
  const auto raw = dir / "raw.jsonl";
  const auto cfg = (kSource / "config" / "sr-wikipedia.json").string();
  ASSERT_EQ(run_cli("ingest " + fixture("mini_dump.xml.bz2").string() + " -o " + raw.string() +
                    " --config " + cfg),
            0);
  ASSERT_EQ(run_cli("clean " + raw.string() + " -o " + (dir / "clean.jsonl").string() +
                    " --config " + cfg),
            0);
  ASSERT_EQ(run_cli("encode " + (dir / "clean.jsonl").string() + " -o " +
                    (dir / "enc.jsonl").string() + " --vocab " + (dir / "vocab.json").string() +
                    " --min-freq 1"),
            0);
  ASSERT_EQ(run_cli("cluster " + (dir / "enc.jsonl").string() + " -o " +
                    (dir / "b.jsonl").string()),
            0);
  EXPECT_EQ(run_cli("dedup " + (dir / "clean.jsonl").string() + " " +
                    (dir / "enc.jsonl").string() + " " + (dir / "b.jsonl").string() + " -o " +
                    (dir / "corpus.jsonl").string()),
            2);  // --seed is mandatory
  ASSERT_EQ(run_cli("dedup " + (dir / "clean.jsonl").string() + " " +
                    (dir / "enc.jsonl").string() + " " + (dir / "b.jsonl").string() + " -o " +
                    (dir / "corpus.jsonl").string() + " --seed 42"),
            0);
  EXPECT_EQ(run_cli("stats " + (dir / "clean.jsonl").string() + " " +
                    (dir / "corpus.jsonl").string() + " --top 20 --report " +
                    (dir / "report.json").string()),
            0);
  EXPECT_TRUE(cf::fs::exists(dir / "report.json"));
  EXPECT_EQ(run_cli("delta " + (dir / "clean.jsonl").string() + " " +
                    (dir / "corpus.jsonl").string() + " --top 20"),
            0);
}
