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

#include <chrono>
#include <string>
#include <vector>

#include "corpusforge/wikitext/clean.hpp"
#include "markup_generator.hpp"

namespace cf = corpusforge;
namespace wt = corpusforge::wikitext;

using testing_support::MarkupGenerator;

TEST(Fuzz, NoMarkupResidue) {
  const auto config = wt::CleanConfig::load(cf::fs::path(CORPUSFORGE_SOURCE_DIR) / "config" /
                                            "sr-wikipedia.json");
  MarkupGenerator gen(20260101);
  const std::vector<std::string> residue{"{{", "}}", "[[", "]]", "{|", "<!--"};
  const auto start = std::chrono::steady_clock::now();
  int dirty = 0;
  std::size_t input_bytes = 0, output_bytes = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto page = gen.article();
    const auto out = wt::clean_text(page, config).text;
    input_bytes += page.size();
    output_bytes += out.size();
    for (const auto& r : residue) {
      if (out.find(r) != std::string::npos) {
        ++dirty;
        ADD_FAILURE() << "residue '" << r << "' in article " << i << "\n--- input\n"
                      << page << "\n--- output\n"
                      << out;
        break;
      }
    }
    if (dirty > 5) break;
  }
  EXPECT_EQ(dirty, 0);
  // Guard against a vacuous pass: the generator must produce real markup and
  // cleaning must leave real text.
  EXPECT_GT(input_bytes, 100000u);
  EXPECT_GT(output_bytes, 20000u);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  EXPECT_LT(took.count(), 60.0);
}
