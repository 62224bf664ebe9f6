/* Copyright 2026 The ProofSearch Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "proofsearch/config.h"

#include <gtest/gtest.h>

#include <cstdlib>

#include "proofsearch/errors.h"
#include "proofsearch/json_io.h"
#include "test_support.h"

namespace proofsearch {
namespace {

TEST(RunConfig, Defaults) {
  const RunConfig c;
  const SearchParams p = c.search_params();
  EXPECT_EQ(p.algorithm, Algorithm::kBeam);
  EXPECT_EQ(p.width, 32u);
  EXPECT_EQ(p.n_samples, 32u);
  EXPECT_DOUBLE_EQ(p.timeout_s, 600.0);
  EXPECT_DOUBLE_EQ(p.temperature, 0.75);
  EXPECT_EQ(c.effective_max_in_flight(), 1u);
}

TEST(RunConfig, MergeText) {
  RunConfig c;
  c.merge_text(
      "# comment\n"
      "algorithm = best-first\n"
      "width = 4\n"
      "\n"
      "timeout=1200\n"
      "pool_size = 8\n"
      "per_tactic_timeout = 2.5\n"
      "collect_all = true\n"
      "generator = replay:/tmp/r.jsonl\n"
      "backend = mini:delay-ms=1\n"
      "split_seed = 9\n"
      "val_frac = 0.25\n",
      "test");
  const SearchParams p = c.search_params();
  EXPECT_EQ(p.algorithm, Algorithm::kBestFirst);
  EXPECT_EQ(p.width, 4u);
  EXPECT_EQ(p.n_samples, 4u);
  EXPECT_DOUBLE_EQ(p.timeout_s, 1200.0);
  EXPECT_EQ(p.per_tactic_timeout, std::chrono::milliseconds(2500));
  EXPECT_TRUE(p.collect_all);
  EXPECT_EQ(c.generator, "replay:/tmp/r.jsonl");
  EXPECT_EQ(c.effective_max_in_flight(), 8u);
  EXPECT_EQ(c.split.seed, 9u);
  EXPECT_DOUBLE_EQ(c.split.val_fraction, 0.25);
  c.set("n_samples", "16");
  EXPECT_EQ(c.search_params().n_samples, 16u);
}

TEST(RunConfig, ErrorsNameTheLine) {
  RunConfig c;
  try {
    c.merge_text("width = 4\nwidht = 5\n", "cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("widht"), std::string::npos);
  }
  EXPECT_THROW(c.set("width", "-1"), ConfigError);
  EXPECT_THROW(c.set("width", "4x"), ConfigError);
  EXPECT_THROW(c.set("timeout", "soon"), ConfigError);
  EXPECT_THROW(c.set("algorithm", "dfs"), ConfigError);
  EXPECT_THROW(c.set("generator", "gpt"), ConfigError);
  EXPECT_THROW(c.set("collect_all", "maybe"), ConfigError);
  EXPECT_THROW(c.merge_text("no equals sign\n", "cfg"), ConfigError);
}

TEST(RunConfig, LoadFromFileOrEnvironment) {
  testing::TempDir dir;
  write_text_file(dir / "a.cfg", "width = 7\n");
  write_text_file(dir / "b.cfg", "width = 9\n");
  EXPECT_EQ(RunConfig::load(dir / "a.cfg").search.width, 7u);
  ::setenv("PROOFSEARCH_CONFIG", (dir / "b.cfg").c_str(), 1);
  EXPECT_EQ(RunConfig::load(std::nullopt).search.width, 9u);
  EXPECT_EQ(RunConfig::load(dir / "a.cfg").search.width, 7u);
  ::unsetenv("PROOFSEARCH_CONFIG");
  EXPECT_EQ(RunConfig::load(std::nullopt).search.width, 32u);
  EXPECT_THROW(RunConfig::load(dir / "missing.cfg"), ConfigError);
}

}  // namespace
}  // namespace proofsearch
