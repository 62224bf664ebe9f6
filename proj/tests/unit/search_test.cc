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

#include "proofsearch/search.h"

#include <gtest/gtest.h>

#include <mutex>

#include "proofsearch/errors.h"
#include "proofsearch/mini/engine.h"
#include "test_support.h"

namespace proofsearch {
namespace {

using env::EnvPool;
using env::SpawnSpec;

SearchParams params(Algorithm algo = Algorithm::kBeam, std::size_t width = 4) {
  SearchParams p;
  p.algorithm = algo;
  p.width = width;
  p.n_samples = std::max<std::size_t>(width, 8);
  return p;
}

SearchResult search(const TheoremStatement& thm, ProofStepGenerator& gen,
                    const SearchParams& p,
                    const SpawnSpec& spec = SpawnSpec::mini()) {
  auto pool = EnvPool::initialize(spec, p.pool_size, thm);
  return run_search(thm, gen, pool, p);
}

// Logs prompts in the order the search asks for them.
class LoggingGenerator : public ProofStepGenerator {
 public:
  std::vector<ScoredCandidate> generate(const Prompt& p,
                                        const GenerationRequest& r) override {
    std::lock_guard<std::mutex> lock(mu_);
    prompts.push_back(p.text);
    return inner_.generate(p, r);
  }
  std::vector<std::string> prompts;

 private:
  std::mutex mu_;
  OracleGenerator inner_;
};

class FailingGenerator : public ProofStepGenerator {
 public:
  std::vector<ScoredCandidate> generate(const Prompt&,
                                        const GenerationRequest&) override {
    throw TransportError("generator down");
  }
};

// Proposes every tactic in a fixed list regardless of state.
class FixedGenerator : public ProofStepGenerator {
 public:
  explicit FixedGenerator(std::vector<ScoredCandidate> c) : c_(std::move(c)) {}
  std::vector<ScoredCandidate> generate(const Prompt&,
                                        const GenerationRequest& r) override {
    return normalize_candidates(c_, r.n);
  }

 private:
  std::vector<ScoredCandidate> c_;
};

class CorpusSearch : public ::testing::TestWithParam<Algorithm> {};

TEST_P(CorpusSearch, ProvesEveryFixtureTheorem) {
  OracleGenerator oracle;
  for (const auto& entry : testing::fixture_corpus()) {
    const auto thm = entry.theorem.as_statement();
    const auto r = search(thm, oracle, params(GetParam()));
    ASSERT_TRUE(r.found) << thm.name;
    EXPECT_EQ(r.termination, Termination::kQed);
    ASSERT_EQ(r.proofs.size(), 1u);
    mini::MiniEnvironment fresh;
    EXPECT_TRUE(replay_verify(thm, r.proofs[0], fresh)) << thm.name;
    const auto bfs = testing::bfs_min_proof_length(mini::initial_state(thm.statement));
    ASSERT_TRUE(bfs);
    EXPECT_LE(r.proofs[0].size(), *bfs + 2) << thm.name;
    EXPECT_EQ(compute_stats(r.tree).proofs_found, 1u);
    EXPECT_EQ(r.rejected_proofs, 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(Algorithms, CorpusSearch,
                         ::testing::Values(Algorithm::kBeam,
                                           Algorithm::kBestFirst),
                         [](const auto& info) {
                           return info.param == Algorithm::kBeam ? "Beam"
                                                                 : "BestFirst";
                         });

TEST(Search, UnprovableTheoremExhausts) {
  OracleGenerator oracle;
  const TheoremStatement thm{"succ_neq", "forall n, n = S n"};
  for (auto algo : {Algorithm::kBeam, Algorithm::kBestFirst}) {
    const auto r = search(thm, oracle, params(algo));
    EXPECT_FALSE(r.found);
    EXPECT_EQ(r.termination, Termination::kExhausted);
    EXPECT_TRUE(r.proofs.empty());
    EXPECT_GE(r.tree.nodes().size(), 2u);
  }
}

TEST(Search, TinyTimeoutLeavesRootOnly) {
  OracleGenerator oracle;
  const TheoremStatement thm{"zero_add", "forall n, Z + n = n"};
  auto p = params();
  p.timeout_s = 0.001;
  const auto r = search(thm, oracle, p, SpawnSpec::parse("mini:delay-ms=50"));
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.termination, Termination::kTimeout);
  EXPECT_EQ(r.tree.nodes().size(), 1u);
  EXPECT_EQ(r.tree.edges().size(), 0u);
}

TEST(Search, NodeCapStopsSearch) {
  OracleGenerator oracle;
  const TheoremStatement thm{"zero_add_right", "forall n, m, n + (Z + m) = n + m"};
  auto p = params();
  p.max_tree_nodes = 3;
  const auto r = search(thm, oracle, p);
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.termination, Termination::kExhausted);
  EXPECT_LE(r.tree.nodes().size(), 3u);
}

TEST(Search, GeneratorErrorsAreFaults) {
  FailingGenerator gen;
  const auto r = search({"t", "forall n, n + Z = n"}, gen, params());
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.termination, Termination::kFault);
  EXPECT_EQ(r.generator_errors, 1u);
  EXPECT_NE(r.error.find("generator down"), std::string::npos);
}

TEST(Search, CollectAllKeepsSearching) {
  OracleGenerator oracle;
  const TheoremStatement thm{"refl_self", "forall n, n = n"};
  auto p = params();
  p.collect_all = true;
  const auto r = search(thm, oracle, p);
  EXPECT_TRUE(r.found);
  EXPECT_EQ(r.termination, Termination::kQed);
  ASSERT_GE(r.proofs.size(), 3u);
  EXPECT_EQ(script_text(r.proofs[0]), (std::vector<std::string>{"intro n", "refl"}));
  EXPECT_EQ(script_text(r.proofs[1]), (std::vector<std::string>{"intro n", "simp"}));
  EXPECT_EQ(r.tree.proofs().size(), r.proofs.size());
  for (const auto& proof : r.proofs) {
    mini::MiniEnvironment fresh;
    EXPECT_TRUE(replay_verify(thm, proof, fresh));
  }
}

TEST(Search, WidthOnePrunesToBestChild) {
  const TheoremStatement thm{"add_succ", "forall a, b, a + S b = S (a + b)"};
  OracleGenerator oracle;
  auto p = params(Algorithm::kBeam, 1);
  const auto r = search(thm, oracle, p);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(script_text(r.proofs[0]),
            (std::vector<std::string>{"intro a", "intro b", "simp"}));
}

TEST(Search, BestFirstExpandsInScoreOrder) {
  LoggingGenerator gen;
  const TheoremStatement thm{"zero_add_right", "forall n, m, n + (Z + m) = n + m"};
  const auto r = search(thm, gen, params(Algorithm::kBestFirst));
  ASSERT_TRUE(r.found);
  // Shortest cumulative NLL to each node in the final tree.
  std::vector<double> dist(r.tree.nodes().size(), 1e300);
  dist[0] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : r.tree.edges()) {
      if (dist[e.parent] + e.neg_log_likelihood < dist[e.child]) {
        dist[e.child] = dist[e.parent] + e.neg_log_likelihood;
        changed = true;
      }
    }
  }
  double last = -1;
  for (const auto& p : gen.prompts) {
    const auto id = r.tree.find(parse_prompt(p));
    ASSERT_TRUE(id);
    EXPECT_GE(dist[*id], last - 1e-12);
    last = dist[*id];
  }
}

TEST(Search, EachStateExpandedOnce) {
  LoggingGenerator gen;
  const TheoremStatement thm{"succ_neq", "forall n, n = S n"};
  search(thm, gen, params());
  std::set<std::string> unique(gen.prompts.begin(), gen.prompts.end());
  EXPECT_EQ(unique.size(), gen.prompts.size());
}

TEST(Search, FailedCandidatesAddNoEdges) {
  FixedGenerator gen({{Tactic("frobnicate"), 0.0}, {Tactic("intro n"), 1.0},
                      {Tactic("simp"), 2.0}});
  const auto r = search({"add_zero", "forall n, n + Z = n"}, gen, params());
  ASSERT_TRUE(r.found);
  for (const auto& e : r.tree.edges()) EXPECT_NE(e.tactic.text(), "frobnicate");
  EXPECT_EQ(r.tree.edges().size(), 2u);
}

TEST(Search, PoolSizeDoesNotChangeTheTree) {
  OracleGenerator oracle;
  for (const auto& entry : testing::fixture_corpus()) {
    const auto thm = entry.theorem.as_statement();
    auto p1 = params();
    auto p8 = params();
    p8.pool_size = 8;
    auto a = tree_to_json(search(thm, oracle, p1).tree);
    auto b = tree_to_json(search(thm, oracle, p8).tree);
    a["stats"].erase("wall_time_s");
    b["stats"].erase("wall_time_s");
    EXPECT_EQ(a, b) << thm.name;
  }
}

TEST(Search, SurvivesBackendCrash) {
  OracleGenerator oracle;
  const TheoremStatement thm{"zero_add", "forall n, Z + n = n"};
  auto p = params();
  p.pool_size = 2;
  const auto r = search(thm, oracle, p,
                        SpawnSpec::parse("mini:crash-after=2,crash-once=search-crash"));
  EXPECT_TRUE(r.found);
}

TEST(Search, ParamsValidation) {
  SearchParams p;
  EXPECT_NO_THROW(p.validate());
  p.width = 64;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.algorithm = Algorithm::kBestFirst;
  EXPECT_NO_THROW(p.validate());
  p = SearchParams{};
  p.timeout_s = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SearchParams{};
  p.n_samples = 300;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Search, PoolMustMatchTheorem) {
  OracleGenerator oracle;
  auto pool = EnvPool::initialize(SpawnSpec::mini(), 1, {"a", "Z = Z"});
  EXPECT_THROW(run_search({"b", "Z = Z"}, oracle, pool, params()),
               std::invalid_argument);
}

TEST(Search, EnumsRoundTrip) {
  for (auto t : {Termination::kQed, Termination::kTimeout,
                 Termination::kExhausted, Termination::kFault}) {
    EXPECT_EQ(parse_termination(to_string(t)), t);
  }
  EXPECT_EQ(parse_algorithm("best-first"), Algorithm::kBestFirst);
  EXPECT_EQ(parse_score_mode("per-step"), ScoreMode::kPerStep);
  EXPECT_THROW(parse_algorithm("dfs"), std::invalid_argument);
}

TEST(ReplayVerify, RejectsBadScripts) {
  mini::MiniEnvironment env;
  const TheoremStatement thm{"t", "forall n, n + Z = n"};
  EXPECT_TRUE(replay_verify(thm, make_script({"intro n", "simp"}), env));
  EXPECT_FALSE(replay_verify(thm, make_script({"intro n"}), env));
  EXPECT_FALSE(replay_verify(thm, make_script({"intro n", "refl", "simp"}), env));
  EXPECT_FALSE(replay_verify(thm, {}, env));
}

TEST(ResultJson, Fields) {
  OracleGenerator oracle;
  const auto r = search({"add_zero", "forall n, n + Z = n"}, oracle, params());
  const auto j = result_to_json(r, "trees/x.json");
  EXPECT_EQ(j["search_result"], "v1");
  EXPECT_EQ(j["prompt_format"], "v1");
  EXPECT_EQ(j["theorem_name"], "add_zero");
  EXPECT_EQ(j["found"], true);
  EXPECT_EQ(j["termination"], "qed");
  EXPECT_EQ(j["proofs"], nlohmann::json::parse(R"([["intro n","simp"]])"));
  EXPECT_EQ(j["tree"], "trees/x.json");
  EXPECT_EQ(j["stats"]["proof_length"], 2);
  EXPECT_FALSE(j.contains("error"));
}

}  // namespace
}  // namespace proofsearch
