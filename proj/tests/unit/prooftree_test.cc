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

#include "proofsearch/prooftree.h"

#include <gtest/gtest.h>

#include "proofsearch/errors.h"
#include "proofsearch/json_io.h"
#include "test_support.h"

namespace proofsearch {
namespace {

ProofState one(const std::string& goal, std::vector<std::string> hyps = {}) {
  return ProofState({Obligation(goal, std::move(hyps))});
}

TEST(ProofTree, HandBuiltStats) {
  const ProofTree tree = testing::hand_built_tree();
  const TreeStats s = compute_stats(tree);
  EXPECT_EQ(s.nodes, 5u);
  EXPECT_EQ(s.edges, 6u);
  EXPECT_EQ(tree.expanded_nodes(), 3u);
  EXPECT_EQ(s.mean_out_degree, 2.0);
  EXPECT_EQ(s.proofs_found, 1u);
  EXPECT_EQ(s.proof_length, 2u);
}

TEST(ProofTree, RootOnlyTree) {
  const ProofTree tree(one("a = a"));
  const TreeStats s = compute_stats(tree);
  EXPECT_EQ(s.nodes, 1u);
  EXPECT_EQ(s.edges, 0u);
  EXPECT_EQ(s.mean_out_degree, 0.0);
  EXPECT_FALSE(s.proof_length);
}

TEST(ProofTree, DedupsNodesAndEdges) {
  ProofTree tree(one("r"));
  const NodeId a = tree.record_edge(0, Tactic("t1"), 0.5, one("a"));
  EXPECT_EQ(tree.record_edge(0, Tactic("t1"), 0.9, one("a")), a);
  EXPECT_EQ(tree.edges().size(), 1u);
  EXPECT_EQ(tree.edges()[0].neg_log_likelihood, 0.5);
  // Merge: another tactic reaching the same state.
  EXPECT_EQ(tree.record_edge(one("r"), Tactic("t2"), 1.0, one("a")), a);
  EXPECT_EQ(tree.nodes().size(), 2u);
  EXPECT_EQ(tree.edges().size(), 2u);
  EXPECT_THROW(tree.record_edge(0, Tactic("t1"), 0.5, one("b")),
               std::logic_error);
  EXPECT_THROW(tree.record_edge(one("zzz"), Tactic("t"), 0.1, one("b")),
               std::invalid_argument);
  EXPECT_THROW(tree.record_edge(7, Tactic("t"), 0.1, one("b")),
               std::invalid_argument);
}

TEST(ProofTree, DepthIsShortestDistance) {
  ProofTree tree(one("r"));
  const NodeId a = tree.record_edge(0, Tactic("x"), 0, one("a"));
  const NodeId b = tree.record_edge(a, Tactic("x"), 0, one("b"));
  EXPECT_EQ(tree.node(b).depth, 2);
  tree.record_edge(0, Tactic("y"), 0, one("b"));
  EXPECT_EQ(tree.node(b).depth, 1);
}

TEST(ProofTree, AddProofValidatesChain) {
  ProofTree tree = testing::hand_built_tree();
  EXPECT_THROW(tree.add_proof({}), std::invalid_argument);
  EXPECT_THROW(tree.add_proof({0}), std::invalid_argument);
  EXPECT_THROW(tree.add_proof({1, 3}), std::invalid_argument);
  EXPECT_THROW(tree.add_proof({99}), std::invalid_argument);
  tree.add_proof({0, 3});
  EXPECT_EQ(tree.proofs().size(), 1u);
  tree.add_proof({1, 4});
  EXPECT_EQ(tree.proofs().size(), 2u);
  EXPECT_EQ(script_text(tree.proof_script(1)),
            (std::vector<std::string>{"intro m", "simp"}));
  EXPECT_TRUE(tree.node(2).on_proof_path);
  EXPECT_FALSE(tree.node(3).on_proof_path);
}

TEST(ProofTree, OutEdgesInInsertionOrder) {
  const ProofTree tree = testing::hand_built_tree();
  EXPECT_EQ(tree.out_edges(1), (std::vector<std::size_t>{2, 3}));
  EXPECT_TRUE(tree.out_edges(4).empty());
}

TEST(ProofTree, JsonRoundTrip) {
  const ProofTree tree = testing::hand_built_tree();
  const auto j = tree_to_json(tree);
  const ProofTree back = tree_from_json(j);
  EXPECT_EQ(tree_to_json(back), j);
  EXPECT_EQ(back.metadata().at("model"), "oracle");
  EXPECT_EQ(compute_stats(back), compute_stats(tree));
}

TEST(ProofTree, JsonSchemaViolations) {
  auto j = tree_to_json(testing::hand_built_tree());
  auto bad_version = j;
  bad_version["version"] = "v0";
  EXPECT_THROW(tree_from_json(bad_version), Error);
  auto bad_edge = j;
  bad_edge["edges"][0]["child"] = 42;
  EXPECT_THROW(tree_from_json(bad_edge), Error);
  auto bad_flag = j;
  bad_flag["nodes"][3]["on_proof_path"] = true;
  EXPECT_THROW(tree_from_json(bad_flag), Error);
  EXPECT_THROW(tree_from_json(nlohmann::json::array()), Error);
}

TEST(ProofTree, GoldenFiles) {
  const ProofTree tree = testing::hand_built_tree();
  EXPECT_EQ(tree_to_dot(tree),
            testing::read_file(testing::golden_dir() / "tree.dot"));
  EXPECT_EQ(tree_to_json(tree).dump(2) + "\n",
            testing::read_file(testing::golden_dir() / "tree.json"));
}

TEST(ProofTree, DotEscapesLabels) {
  ProofTree tree(one("a \"quoted\" = b\\c"));
  tree.record_edge(0, Tactic("rw \"h\""), 0.5, ProofState::qed());
  const std::string dot = tree_to_dot(tree);
  EXPECT_NE(dot.find("a \\\"quoted\\\" = b\\\\c"), std::string::npos);
  EXPECT_NE(dot.find("rw \\\"h\\\"\\n$0.5000$"), std::string::npos);
}

TEST(StatsJson, RoundTrip) {
  TreeStats s{.nodes = 4, .edges = 3, .mean_out_degree = 1.5,
              .proofs_found = 1, .wall_time_s = 0.25, .proof_length = 2};
  EXPECT_EQ(stats_from_json(stats_to_json(s)), s);
  s.proof_length.reset();
  EXPECT_EQ(stats_from_json(stats_to_json(s)), s);
}

LabelledStats item(const std::string& model, const std::string& mix,
                   std::size_t nodes, std::size_t edges, double degree,
                   std::size_t proofs, double wall,
                   std::optional<std::size_t> len) {
  return {{{"model", model}, {"data_mix", mix}},
          {nodes, edges, degree, proofs, wall, len}};
}

// Means frozen from an independent spreadsheet computation.
TEST(AggregateStats, MatchesSpreadsheetOracle) {
  const std::vector<LabelledStats> items = {
      item("A", "x", 10, 12, 1.5, 1, 0.25, 3),
      item("A", "x", 14, 20, 2.25, 0, 0.5, std::nullopt),
      item("A", "x", 7, 6, 1.2, 2, 0.125, 2),
      item("A", "y", 5, 4, 1.0, 1, 0.1, 4),
      item("B", "x", 100, 180, 2.5, 0, 9.75, std::nullopt),
      item("B", "x", 51, 60, 1.875, 1, 3.3, 5)};
  const StatsTable t = aggregate_stats(items, {"model", "data_mix"});
  ASSERT_EQ(t.rows.size(), 3u);
  const auto& ax = t.rows[0];
  EXPECT_EQ(ax.group.at("model"), "A");
  EXPECT_EQ(ax.group.at("data_mix"), "x");
  EXPECT_EQ(ax.trees, 3u);
  EXPECT_NEAR(ax.nodes, 10.333333333333334, 1e-9);
  EXPECT_NEAR(ax.edges, 12.666666666666666, 1e-9);
  EXPECT_NEAR(ax.mean_out_degree, 1.6500000000000001, 1e-9);
  EXPECT_NEAR(ax.proofs_found, 1.0, 1e-9);
  EXPECT_NEAR(ax.wall_time_s, 0.2916666666666667, 1e-9);
  ASSERT_TRUE(ax.proof_length);
  EXPECT_NEAR(*ax.proof_length, 2.5, 1e-9);
  EXPECT_EQ(ax.trees_with_proof, 2u);
  EXPECT_EQ(t.rows[1].group.at("data_mix"), "y");
  const auto& bx = t.rows[2];
  EXPECT_NEAR(bx.nodes, 75.5, 1e-9);
  EXPECT_NEAR(bx.edges, 120.0, 1e-9);
  EXPECT_NEAR(bx.mean_out_degree, 2.1875, 1e-9);
  EXPECT_NEAR(bx.wall_time_s, 6.525, 1e-9);
  EXPECT_NEAR(*bx.proof_length, 5.0, 1e-9);

  const StatsTable by_model = aggregate_stats(items, {"model"});
  ASSERT_EQ(by_model.rows.size(), 2u);
  EXPECT_NEAR(by_model.rows[0].nodes, 9.0, 1e-9);
  EXPECT_NEAR(by_model.rows[0].mean_out_degree, 1.4875, 1e-9);
  EXPECT_NEAR(by_model.rows[0].wall_time_s, 0.24375, 1e-9);
  EXPECT_NEAR(*by_model.rows[0].proof_length, 3.0, 1e-9);
}

TEST(AggregateStats, CsvAndJson) {
  const StatsTable t = aggregate_stats(
      {item("A", "x", 4, 3, 1.5, 1, 0.5, 2), item("", "", 1, 0, 0, 0, 0, std::nullopt)},
      {"model"});
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "model,trees,nodes,edges,mean_out_degree,proofs_found,wall_time_s,"
            "proof_length");
  EXPECT_NE(csv.find("\nA,1,4,3,1.5,1,0.5,2\n"), std::string::npos);
  EXPECT_NE(csv.find("\n,1,1,0,0,0,0,\n"), std::string::npos);
  EXPECT_EQ(t.to_json()["rows"].size(), 2u);
}

}  // namespace
}  // namespace proofsearch
