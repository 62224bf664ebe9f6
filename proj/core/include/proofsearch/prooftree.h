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

#ifndef PROOFSEARCH_PROOFTREE_H_
#define PROOFSEARCH_PROOFTREE_H_

// The search graph: nodes are distinct proof states (by canonical key) and
// edges are tactic applications that compiled. Parallel edges and merges are
// allowed, so this is a DAG rather than a tree.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "proofsearch/kernel.h"

namespace proofsearch {

using NodeId = int;

struct ProofNode {
  NodeId id = 0;
  ProofState state;
  bool on_proof_path = false;
  int depth = 0;
};

struct ProofEdge {
  NodeId parent = 0;
  NodeId child = 0;
  Tactic tactic;
  double neg_log_likelihood = 0.0;
};

struct TreeStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  // edges / max(1, nodes with at least one outgoing edge)
  double mean_out_degree = 0.0;
  std::size_t proofs_found = 0;
  double wall_time_s = 0.0;
  std::optional<std::size_t> proof_length;

  bool operator==(const TreeStats&) const = default;
};

class ProofTree {
 public:
  explicit ProofTree(ProofState root);

  NodeId root() const { return 0; }
  const std::vector<ProofNode>& nodes() const { return nodes_; }
  const std::vector<ProofEdge>& edges() const { return edges_; }
  const ProofNode& node(NodeId id) const { return nodes_.at(id); }

  std::optional<NodeId> find(const ProofState& state) const;
  std::optional<NodeId> find_key(const std::string& key) const;

  // Adds the child (deduplicated by canonical key) and the edge unless
  // (parent, tactic) is already recorded. Returns the child's id. Throws
  // std::invalid_argument if the parent is unknown and std::logic_error if
  // (parent, tactic) was recorded with a different child.
  NodeId record_edge(const ProofState& parent, const Tactic& tactic,
                     double nll, const ProofState& child);
  NodeId record_edge(NodeId parent, const Tactic& tactic, double nll,
                     const ProofState& child);

  // Registers a root-to-QED path given as edge indices and flags its nodes.
  // Throws std::invalid_argument if the edges do not chain from the root to
  // a QED node. Duplicate proofs are ignored.
  void add_proof(const std::vector<std::size_t>& edge_path);
  const std::vector<std::vector<std::size_t>>& proofs() const {
    return proofs_;
  }
  ProofScript proof_script(std::size_t index) const;

  // Indices of edges leaving `id`, in insertion order.
  std::vector<std::size_t> out_edges(NodeId id) const;
  std::size_t expanded_nodes() const;

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }
  double wall_time_s = 0.0;

 private:
  NodeId intern(const ProofState& state, int depth);

  std::vector<ProofNode> nodes_;
  std::vector<ProofEdge> edges_;
  std::unordered_map<std::string, NodeId> by_key_;
  std::map<std::pair<NodeId, std::string>, std::size_t> by_parent_tactic_;
  std::vector<std::vector<std::size_t>> proofs_;
  std::map<std::string, std::string> metadata_;
};

TreeStats compute_stats(const ProofTree& tree);

nlohmann::json stats_to_json(const TreeStats& stats);
TreeStats stats_from_json(const nlohmann::json& j);

// {"version":"v1","root","nodes","edges","stats","proofs","metadata"}
nlohmann::json tree_to_json(const ProofTree& tree);
// Throws Error on schema violations.
ProofTree tree_from_json(const nlohmann::json& j);

// Edges are labelled "tactic\n$NLL$"; proof-path nodes and edges are bold.
std::string tree_to_dot(const ProofTree& tree);

struct StatsRow {
  std::map<std::string, std::string> group;
  std::size_t trees = 0;
  double nodes = 0.0;
  double edges = 0.0;
  double mean_out_degree = 0.0;
  double proofs_found = 0.0;
  double wall_time_s = 0.0;
  // Mean over trees with a proof; absent if none has one.
  std::optional<double> proof_length;
  std::size_t trees_with_proof = 0;
};

struct StatsTable {
  std::vector<std::string> group_by;
  std::vector<StatsRow> rows;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct LabelledStats {
  std::map<std::string, std::string> labels;
  TreeStats stats;
};

// Arithmetic means per distinct combination of `group_by` label values,
// rows sorted by those values. Missing labels group as "".
StatsTable aggregate_stats(const std::vector<LabelledStats>& items,
                           const std::vector<std::string>& group_by);

}  // namespace proofsearch

#endif  // PROOFSEARCH_PROOFTREE_H_
