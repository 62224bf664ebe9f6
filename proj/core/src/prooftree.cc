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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "proofsearch/env/protocol.h"
#include "proofsearch/errors.h"

namespace proofsearch {
namespace {

using json = nlohmann::json;

std::string shortest(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ProofTree::ProofTree(ProofState root) { intern(root, 0); }

NodeId ProofTree::intern(const ProofState& state, int depth) {
  const std::string key = canonical_key(state);
  auto it = by_key_.find(key);
  if (it != by_key_.end()) {
    ProofNode& n = nodes_[it->second];
    n.depth = std::min(n.depth, depth);
    return it->second;
  }
  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(ProofNode{id, state, false, depth});
  by_key_.emplace(key, id);
  return id;
}

std::optional<NodeId> ProofTree::find(const ProofState& state) const {
  return find_key(canonical_key(state));
}

std::optional<NodeId> ProofTree::find_key(const std::string& key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

NodeId ProofTree::record_edge(const ProofState& parent, const Tactic& tactic,
                              double nll, const ProofState& child) {
  const auto pid = find(parent);
  if (!pid) throw std::invalid_argument("parent state is not in the tree");
  return record_edge(*pid, tactic, nll, child);
}

NodeId ProofTree::record_edge(NodeId parent, const Tactic& tactic, double nll,
                              const ProofState& child) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
    throw std::invalid_argument("unknown parent node " +
                                std::to_string(parent));
  }
  const auto edge_key = std::make_pair(parent, tactic.text());
  auto existing = by_parent_tactic_.find(edge_key);
  if (existing != by_parent_tactic_.end()) {
    const ProofEdge& e = edges_[existing->second];
    if (canonical_key(nodes_[e.child].state) != canonical_key(child)) {
      throw std::logic_error("tactic '" + tactic.text() +
                             "' recorded with two different children");
    }
    return e.child;
  }
  const NodeId cid = intern(child, nodes_[parent].depth + 1);
  by_parent_tactic_.emplace(edge_key, edges_.size());
  edges_.push_back(ProofEdge{parent, cid, tactic, nll});
  return cid;
}

void ProofTree::add_proof(const std::vector<std::size_t>& edge_path) {
  if (edge_path.empty()) throw std::invalid_argument("empty proof path");
  NodeId at = root();
  for (std::size_t e : edge_path) {
    if (e >= edges_.size() || edges_[e].parent != at) {
      throw std::invalid_argument("proof path does not chain from the root");
    }
    at = edges_[e].child;
  }
  if (!nodes_[at].state.empty()) {
    throw std::invalid_argument("proof path does not end in QED");
  }
  if (std::find(proofs_.begin(), proofs_.end(), edge_path) != proofs_.end()) {
    return;
  }
  proofs_.push_back(edge_path);
  nodes_[root()].on_proof_path = true;
  for (std::size_t e : edge_path) nodes_[edges_[e].child].on_proof_path = true;
}

ProofScript ProofTree::proof_script(std::size_t index) const {
  ProofScript out;
  for (std::size_t e : proofs_.at(index)) out.push_back(edges_[e].tactic);
  return out;
}

std::vector<std::size_t> ProofTree::out_edges(NodeId id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].parent == id) out.push_back(i);
  }
  return out;
}

std::size_t ProofTree::expanded_nodes() const {
  std::set<NodeId> parents;
  for (const auto& e : edges_) parents.insert(e.parent);
  return parents.size();
}

TreeStats compute_stats(const ProofTree& tree) {
  TreeStats s;
  s.nodes = tree.nodes().size();
  s.edges = tree.edges().size();
  s.mean_out_degree = static_cast<double>(s.edges) /
                      static_cast<double>(std::max<std::size_t>(
                          1, tree.expanded_nodes()));
  s.proofs_found = tree.proofs().size();
  s.wall_time_s = tree.wall_time_s;
  for (const auto& p : tree.proofs()) {
    if (!s.proof_length || p.size() < *s.proof_length) s.proof_length = p.size();
  }
  return s;
}

json stats_to_json(const TreeStats& s) {
  json j = {{"nodes", s.nodes},
            {"edges", s.edges},
            {"mean_out_degree", s.mean_out_degree},
            {"proofs_found", s.proofs_found},
            {"wall_time_s", s.wall_time_s}};
  j["proof_length"] = s.proof_length ? json(*s.proof_length) : json(nullptr);
  return j;
}

TreeStats stats_from_json(const json& j) {
  TreeStats s;
  s.nodes = j.at("nodes").get<std::size_t>();
  s.edges = j.at("edges").get<std::size_t>();
  s.mean_out_degree = j.at("mean_out_degree").get<double>();
  s.proofs_found = j.at("proofs_found").get<std::size_t>();
  s.wall_time_s = j.at("wall_time_s").get<double>();
  if (j.contains("proof_length") && !j["proof_length"].is_null()) {
    s.proof_length = j["proof_length"].get<std::size_t>();
  }
  return s;
}

json tree_to_json(const ProofTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    nodes.push_back({{"id", n.id},
                     {"state", env::goals_to_json(n.state)},
                     {"on_proof_path", n.on_proof_path},
                     {"depth", n.depth}});
  }
  json edges = json::array();
  for (const auto& e : tree.edges()) {
    edges.push_back({{"parent", e.parent},
                     {"child", e.child},
                     {"tactic", e.tactic.text()},
                     {"nll", e.neg_log_likelihood}});
  }
  return {{"version", "v1"},
          {"root", tree.root()},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"stats", stats_to_json(compute_stats(tree))},
          {"proofs", tree.proofs()},
          {"metadata", tree.metadata()}};
}

ProofTree tree_from_json(const json& j) {
  try {
    if (j.at("version") != "v1") {
      throw Error("unsupported proof tree version " + j["version"].dump());
    }
    const auto& nodes = j.at("nodes");
    if (!nodes.is_array() || nodes.empty()) throw Error("tree has no nodes");
    if (j.at("root").get<NodeId>() != 0 ||
        nodes[0].at("id").get<NodeId>() != 0) {
      throw Error("root must be node 0");
    }
    std::vector<ProofState> states;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].at("id").get<std::size_t>() != i) {
        throw Error("node ids must be dense and ordered");
      }
      states.push_back(env::goals_from_json(nodes[i].at("state")));
    }
    ProofTree tree(states[0]);
    for (const auto& e : j.at("edges")) {
      const auto parent = e.at("parent").get<NodeId>();
      const auto child = e.at("child").get<std::size_t>();
      if (child >= states.size()) throw Error("edge to unknown node");
      const NodeId got = tree.record_edge(
          parent, Tactic(e.at("tactic").get<std::string>()),
          e.at("nll").get<double>(), states[child]);
      if (static_cast<std::size_t>(got) != child) {
        throw Error("edge order does not reproduce node ids");
      }
    }
    if (tree.nodes().size() != states.size()) {
      throw Error("tree has unreachable nodes");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (tree.node(static_cast<NodeId>(i)).depth !=
          nodes[i].at("depth").get<int>()) {
        throw Error("node " + std::to_string(i) + " has inconsistent depth");
      }
    }
    if (j.contains("proofs")) {
      for (const auto& p : j["proofs"]) {
        tree.add_proof(p.get<std::vector<std::size_t>>());
      }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (tree.node(static_cast<NodeId>(i)).on_proof_path !=
          nodes[i].at("on_proof_path").get<bool>()) {
        throw Error("node " + std::to_string(i) +
                    " disagrees with the recorded proofs");
      }
    }
    if (j.contains("metadata")) {
      tree.metadata() =
          j["metadata"].get<std::map<std::string, std::string>>();
    }
    if (j.contains("stats")) {
      tree.wall_time_s = j["stats"].at("wall_time_s").get<double>();
    }
    return tree;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed proof tree: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("malformed proof tree: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(std::string("malformed proof tree: ") + e.what());
  }
}

std::string tree_to_dot(const ProofTree& tree) {
  std::string out = "digraph proof_tree {\n";
  out += "  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& n : tree.nodes()) {
    const std::string label = n.state.empty() ? "QED" : canonical_key(n.state);
    out += "  n" + std::to_string(n.id) + " [label=\"" + dot_escape(label) +
           "\"" + (n.on_proof_path ? ", style=bold" : "") + "];\n";
  }
  std::set<std::size_t> proof_edges;
  for (const auto& p : tree.proofs()) proof_edges.insert(p.begin(), p.end());
  for (std::size_t i = 0; i < tree.edges().size(); ++i) {
    const auto& e = tree.edges()[i];
    char nll[64];
    std::snprintf(nll, sizeof nll, "$%.4f$", e.neg_log_likelihood);
    out += "  n" + std::to_string(e.parent) + " -> n" +
           std::to_string(e.child) + " [label=\"" +
           dot_escape(e.tactic.text()) + "\\n" + nll + "\"" +
           (proof_edges.count(i) ? ", style=bold" : "") + "];\n";
  }
  out += "}\n";
  return out;
}

StatsTable aggregate_stats(const std::vector<LabelledStats>& items,
                           const std::vector<std::string>& group_by) {
  std::map<std::vector<std::string>, std::vector<const TreeStats*>> groups;
  for (const auto& item : items) {
    std::vector<std::string> values;
    for (const auto& key : group_by) {
      auto it = item.labels.find(key);
      values.push_back(it == item.labels.end() ? "" : it->second);
    }
    groups[values].push_back(&item.stats);
  }
  StatsTable table;
  table.group_by = group_by;
  for (const auto& [values, members] : groups) {
    StatsRow row;
    for (std::size_t i = 0; i < group_by.size(); ++i) {
      row.group[group_by[i]] = values[i];
    }
    row.trees = members.size();
    double length_sum = 0.0;
    for (const TreeStats* s : members) {
      row.nodes += static_cast<double>(s->nodes);
      row.edges += static_cast<double>(s->edges);
      row.mean_out_degree += s->mean_out_degree;
      row.proofs_found += static_cast<double>(s->proofs_found);
      row.wall_time_s += s->wall_time_s;
      if (s->proof_length) {
        length_sum += static_cast<double>(*s->proof_length);
        ++row.trees_with_proof;
      }
    }
    const double n = static_cast<double>(row.trees);
    row.nodes /= n;
    row.edges /= n;
    row.mean_out_degree /= n;
    row.proofs_found /= n;
    row.wall_time_s /= n;
    if (row.trees_with_proof > 0) {
      row.proof_length = length_sum / static_cast<double>(row.trees_with_proof);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string StatsTable::to_csv() const {
  std::string out;
  for (const auto& key : group_by) out += csv_field(key) + ",";
  out +=
      "trees,nodes,edges,mean_out_degree,proofs_found,wall_time_s,"
      "proof_length\n";
  for (const auto& row : rows) {
    for (const auto& key : group_by) out += csv_field(row.group.at(key)) + ",";
    out += std::to_string(row.trees) + "," + shortest(row.nodes) + "," +
           shortest(row.edges) + "," + shortest(row.mean_out_degree) + "," +
           shortest(row.proofs_found) + "," + shortest(row.wall_time_s) + "," +
           (row.proof_length ? shortest(*row.proof_length) : "") + "\n";
  }
  return out;
}

json StatsTable::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    rows_json.push_back(
        {{"group", row.group},
         {"trees", row.trees},
         {"nodes", row.nodes},
         {"edges", row.edges},
         {"mean_out_degree", row.mean_out_degree},
         {"proofs_found", row.proofs_found},
         {"wall_time_s", row.wall_time_s},
         {"proof_length",
          row.proof_length ? json(*row.proof_length) : json(nullptr)},
         {"trees_with_proof", row.trees_with_proof}});
  }
  return {{"group_by", group_by}, {"rows", std::move(rows_json)}};
}

}  // namespace proofsearch
