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

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "proofsearch/errors.h"

namespace proofsearch {
namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

class Searcher {
 public:
  Searcher(const TheoremStatement& theorem, ProofStepGenerator& generator,
           env::EnvPool& pool, const SearchParams& params)
      : theorem_(theorem),
        generator_(generator),
        pool_(pool),
        params_(params),
        start_(Clock::now()),
        deadline_(start_ + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(params.timeout_s))),
        result_(theorem.name, ProofTree(pool.initial_state())) {
    info_.push_back({0.0, {}, false});
  }

  SearchResult beam() {
    std::vector<NodeId> frontier{result_.tree.root()};
    while (!frontier.empty() && !stop_) {
      std::vector<NodeId> successors;
      std::unordered_set<NodeId> seen;
      for (NodeId id : frontier) {
        if (past_deadline()) {
          stop_ = Termination::kTimeout;
          break;
        }
        for (NodeId kid : expand(id)) {
          if (seen.insert(kid).second) successors.push_back(kid);
        }
        if (stop_) break;
        if (result_.found && !params_.collect_all) {
          stop_ = Termination::kQed;
          break;
        }
      }
      if (stop_) break;
      std::erase_if(successors, [&](NodeId n) { return info_[n].expanded; });
      std::sort(successors.begin(), successors.end(),
                [&](NodeId a, NodeId b) { return ranks_before(a, b); });
      if (successors.size() > params_.width) successors.resize(params_.width);
      frontier = std::move(successors);
      dispose_except(frontier);
    }
    return finish();
  }

  SearchResult best_first() {
    using Entry = std::tuple<double, std::string, NodeId>;
    std::set<Entry> open;
    open.insert({0.0, key_of(result_.tree.root()), result_.tree.root()});
    while (!open.empty() && !stop_) {
      if (past_deadline()) {
        stop_ = Termination::kTimeout;
        break;
      }
      const auto [score, key, id] = *open.begin();
      open.erase(open.begin());
      if (info_[id].expanded || info_[id].score != score) continue;
      for (NodeId kid : expand(id)) {
        open.insert({info_[kid].score, key_of(kid), kid});
      }
      if (stop_) break;
      if (result_.found && !params_.collect_all) {
        stop_ = Termination::kQed;
        break;
      }
      std::vector<NodeId> keep;
      for (const auto& [s, k, n] : open) {
        if (!info_[n].expanded && info_[n].score == s) keep.push_back(n);
      }
      dispose_except(keep);
    }
    return finish();
  }

 private:
  struct NodeInfo {
    double score = 0.0;
    std::vector<std::size_t> edge_path;
    bool expanded = false;
  };

  bool past_deadline() const { return Clock::now() >= deadline_; }

  const std::string& key_of(NodeId id) {
    auto it = keys_.find(id);
    if (it == keys_.end()) {
      it = keys_.emplace(id, canonical_key(result_.tree.node(id).state)).first;
    }
    return it->second;
  }

  bool ranks_before(NodeId a, NodeId b) {
    if (info_[a].score != info_[b].score) {
      return info_[a].score < info_[b].score;
    }
    return key_of(a) < key_of(b);
  }

  env::StatePath path_to(NodeId id) {
    env::StatePath path;
    for (std::size_t e : info_[id].edge_path) {
      const ProofEdge& edge = result_.tree.edges()[e];
      path.steps.push_back({edge.tactic, key_of(edge.child)});
    }
    return path;
  }

  void dispose_except(const std::vector<NodeId>& live) {
    std::unordered_set<std::string> keep;
    keep.insert(key_of(result_.tree.root()));
    for (NodeId n : live) keep.insert(key_of(n));
    pool_.dispose_states(keep);
  }

  // Expands `id` once. Returns unexpanded, non-QED children that are new or
  // whose score improved.
  std::vector<NodeId> expand(NodeId id) {
    info_[id].expanded = true;
    const ProofState state = result_.tree.node(id).state;
    std::vector<ScoredCandidate> candidates;
    try {
      const Prompt prompt = format_prompt(state, params_.prompt_chars);
      GenerationRequest request;
      request.n = params_.n_samples;
      request.temperature = params_.temperature;
      request.max_new_chars = params_.max_new_chars;
      candidates = generator_.generate(prompt, request);
    } catch (const TransportError& e) {
      ++result_.generator_errors;
      result_.error = e.what();
      return {};
    } catch (const Error& e) {
      ++result_.generator_errors;
      result_.error = e.what();
      return {};
    }
    if (candidates.empty()) return {};

    std::vector<Tactic> tactics;
    tactics.reserve(candidates.size());
    for (const auto& c : candidates) tactics.push_back(c.tactic);

    std::vector<env::Execution> results;
    try {
      const auto sub = pool_.ensure(
          state, std::min(params_.pool_size, tactics.size()), path_to(id));
      if (sub.empty()) {
        throw PoolFault("no instance can reach the state");
      }
      const auto remaining = std::chrono::duration_cast<
          std::chrono::milliseconds>(deadline_ - Clock::now());
      if (remaining.count() <= 0) {
        stop_ = Termination::kTimeout;
        return {};
      }
      results = pool_.execute_parallel(
          sub, state, tactics, std::min(params_.per_tactic_timeout, remaining));
    } catch (const PoolFault& e) {
      result_.error = e.what();
      stop_ = Termination::kFault;
      return {};
    }
    // A batch that overran the deadline is not part of the search.
    if (past_deadline()) {
      stop_ = Termination::kTimeout;
      return {};
    }

    std::vector<NodeId> out;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      if (!r.outcome.applied()) continue;
      const ProofState& child = r.outcome.next();
      const auto known = result_.tree.find(child);
      if (!known && result_.tree.nodes().size() >= params_.max_tree_nodes) {
        cap_hit_ = true;
        continue;
      }
      const double nll = candidates[i].neg_log_likelihood;
      const std::size_t edges_before = result_.tree.edges().size();
      const NodeId cid = result_.tree.record_edge(id, r.tactic, nll, child);
      if (result_.tree.edges().size() == edges_before) continue;
      const std::size_t edge = edges_before;

      const double score = params_.score_mode == ScoreMode::kCumulative
                               ? info_[id].score + nll
                               : nll;
      std::vector<std::size_t> edge_path = info_[id].edge_path;
      edge_path.push_back(edge);
      bool changed = false;
      if (static_cast<std::size_t>(cid) >= info_.size()) {
        info_.resize(cid + 1);
        info_[cid] = {score, edge_path, false};
        changed = true;
      } else if (!info_[cid].expanded && score < info_[cid].score) {
        info_[cid].score = score;
        info_[cid].edge_path = edge_path;
        changed = true;
      }
      if (child.empty()) {
        accept_proof(edge_path);
        info_[cid].expanded = true;
      } else if (changed && !info_[cid].expanded) {
        out.push_back(cid);
      }
    }
    if (cap_hit_) stop_ = Termination::kExhausted;
    return out;
  }

  void accept_proof(const std::vector<std::size_t>& edge_path) {
    if (result_.found && !params_.collect_all) return;
    ProofScript script;
    for (std::size_t e : edge_path) script.push_back(result_.tree.edges()[e].tactic);
    for (const auto& p : result_.proofs) {
      if (p == script) return;
    }
    bool verified = false;
    try {
      auto fresh = pool_.spawn_fresh();
      verified = replay_verify(theorem_, script, *fresh);
    } catch (const BackendFault& e) {
      result_.error = e.what();
    }
    if (!verified) {
      ++result_.rejected_proofs;
      return;
    }
    result_.tree.add_proof(edge_path);
    for (std::size_t e : edge_path) {
      pool_.protect(key_of(result_.tree.edges()[e].child));
    }
    result_.proofs.push_back(std::move(script));
    result_.found = true;
  }

  SearchResult finish() {
    Termination t = stop_.value_or(Termination::kExhausted);
    if (result_.found) {
      t = Termination::kQed;
    } else if (t == Termination::kExhausted && result_.generator_errors > 0) {
      t = Termination::kFault;
    }
    result_.termination = t;
    const std::chrono::duration<double> dt = Clock::now() - start_;
    result_.wall_time_s = dt.count();
    result_.tree.wall_time_s = result_.wall_time_s;
    return std::move(result_);
  }

  const TheoremStatement& theorem_;
  ProofStepGenerator& generator_;
  env::EnvPool& pool_;
  const SearchParams& params_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  SearchResult result_;
  std::vector<NodeInfo> info_;
  std::unordered_map<NodeId, std::string> keys_;
  std::optional<Termination> stop_;
  bool cap_hit_ = false;
};

void check_pool(const TheoremStatement& theorem, const env::EnvPool& pool) {
  if (pool.theorem().name != theorem.name ||
      pool.theorem().statement != theorem.statement) {
    throw std::invalid_argument("pool was initialized for theorem '" +
                                pool.theorem().name + "'");
  }
}

}  // namespace

std::string_view to_string(Algorithm a) {
  return a == Algorithm::kBeam ? "beam" : "best-first";
}

std::string_view to_string(ScoreMode m) {
  return m == ScoreMode::kCumulative ? "cumulative" : "per-step";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kQed:
      return "qed";
    case Termination::kTimeout:
      return "timeout";
    case Termination::kExhausted:
      return "exhausted";
    case Termination::kFault:
      return "fault";
  }
  return "fault";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "beam") return Algorithm::kBeam;
  if (text == "best-first" || text == "best_first") {
    return Algorithm::kBestFirst;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(text) +
                              "' (expected beam or best-first)");
}

ScoreMode parse_score_mode(std::string_view text) {
  if (text == "cumulative") return ScoreMode::kCumulative;
  if (text == "per-step" || text == "per_step") return ScoreMode::kPerStep;
  throw std::invalid_argument("unknown score mode '" + std::string(text) +
                              "' (expected cumulative or per-step)");
}

Termination parse_termination(std::string_view text) {
  for (auto t : {Termination::kQed, Termination::kTimeout,
                 Termination::kExhausted, Termination::kFault}) {
    if (to_string(t) == text) return t;
  }
  throw std::invalid_argument("unknown termination '" + std::string(text) +
                              "'");
}

void SearchParams::validate() const {
  if (width < 1) throw std::invalid_argument("width must be at least 1");
  if (n_samples < 1 || n_samples > kMaxCandidates) {
    throw std::invalid_argument("n_samples must be in [1, 256]");
  }
  if (algorithm == Algorithm::kBeam && width > n_samples) {
    throw std::invalid_argument("beam width must not exceed n_samples");
  }
  if (!(timeout_s > 0)) throw std::invalid_argument("timeout must be positive");
  if (!(temperature > 0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  if (pool_size < 1) throw std::invalid_argument("pool size must be >= 1");
  if (max_tree_nodes < 1) {
    throw std::invalid_argument("max_tree_nodes must be >= 1");
  }
  if (per_tactic_timeout.count() <= 0) {
    throw std::invalid_argument("per-tactic timeout must be positive");
  }
}

SearchResult parallel_beam_search(const TheoremStatement& theorem,
                                  ProofStepGenerator& generator,
                                  env::EnvPool& pool,
                                  const SearchParams& params) {
  params.validate();
  check_pool(theorem, pool);
  return Searcher(theorem, generator, pool, params).beam();
}

SearchResult best_first_search(const TheoremStatement& theorem,
                               ProofStepGenerator& generator,
                               env::EnvPool& pool,
                               const SearchParams& params) {
  params.validate();
  check_pool(theorem, pool);
  return Searcher(theorem, generator, pool, params).best_first();
}

SearchResult run_search(const TheoremStatement& theorem,
                        ProofStepGenerator& generator, env::EnvPool& pool,
                        const SearchParams& params) {
  return params.algorithm == Algorithm::kBeam
             ? parallel_beam_search(theorem, generator, pool, params)
             : best_first_search(theorem, generator, pool, params);
}

bool replay_verify(const TheoremStatement& theorem, const ProofScript& script,
                   EnvironmentBackend& backend) {
  if (script.empty()) return false;
  try {
    const ProofState s0 = backend.start(theorem);
    const SequenceOutcome out = apply_tactic_sequence(backend, s0, script);
    return out.qed() && out.clean();
  } catch (const BackendFault&) {
    return false;
  }
}

json result_to_json(const SearchResult& result, const std::string& tree_ref) {
  json proofs = json::array();
  for (const auto& p : result.proofs) proofs.push_back(script_text(p));
  json j = {{"search_result", "v1"},
            {"prompt_format", std::string(kPromptFormatVersion)},
            {"theorem_name", result.theorem_name},
            {"found", result.found},
            {"proofs", std::move(proofs)},
            {"termination", std::string(to_string(result.termination))},
            {"wall_time_s", result.wall_time_s},
            {"stats", stats_to_json(compute_stats(result.tree))},
            {"tree", tree_ref},
            {"generator_errors", result.generator_errors},
            {"rejected_proofs", result.rejected_proofs}};
  if (!result.error.empty()) j["error"] = result.error;
  return j;
}

}  // namespace proofsearch
