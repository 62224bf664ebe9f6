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

#ifndef PROOFSEARCH_SEARCH_H_
#define PROOFSEARCH_SEARCH_H_

// Generator-guided proof search over a pool of backend instances.
//
// Beam search keeps the `width` best unexpanded successors per round;
// best-first expands the single best open state per round. States are scored
// by cumulative edge NLL from the root (or the last edge's NLL in per-step
// mode), ties broken by canonical key. Each distinct state is expanded at
// most once.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "proofsearch/env/pool.h"
#include "proofsearch/generation.h"
#include "proofsearch/kernel.h"
#include "proofsearch/prompting.h"
#include "proofsearch/prooftree.h"

namespace proofsearch {

enum class Algorithm { kBeam, kBestFirst };
enum class ScoreMode { kCumulative, kPerStep };
enum class Termination { kQed, kTimeout, kExhausted, kFault };

std::string_view to_string(Algorithm a);
std::string_view to_string(ScoreMode m);
std::string_view to_string(Termination t);
// Throw std::invalid_argument.
Algorithm parse_algorithm(std::string_view text);
ScoreMode parse_score_mode(std::string_view text);
Termination parse_termination(std::string_view text);

inline constexpr double kDefaultTimeoutS = 600.0;
inline constexpr double kLongTimeoutS = 1200.0;

struct SearchParams {
  Algorithm algorithm = Algorithm::kBeam;
  std::size_t width = 32;
  double timeout_s = kDefaultTimeoutS;
  double temperature = 0.75;
  std::size_t n_samples = 32;
  std::size_t pool_size = 1;
  std::size_t max_tree_nodes = 10000;
  bool collect_all = false;
  ScoreMode score_mode = ScoreMode::kCumulative;
  std::chrono::milliseconds per_tactic_timeout{60000};
  std::size_t prompt_chars = kDefaultPromptChars;
  std::size_t max_new_chars = 256;

  // Throws std::invalid_argument. Beam requires width <= n_samples; best
  // first ignores width.
  void validate() const;
};

struct SearchResult {
  SearchResult(std::string name, ProofTree t)
      : theorem_name(std::move(name)), tree(std::move(t)) {}

  std::string theorem_name;
  bool found = false;
  std::vector<ProofScript> proofs;
  ProofTree tree;
  double wall_time_s = 0.0;
  Termination termination = Termination::kExhausted;
  // Fault or transport error detail, if any occurred.
  std::string error;
  std::size_t generator_errors = 0;
  // Proofs dropped because they failed independent replay.
  std::size_t rejected_proofs = 0;
};

SearchResult parallel_beam_search(const TheoremStatement& theorem,
                                  ProofStepGenerator& generator,
                                  env::EnvPool& pool,
                                  const SearchParams& params);

SearchResult best_first_search(const TheoremStatement& theorem,
                               ProofStepGenerator& generator,
                               env::EnvPool& pool, const SearchParams& params);

// Dispatches on params.algorithm.
SearchResult run_search(const TheoremStatement& theorem,
                        ProofStepGenerator& generator, env::EnvPool& pool,
                        const SearchParams& params);

// Starts `theorem` on `backend` and replays the script; true iff it reaches
// QED with no failed step. Backend faults count as false.
bool replay_verify(const TheoremStatement& theorem, const ProofScript& script,
                   EnvironmentBackend& backend);

// One JSON line of a results file; `tree_ref` names the tree file.
nlohmann::json result_to_json(const SearchResult& result,
                              const std::string& tree_ref = "");

}  // namespace proofsearch

#endif  // PROOFSEARCH_SEARCH_H_
