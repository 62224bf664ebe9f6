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

#ifndef PROOFSEARCH_EXTRACTION_H_
#define PROOFSEARCH_EXTRACTION_H_

// Proof-step records: replaying a human proof a_1..a_n from O_0 yields one
// record (O_{i-1}, [a_i], O_i) per step. Splits are made per theorem.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proofsearch/kernel.h"
#include "proofsearch/mini/theorem_file.h"

namespace proofsearch {

struct ProofStepRecord {
  std::string theorem_name;
  ProofState start_goals;
  std::vector<std::string> proof_steps;
  ProofState end_goals;
  // Open map, persisted verbatim.
  nlohmann::json metadata = nlohmann::json::object();

  bool operator==(const ProofStepRecord&) const = default;
};

nlohmann::json record_to_json(const ProofStepRecord& record);
// Throws Error on schema violations.
ProofStepRecord record_from_json(const nlohmann::json& j);

struct ExtractionContext {
  std::string file;
  std::string itp = "mini";
};

// Replays `script` from the theorem's initial state on `env`, aborting on the
// first failed step. Throws ReplayDivergence (1-based step index; length + 1
// if the script ends short of QED). BackendFault propagates.
std::vector<ProofStepRecord> extract_theorem(EnvironmentBackend& env,
                                             const TheoremStatement& theorem,
                                             const ProofScript& script,
                                             const ExtractionContext& context);

// Hypothesis names a MiniITP tactic refers to ("rw h", "exact h").
std::vector<std::string> referenced_names(const Tactic& tactic);

struct CorpusEntry {
  mini::Theorem theorem;
  std::string file;
};

// A .thm file, or every .thm file under a directory (sorted by path).
// Throws Error if nothing is found and ParseError naming the file.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path);

struct SplitSpec {
  std::uint64_t seed = 0;
  std::size_t test_min = 0;
  double val_fraction = 0.0;
};

struct Splits {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::vector<std::string> val;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  // Throws Error.
  static Splits from_json(const nlohmann::json& j);
  // "train", "test" or "val"; throws std::invalid_argument otherwise.
  const std::vector<std::string>& get(const std::string& name) const;
};

// Sorts the names, shuffles them with a splitmix64-driven Fisher-Yates, then
// takes test_min names for test, floor(val_fraction * n) for val and the rest
// for train; each list is returned sorted. Throws Error when there are too
// few names and std::invalid_argument on duplicates or a bad fraction.
Splits make_splits(std::vector<std::string> names, const SplitSpec& spec);

}  // namespace proofsearch

#endif  // PROOFSEARCH_EXTRACTION_H_
