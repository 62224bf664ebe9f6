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

#ifndef PROOFSEARCH_TESTS_SUPPORT_TEST_SUPPORT_H_
#define PROOFSEARCH_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "proofsearch/extraction.h"
#include "proofsearch/kernel.h"
#include "proofsearch/prooftree.h"

namespace proofsearch::testing {

std::filesystem::path fixture_dir();
std::filesystem::path corpus_dir();
std::filesystem::path golden_dir();
std::filesystem::path mini_itp_binary();
std::filesystem::path cli_binary();

std::string read_file(const std::filesystem::path& path);

// Removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// Breadth-first search over every applicable MiniITP tactic. Returns the
// length of a shortest proof, or nullopt if none exists within `max_depth`.
std::optional<std::size_t> bfs_min_proof_length(const ProofState& start,
                                                std::size_t max_depth = 10);

// The fixture theorems with their human proofs.
std::vector<CorpusEntry> fixture_corpus();

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv to completion with stdout and stderr captured. `input` is fed
// to its stdin, which is then closed.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& input = "");

// A child that keeps running until stop() or destruction, stdout piped.
class BackgroundProcess {
 public:
  explicit BackgroundProcess(const std::vector<std::string>& argv);
  ~BackgroundProcess();
  BackgroundProcess(const BackgroundProcess&) = delete;
  BackgroundProcess& operator=(const BackgroundProcess&) = delete;

  // Next stdout line, or nullopt on EOF or after `timeout_ms`.
  std::optional<std::string> read_line(int timeout_ms);
  // SIGTERM then reap; returns the exit code (128 + signal if killed).
  int stop();

 private:
  int pid_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
};

// A random MiniITP term over `vars` with at most `depth` levels.
std::string random_term(std::mt19937_64& rng, const std::vector<std::string>& vars,
                        int depth);
// A random proof state: 1-3 obligations, each with binders or hypotheses.
ProofState random_state(std::mt19937_64& rng);
// A random script mixing applicable and garbage tactics for `state`.
ProofScript random_script(std::mt19937_64& rng, const ProofState& state,
                          std::size_t length);

// A 5-node, 6-edge DAG with three expanded nodes and one proof.
ProofTree hand_built_tree();

}  // namespace proofsearch::testing

#endif  // PROOFSEARCH_TESTS_SUPPORT_TEST_SUPPORT_H_
