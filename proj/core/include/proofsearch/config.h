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

#ifndef PROOFSEARCH_CONFIG_H_
#define PROOFSEARCH_CONFIG_H_

// Run configuration. The file format is one "key = value" per line; blank
// lines and lines starting with '#' are ignored; unknown keys are errors.
//
//   algorithm           beam | best-first
//   width               beam width
//   timeout             search timeout in seconds
//   temperature         passed to the generator
//   n_samples           candidates requested per expansion (default: width)
//   pool_size           backend instances per theorem
//   max_tree_nodes      tree size cap
//   collect_all         true | false
//   score_mode          cumulative | per-step
//   per_tactic_timeout  seconds
//   prompt_chars        prompt budget in characters
//   max_new_chars       passed to the generator
//   generator           oracle | replay:FILE | remote:URL
//   backend             mini | mini:HOOKS | proto:CMD ARGS
//   attempts            independent search runs
//   jobs                theorems searched concurrently
//   max_in_flight       remote requests in flight (default: pool_size)
//   split_seed, test_min, val_frac
//   out_dir

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "proofsearch/env/transport.h"
#include "proofsearch/extraction.h"
#include "proofsearch/generation.h"
#include "proofsearch/search.h"

namespace proofsearch {

inline constexpr std::string_view kConfigEnvVar = "PROOFSEARCH_CONFIG";

struct RunConfig {
  SearchParams search;
  // Unset means "same as width".
  std::optional<std::size_t> n_samples;
  std::optional<std::size_t> max_in_flight;
  std::string generator = "oracle";
  std::string backend = "mini";
  std::size_t attempts = 1;
  std::size_t jobs = 1;
  SplitSpec split;
  std::string out_dir = "results";

  // Throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);
  // Throws ConfigError with the line number.
  void merge_text(std::string_view text, const std::string& origin);
  void merge_file(const std::filesystem::path& path);

  // The effective search parameters (n_samples resolved).
  SearchParams search_params() const;
  std::size_t effective_max_in_flight() const;

  // `path`, else $PROOFSEARCH_CONFIG, else defaults.
  static RunConfig load(const std::optional<std::filesystem::path>& path);
};

}  // namespace proofsearch

#endif  // PROOFSEARCH_CONFIG_H_
