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

#ifndef PROOFSEARCH_ANALYSIS_H_
#define PROOFSEARCH_ANALYSIS_H_

// pass@k over repeated independent search attempts, and a paired bootstrap
// test between two systems evaluated on the same theorems.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace proofsearch {

struct AttemptMatrix {
  std::vector<std::string> theorems;
  // attempts[i][j]: attempt j proved theorem i.
  std::vector<std::vector<bool>> attempts;

  std::size_t size() const { return theorems.size(); }
  std::size_t n(std::size_t i) const { return attempts.at(i).size(); }
  std::size_t c(std::size_t i) const;
  // Smallest attempt count over theorems; 0 when empty.
  std::size_t min_attempts() const;

  // Throws std::invalid_argument if the rows and names disagree.
  void validate() const;
  static AttemptMatrix from_counts(
      const std::vector<std::string>& names,
      const std::vector<std::pair<std::size_t, std::size_t>>& n_c);
};

struct Fraction {
  unsigned __int128 num = 0;
  unsigned __int128 den = 1;
};

// Exact binomial coefficient; throws std::overflow_error beyond 128 bits.
unsigned __int128 binomial(unsigned n, unsigned k);

// 1 - C(n-c, k) / C(n, k) as an exact fraction. Throws std::invalid_argument
// unless 1 <= k <= n and c <= n.
Fraction pass_at_k_fraction(std::size_t n, std::size_t c, std::size_t k);

// Per-theorem estimate in percent.
double theorem_pass_at_k(std::size_t n, std::size_t c, std::size_t k);

// Mean over theorems, in percent. Throws std::invalid_argument when k is 0,
// exceeds some theorem's attempt count, or the matrix is empty.
double pass_at_k(const AttemptMatrix& matrix, std::size_t k);

inline constexpr double kDefaultAlpha = 0.05;
inline constexpr std::size_t kDefaultResamples = 10000;

struct BootstrapResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
  double alpha = kDefaultAlpha;
  std::size_t k = 1;
};

// The i-th theorem index of resample r for a suite of `count` theorems:
// splitmix64 at counter r * count + i, reduced by the high half of a
// 64x64 multiply.
std::size_t bootstrap_index(std::uint64_t seed, std::uint64_t resample,
                            std::size_t i, std::size_t count);

// One-sided: tests pass@k(a) > pass@k(b).
// p = (1 + #{resamples with statistic <= 0}) / (resamples + 1).
// Results do not depend on `threads`. Throws std::invalid_argument on
// mismatched theorem lists or resamples < 1.
BootstrapResult paired_bootstrap(const AttemptMatrix& a, const AttemptMatrix& b,
                                 std::size_t k, std::size_t resamples,
                                 std::uint64_t seed,
                                 double alpha = kDefaultAlpha,
                                 unsigned threads = 1);

// Folds results files (one per attempt, JSON lines of search results) into a
// matrix ordered as in the first file. Throws Error naming a missing or
// duplicated theorem or a bad schema version.
AttemptMatrix load_results(const std::vector<std::filesystem::path>& paths);

struct EvalReport {
  std::map<std::size_t, double> pass_at_k;
  std::size_t n_theorems = 0;
  std::size_t attempts = 0;
  std::optional<BootstrapResult> bootstrap;
  std::optional<std::map<std::size_t, double>> baseline_pass_at_k;

  nlohmann::json to_json() const;
  // Columns Pass@1..Pass@K and p_value.
  std::string to_table() const;
};

// Computes pass@k for every k in `ks` not exceeding the attempt count.
EvalReport evaluate(const AttemptMatrix& matrix,
                    const std::vector<std::size_t>& ks);

}  // namespace proofsearch

#endif  // PROOFSEARCH_ANALYSIS_H_
