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

#include "proofsearch/analysis.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "proofsearch/errors.h"
#include "proofsearch/json_io.h"

namespace proofsearch {
namespace {

using u128 = unsigned __int128;
using json = nlohmann::json;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::size_t AttemptMatrix::c(std::size_t i) const {
  const auto& row = attempts.at(i);
  return static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
}

std::size_t AttemptMatrix::min_attempts() const {
  if (attempts.empty()) return 0;
  std::size_t m = attempts.front().size();
  for (const auto& row : attempts) m = std::min(m, row.size());
  return m;
}

void AttemptMatrix::validate() const {
  if (theorems.size() != attempts.size()) {
    throw std::invalid_argument("attempt matrix has " +
                                std::to_string(theorems.size()) +
                                " names but " +
                                std::to_string(attempts.size()) + " rows");
  }
}

AttemptMatrix AttemptMatrix::from_counts(
    const std::vector<std::string>& names,
    const std::vector<std::pair<std::size_t, std::size_t>>& n_c) {
  if (names.size() != n_c.size()) {
    throw std::invalid_argument("names and counts differ in length");
  }
  AttemptMatrix m;
  m.theorems = names;
  for (const auto& [n, c] : n_c) {
    if (c > n) throw std::invalid_argument("c exceeds n");
    std::vector<bool> row(n, false);
    std::fill(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(c), true);
    m.attempts.push_back(std::move(row));
  }
  return m;
}

u128 binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (unsigned i = 0; i < k; ++i) {
    const u128 d = i + 1;
    const u128 g = gcd128(r, d);
    const u128 factor = (n - i) / (d / g);
    r /= g;
    if (factor != 0 && r > std::numeric_limits<u128>::max() / factor) {
      throw std::overflow_error("binomial coefficient exceeds 128 bits");
    }
    r *= factor;
  }
  return r;
}

Fraction pass_at_k_fraction(std::size_t n, std::size_t c, std::size_t k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("pass@" + std::to_string(k) +
                                " needs 1 <= k <= n = " + std::to_string(n));
  }
  if (c > n) throw std::invalid_argument("c exceeds n");
  const u128 total = binomial(static_cast<unsigned>(n),
                              static_cast<unsigned>(k));
  const u128 misses = binomial(static_cast<unsigned>(n - c),
                               static_cast<unsigned>(k));
  Fraction f{total - misses, total};
  const u128 g = gcd128(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f;
}

double theorem_pass_at_k(std::size_t n, std::size_t c, std::size_t k) {
  const Fraction f = pass_at_k_fraction(n, c, k);
  return static_cast<double>(static_cast<long double>(f.num) * 100.0L /
                             static_cast<long double>(f.den));
}

double pass_at_k(const AttemptMatrix& matrix, std::size_t k) {
  matrix.validate();
  if (matrix.size() == 0) throw std::invalid_argument("no theorems");
  long double sum = 0;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (k > matrix.n(i)) {
      throw std::invalid_argument(
          "k = " + std::to_string(k) + " exceeds the " +
          std::to_string(matrix.n(i)) + " attempts of '" +
          matrix.theorems[i] + "'");
    }
    sum += theorem_pass_at_k(matrix.n(i), matrix.c(i), k);
  }
  return static_cast<double>(sum / static_cast<long double>(matrix.size()));
}

std::size_t bootstrap_index(std::uint64_t seed, std::uint64_t resample,
                            std::size_t i, std::size_t count) {
  const std::uint64_t z =
      splitmix64_at(seed, resample * static_cast<std::uint64_t>(count) + i);
  return static_cast<std::size_t>(
      (static_cast<u128>(z) * static_cast<u128>(count)) >> 64);
}

BootstrapResult paired_bootstrap(const AttemptMatrix& a, const AttemptMatrix& b,
                                 std::size_t k, std::size_t resamples,
                                 std::uint64_t seed, double alpha,
                                 unsigned threads) {
  a.validate();
  b.validate();
  if (a.theorems != b.theorems) {
    throw std::invalid_argument(
        "paired bootstrap needs identical theorem lists in identical order");
  }
  if (resamples < 1) throw std::invalid_argument("resamples must be >= 1");
  const std::size_t count = a.size();
  if (count == 0) throw std::invalid_argument("no theorems");

  std::vector<long double> diff(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (k > a.n(i) || k > b.n(i)) {
      throw std::invalid_argument("k exceeds the attempts of '" +
                                  a.theorems[i] + "'");
    }
    diff[i] = static_cast<long double>(theorem_pass_at_k(a.n(i), a.c(i), k)) -
              static_cast<long double>(theorem_pass_at_k(b.n(i), b.c(i), k));
  }

  auto count_non_positive = [&](std::size_t lo, std::size_t hi) {
    std::size_t hits = 0;
    for (std::size_t r = lo; r < hi; ++r) {
      long double sum = 0;
      for (std::size_t i = 0; i < count; ++i) {
        sum += diff[bootstrap_index(seed, r, i, count)];
      }
      if (sum <= 0) ++hits;
    }
    return hits;
  };

  threads = std::max(1u, threads);
  std::size_t non_positive = 0;
  if (threads == 1 || resamples < 2) {
    non_positive = count_non_positive(0, resamples);
  } else {
    std::vector<std::size_t> partial(threads, 0);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = resamples * t / threads;
      const std::size_t hi = resamples * (t + 1) / threads;
      pool.emplace_back([&, t, lo, hi] { partial[t] = count_non_positive(lo, hi); });
    }
    for (auto& th : pool) th.join();
    non_positive = std::accumulate(partial.begin(), partial.end(),
                                   std::size_t{0});
  }

  BootstrapResult out;
  out.statistic = pass_at_k(a, k) - pass_at_k(b, k);
  out.p_value = static_cast<double>(1 + non_positive) /
                static_cast<double>(resamples + 1);
  out.significant = out.p_value < alpha;
  out.resamples = resamples;
  out.seed = seed;
  out.alpha = alpha;
  out.k = k;
  return out;
}

AttemptMatrix load_results(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) throw Error("no results files given");
  AttemptMatrix m;
  std::map<std::string, std::size_t> row_of;
  for (std::size_t f = 0; f < paths.size(); ++f) {
    const auto lines = read_json_lines(paths[f]);
    std::set<std::string> seen;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      const auto& j = lines[l];
      const std::string where =
          paths[f].string() + ": line " + std::to_string(l + 1);
      if (!j.is_object() || j.value("search_result", "") != "v1") {
        throw Error(where + ": not a v1 search result");
      }
      if (!j.contains("theorem_name") || !j["theorem_name"].is_string() ||
          !j.contains("found") || !j["found"].is_boolean()) {
        throw Error(where + ": missing theorem_name or found");
      }
      const std::string name = j["theorem_name"].get<std::string>();
      if (!seen.insert(name).second) {
        throw Error(where + ": theorem '" + name + "' appears twice");
      }
      if (f == 0) {
        row_of[name] = m.theorems.size();
        m.theorems.push_back(name);
        m.attempts.emplace_back();
      } else if (!row_of.count(name)) {
        throw Error(where + ": theorem '" + name + "' is not in " +
                    paths[0].string());
      }
      m.attempts[row_of[name]].push_back(j["found"].get<bool>());
    }
    for (const auto& name : m.theorems) {
      if (!seen.count(name)) {
        throw Error(paths[f].string() + ": missing theorem '" + name + "'");
      }
    }
  }
  return m;
}

EvalReport evaluate(const AttemptMatrix& matrix,
                    const std::vector<std::size_t>& ks) {
  EvalReport r;
  r.n_theorems = matrix.size();
  r.attempts = matrix.min_attempts();
  for (std::size_t k : ks) {
    if (k >= 1 && k <= r.attempts) r.pass_at_k[k] = pass_at_k(matrix, k);
  }
  return r;
}

json EvalReport::to_json() const {
  json pk = json::object();
  for (const auto& [k, v] : pass_at_k) pk["pass@" + std::to_string(k)] = v;
  json j = {{"eval_report", "v1"},
            {"n_theorems", n_theorems},
            {"attempts", attempts},
            {"attempt_definition", "one independent search run per attempt"},
            {"pass_at_k", std::move(pk)}};
  if (baseline_pass_at_k) {
    json bk = json::object();
    for (const auto& [k, v] : *baseline_pass_at_k) {
      bk["pass@" + std::to_string(k)] = v;
    }
    j["baseline_pass_at_k"] = std::move(bk);
  }
  if (bootstrap) {
    j["bootstrap"] = {{"test", "paired bootstrap, one-sided (candidate > baseline)"},
                      {"k", bootstrap->k},
                      {"statistic", bootstrap->statistic},
                      {"p_value", bootstrap->p_value},
                      {"alpha", bootstrap->alpha},
                      {"significant", bootstrap->significant},
                      {"resamples", bootstrap->resamples},
                      {"seed", bootstrap->seed}};
  } else {
    j["bootstrap"] = nullptr;
  }
  return j;
}

std::string EvalReport::to_table() const {
  std::vector<std::string> header{"System"};
  for (const auto& [k, v] : pass_at_k) {
    header.push_back("Pass@" + std::to_string(k));
  }
  header.push_back("p_value");
  std::vector<std::vector<std::string>> rows;
  auto add_row = [&](const std::string& label,
                     const std::map<std::size_t, double>& values,
                     const std::string& p) {
    std::vector<std::string> row{label};
    for (const auto& [k, unused] : pass_at_k) {
      (void)unused;
      auto it = values.find(k);
      row.push_back(it == values.end() ? "-" : fixed(it->second, 2));
    }
    row.push_back(p);
    rows.push_back(std::move(row));
  };
  std::string p = "-";
  if (bootstrap) {
    p = fixed(bootstrap->p_value, 4) + (bootstrap->significant ? " *" : "");
  }
  add_row("candidate", pass_at_k, p);
  if (baseline_pass_at_k) add_row("baseline", *baseline_pass_at_k, "-");

  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto render = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) line += "  ";
      std::string cell = cells[c];
      const std::size_t pad = width[c] - cell.size();
      line += c == 0 ? cell + std::string(pad, ' ') : std::string(pad, ' ') + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };
  std::string out = render(header);
  for (const auto& row : rows) out += render(row);
  if (bootstrap) {
    out += "paired bootstrap, one-sided, k=" + std::to_string(bootstrap->k) +
           ", resamples=" + std::to_string(bootstrap->resamples) +
           ", alpha=" + fixed(bootstrap->alpha, 2) + "\n";
  }
  return out;
}

}  // namespace proofsearch
