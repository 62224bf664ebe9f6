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

#include "proofsearch/config.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "proofsearch/errors.h"

namespace proofsearch {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(out)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + s +
                      "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" +
                    std::string(v) + "'");
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  try {
    if (key == "algorithm") {
      search.algorithm = parse_algorithm(value);
    } else if (key == "width") {
      search.width = to_uint(key, value);
    } else if (key == "timeout") {
      search.timeout_s = to_double(key, value);
    } else if (key == "temperature") {
      search.temperature = to_double(key, value);
    } else if (key == "n_samples") {
      n_samples = to_uint(key, value);
    } else if (key == "pool_size") {
      search.pool_size = to_uint(key, value);
    } else if (key == "max_tree_nodes") {
      search.max_tree_nodes = to_uint(key, value);
    } else if (key == "collect_all") {
      search.collect_all = to_bool(key, value);
    } else if (key == "score_mode") {
      search.score_mode = parse_score_mode(value);
    } else if (key == "per_tactic_timeout") {
      search.per_tactic_timeout = std::chrono::milliseconds(
          static_cast<long long>(std::llround(to_double(key, value) * 1000)));
    } else if (key == "prompt_chars") {
      search.prompt_chars = to_uint(key, value);
    } else if (key == "max_new_chars") {
      search.max_new_chars = to_uint(key, value);
    } else if (key == "generator") {
      GeneratorSpec::parse(value);
      generator = std::string(value);
    } else if (key == "backend") {
      env::SpawnSpec::parse(value);
      backend = std::string(value);
    } else if (key == "attempts") {
      attempts = to_uint(key, value);
    } else if (key == "jobs") {
      jobs = to_uint(key, value);
    } else if (key == "max_in_flight") {
      max_in_flight = to_uint(key, value);
    } else if (key == "split_seed") {
      split.seed = to_uint(key, value);
    } else if (key == "test_min") {
      split.test_min = to_uint(key, value);
    } else if (key == "val_frac") {
      split.val_fraction = to_double(key, value);
    } else if (key == "out_dir") {
      out_dir = std::string(value);
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void RunConfig::merge_text(std::string_view text, const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) +
                        ": expected key = value");
    }
    try {
      set(trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": " +
                        e.what());
    }
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path.string());
}

SearchParams RunConfig::search_params() const {
  SearchParams p = search;
  p.n_samples = n_samples.value_or(search.width);
  return p;
}

std::size_t RunConfig::effective_max_in_flight() const {
  return max_in_flight.value_or(search.pool_size);
}

RunConfig RunConfig::load(const std::optional<std::filesystem::path>& path) {
  RunConfig c;
  if (path) {
    c.merge_file(*path);
  } else if (const char* env = std::getenv(std::string(kConfigEnvVar).c_str());
             env && *env) {
    c.merge_file(env);
  }
  return c;
}

}  // namespace proofsearch
