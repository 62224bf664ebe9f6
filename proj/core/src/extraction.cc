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

#include "proofsearch/extraction.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "proofsearch/env/protocol.h"
#include "proofsearch/errors.h"

namespace proofsearch {
namespace {

using json = nlohmann::json;

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, range) by Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t range) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace

json record_to_json(const ProofStepRecord& r) {
  return {{"theorem_name", r.theorem_name},
          {"start_goals", env::goals_to_json(r.start_goals)},
          {"proof_steps", r.proof_steps},
          {"end_goals", env::goals_to_json(r.end_goals)},
          {"metadata", r.metadata}};
}

ProofStepRecord record_from_json(const json& j) {
  try {
    ProofStepRecord r;
    r.theorem_name = j.at("theorem_name").get<std::string>();
    r.start_goals = env::goals_from_json(j.at("start_goals"));
    r.proof_steps = j.at("proof_steps").get<std::vector<std::string>>();
    r.end_goals = env::goals_from_json(j.at("end_goals"));
    if (j.contains("metadata")) r.metadata = j["metadata"];
    if (r.proof_steps.empty()) throw Error("record has no proof steps");
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed proof-step record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("malformed proof-step record: ") + e.what());
  }
}

std::vector<std::string> referenced_names(const Tactic& tactic) {
  std::istringstream in(tactic.text());
  std::string head, arg, extra;
  in >> head >> arg;
  if ((head == "rw" || head == "exact") && !arg.empty() && !(in >> extra)) {
    return {arg};
  }
  return {};
}

std::vector<ProofStepRecord> extract_theorem(EnvironmentBackend& env,
                                             const TheoremStatement& theorem,
                                             const ProofScript& script,
                                             const ExtractionContext& context) {
  if (script.empty()) {
    throw ReplayDivergence(theorem.name, 1, "empty proof script");
  }
  std::vector<ProofStepRecord> out;
  ProofState state = env.start(theorem);
  for (std::size_t i = 0; i < script.size(); ++i) {
    const TransitionOutcome t = apply_tactic(env, state, script[i]);
    if (t.failed()) {
      throw ReplayDivergence(theorem.name, i + 1,
                             "'" + script[i].text() + "' failed: " +
                                 t.message());
    }
    ProofStepRecord r;
    r.theorem_name = theorem.name;
    r.start_goals = state;
    r.proof_steps = {script[i].text()};
    r.end_goals = t.next();
    r.metadata = {{"file", context.file},
                  {"step_index", i + 1},
                  {"itp", context.itp},
                  {"referenced", context.itp == "mini"
                                     ? referenced_names(script[i])
                                     : std::vector<std::string>{}}};
    out.push_back(std::move(r));
    state = t.next();
    if (state.empty() && i + 1 < script.size()) {
      throw ReplayDivergence(theorem.name, i + 2,
                             "proof already complete before this step");
    }
  }
  if (!state.empty()) {
    throw ReplayDivergence(theorem.name, script.size() + 1,
                           "script ends with " + std::to_string(state.size()) +
                               " open obligation(s)");
  }
  return out;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& e : std::filesystem::recursive_directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".thm") {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (std::filesystem::is_regular_file(path)) {
    files.push_back(path);
  } else {
    throw Error("no such corpus: " + path.string());
  }
  std::vector<CorpusEntry> out;
  std::set<std::string> names;
  for (const auto& f : files) {
    mini::TheoremFile tf;
    try {
      tf = mini::load_theorem_file(f);
    } catch (const ParseError& e) {
      throw ParseError(f.string() + ": " + e.message(), e.line(), e.column());
    }
    for (auto& t : tf.theorems) {
      if (!names.insert(t.name).second) {
        throw Error(f.string() + ": theorem '" + t.name +
                    "' is defined in more than one file");
      }
      out.push_back({std::move(t), f.string()});
    }
  }
  if (out.empty()) throw Error("corpus " + path.string() + " has no theorems");
  return out;
}

json Splits::to_json() const {
  return {{"train", train}, {"test", test}, {"val", val}, {"seed", seed}};
}

Splits Splits::from_json(const json& j) {
  try {
    Splits s;
    s.train = j.at("train").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    s.val = j.at("val").get<std::vector<std::string>>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed split manifest: ") + e.what());
  }
}

const std::vector<std::string>& Splits::get(const std::string& name) const {
  if (name == "train") return train;
  if (name == "test") return test;
  if (name == "val") return val;
  throw std::invalid_argument("unknown split '" + name +
                              "' (expected train, test or val)");
}

Splits make_splits(std::vector<std::string> names, const SplitSpec& spec) {
  if (!(spec.val_fraction >= 0.0 && spec.val_fraction < 1.0)) {
    throw std::invalid_argument("val fraction must be in [0, 1)");
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw std::invalid_argument("duplicate theorem names");
  }
  const std::size_t n = names.size();
  const auto n_val = static_cast<std::size_t>(
      std::floor(spec.val_fraction * static_cast<double>(n) + 1e-9));
  if (n < spec.test_min + n_val) {
    throw Error("need at least " + std::to_string(spec.test_min + n_val) +
                " theorems for the requested split, have " +
                std::to_string(n));
  }
  SplitMix64 rng(spec.seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(names[i - 1], names[j]);
  }
  Splits s;
  s.seed = spec.seed;
  const auto begin = names.begin();
  const auto test_end = begin + static_cast<std::ptrdiff_t>(spec.test_min);
  const auto val_end = test_end + static_cast<std::ptrdiff_t>(n_val);
  s.test.assign(begin, test_end);
  s.val.assign(test_end, val_end);
  s.train.assign(val_end, names.end());
  std::sort(s.test.begin(), s.test.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

}  // namespace proofsearch
