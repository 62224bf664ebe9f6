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

#include "proofsearch/kernel.h"

#include <stdexcept>
#include <unordered_set>

namespace proofsearch {
namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

bool has_line_break(std::string_view s) {
  return s.find_first_of("\r\n") != std::string_view::npos;
}

}  // namespace

std::string_view hypothesis_name(std::string_view hypothesis) {
  auto pos = hypothesis.find(" : ");
  if (pos == std::string_view::npos) pos = hypothesis.find(':');
  if (pos == std::string_view::npos) return trim(hypothesis);
  return trim(hypothesis.substr(0, pos));
}

Obligation::Obligation(std::string goal, std::vector<std::string> hypotheses)
    : goal_(std::move(goal)), hypotheses_(std::move(hypotheses)) {
  if (goal_.empty()) throw std::invalid_argument("obligation goal is empty");
  if (has_line_break(goal_)) {
    throw std::invalid_argument("obligation goal contains a line break");
  }
  std::unordered_set<std::string_view> names;
  for (const auto& h : hypotheses_) {
    if (has_line_break(h)) {
      throw std::invalid_argument("hypothesis contains a line break: " + h);
    }
    if (!names.insert(hypothesis_name(h)).second) {
      throw std::invalid_argument("duplicate hypothesis name in: " + h);
    }
  }
}

bool is_qed(const ProofState& state) { return state.empty(); }

std::string canonical_key(const ProofState& state) {
  std::string key;
  bool first = true;
  for (const auto& ob : state.obligations()) {
    if (!first) key += "\n---\n";
    first = false;
    key += ob.goal();
    for (const auto& h : ob.hypotheses()) {
      key += '\n';
      key += h;
    }
  }
  return key;
}

Tactic::Tactic(std::string_view text) : text_(trim(text)) {
  if (text_.empty()) throw std::invalid_argument("empty tactic");
  if (has_line_break(text_)) {
    throw std::invalid_argument("tactic spans several lines: " + text_);
  }
}

ProofScript make_script(const std::vector<std::string>& steps) {
  ProofScript script;
  script.reserve(steps.size());
  for (const auto& s : steps) script.emplace_back(s);
  return script;
}

std::vector<std::string> script_text(const ProofScript& script) {
  std::vector<std::string> out;
  out.reserve(script.size());
  for (const auto& t : script) out.push_back(t.text());
  return out;
}

TransitionOutcome apply_tactic(EnvironmentBackend& env,
                               const ProofState& state, const Tactic& tactic) {
  if (state.empty()) return Failed{"no goals"};
  return env.apply(state, tactic);
}

SequenceOutcome apply_tactic_sequence(EnvironmentBackend& env,
                                      const ProofState& state,
                                      const ProofScript& script) {
  if (script.empty()) throw std::invalid_argument("empty tactic sequence");
  SequenceOutcome out{state, {}};
  for (std::size_t i = 0; i < script.size(); ++i) {
    auto outcome = apply_tactic(env, out.state, script[i]);
    if (outcome.applied()) {
      out.state = outcome.next();
    } else {
      out.failed_steps.push_back(i);
    }
  }
  return out;
}

}  // namespace proofsearch
