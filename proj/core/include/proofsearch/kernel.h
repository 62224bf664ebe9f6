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

#ifndef PROOFSEARCH_KERNEL_H_
#define PROOFSEARCH_KERNEL_H_

// Formal model of tactic-based theorem proving: a proof state is an ordered
// list of obligations (goal plus hypotheses), a tactic maps a state to a new
// state, and a failed tactic leaves the state unchanged. QED is the state
// with no obligations.

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace proofsearch {

// Hypotheses are rendered "name : statement"; the name is everything before
// the first " : " (or ':' when unspaced).
std::string_view hypothesis_name(std::string_view hypothesis);

class Obligation {
 public:
  Obligation() = default;
  // Throws std::invalid_argument on an empty goal, a goal or hypothesis
  // containing a newline, or duplicate hypothesis names.
  Obligation(std::string goal, std::vector<std::string> hypotheses);

  const std::string& goal() const { return goal_; }
  const std::vector<std::string>& hypotheses() const { return hypotheses_; }

  bool operator==(const Obligation&) const = default;

 private:
  std::string goal_;
  std::vector<std::string> hypotheses_;
};

// Index 0 is the focused obligation. Order is semantic.
class ProofState {
 public:
  ProofState() = default;
  explicit ProofState(std::vector<Obligation> obligations)
      : obligations_(std::move(obligations)) {}

  static ProofState qed() { return ProofState(); }

  const std::vector<Obligation>& obligations() const { return obligations_; }
  bool empty() const { return obligations_.empty(); }
  std::size_t size() const { return obligations_.size(); }

  bool operator==(const ProofState&) const = default;

 private:
  std::vector<Obligation> obligations_;
};

bool is_qed(const ProofState& state);

// Obligations joined by "\n---\n"; each obligation is its goal line followed
// by its hypothesis lines. QED serializes to "".
std::string canonical_key(const ProofState& state);

// A single proof step: trimmed, non-empty, no embedded newline.
class Tactic {
 public:
  // Trims `text`; throws std::invalid_argument if the result is empty or
  // still contains a line break.
  explicit Tactic(std::string_view text);

  const std::string& text() const { return text_; }

  auto operator<=>(const Tactic&) const = default;

 private:
  std::string text_;
};

using ProofScript = std::vector<Tactic>;

ProofScript make_script(const std::vector<std::string>& steps);
std::vector<std::string> script_text(const ProofScript& script);

struct Applied {
  ProofState next;
  bool operator==(const Applied&) const = default;
};

struct Failed {
  std::string message;
  bool operator==(const Failed&) const = default;
};

class TransitionOutcome {
 public:
  TransitionOutcome(Applied applied) : value_(std::move(applied)) {}
  TransitionOutcome(Failed failed) : value_(std::move(failed)) {}

  bool applied() const { return std::holds_alternative<Applied>(value_); }
  bool failed() const { return !applied(); }
  // Applied with no obligations.
  bool closed_proof() const { return applied() && next().empty(); }

  // Precondition: applied().
  const ProofState& next() const { return std::get<Applied>(value_).next; }
  // Precondition: failed().
  const std::string& message() const {
    return std::get<Failed>(value_).message;
  }

  // The state the search observes afterwards: the successor on success and
  // `before` on failure.
  const ProofState& resulting_state(const ProofState& before) const {
    return applied() ? next() : before;
  }

  bool operator==(const TransitionOutcome&) const = default;

 private:
  std::variant<Applied, Failed> value_;
};

struct TheoremStatement {
  std::string name;
  std::string statement;
  bool operator==(const TheoremStatement&) const = default;
};

// An ITP (or stand-in) that can start a theorem and apply tactics to any
// state it has produced. Implementations throw BackendFault for process or
// protocol failures; an inapplicable tactic is a Failed outcome, not an
// exception. One instance must not receive concurrent calls.
class EnvironmentBackend {
 public:
  virtual ~EnvironmentBackend() = default;

  virtual ProofState start(const TheoremStatement& theorem) = 0;
  virtual TransitionOutcome apply(const ProofState& state,
                                  const Tactic& tactic) = 0;
};

TransitionOutcome apply_tactic(EnvironmentBackend& env,
                               const ProofState& state, const Tactic& tactic);

struct SequenceOutcome {
  ProofState state;
  // 0-based indices of steps that failed and acted as the identity.
  std::vector<std::size_t> failed_steps;

  bool qed() const { return state.empty(); }
  bool clean() const { return failed_steps.empty(); }
};

// Left fold of apply_tactic; failing steps contribute the identity and the
// fold continues. Throws std::invalid_argument on an empty script.
SequenceOutcome apply_tactic_sequence(EnvironmentBackend& env,
                                      const ProofState& state,
                                      const ProofScript& script);

}  // namespace proofsearch

#endif  // PROOFSEARCH_KERNEL_H_
