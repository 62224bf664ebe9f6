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

#ifndef PROOFSEARCH_MINI_ENGINE_H_
#define PROOFSEARCH_MINI_ENGINE_H_

// The MiniITP tactic engine. Tactics act on the focused obligation only:
//
//   intro x      drop leading binder x, add hypothesis "x : nat"
//   refl         close when both sides are syntactically identical
//   simp         normalize both sides (see mini::normalize)
//   rw h         rewrite leftmost occurrence of a with b, for h : a = b
//   exact h      close when hypothesis h is the goal
//   induction x  split into base case x := Z and step case x := S x'
//
// refl, simp and rw fail while the goal still has leading binders.

#include <string>
#include <string_view>
#include <vector>

#include "proofsearch/kernel.h"
#include "proofsearch/mini/term.h"

namespace proofsearch::mini {

// O0 for a statement: a single obligation with no hypotheses. Throws
// ParseError.
ProofState initial_state(std::string_view statement);

TransitionOutcome mini_apply(const ProofState& state, const Tactic& tactic);

// Every tactic whose mini_apply yields Applied, in the order intro, refl,
// simp, exact h..., rw h..., induction x... (hypothesis order).
std::vector<Tactic> enumerate_applicable_tactics(const ProofState& state);

// In-process backend with no state table; used for fresh replays.
class MiniEnvironment : public EnvironmentBackend {
 public:
  ProofState start(const TheoremStatement& theorem) override;
  TransitionOutcome apply(const ProofState& state,
                          const Tactic& tactic) override;
};

}  // namespace proofsearch::mini

#endif  // PROOFSEARCH_MINI_ENGINE_H_
