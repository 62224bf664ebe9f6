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

#include "proofsearch/mini/engine.h"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

#include "proofsearch/errors.h"

namespace proofsearch::mini {
namespace {

struct Hypothesis {
  std::string name;
  // nullopt for a declaration "x : nat".
  std::optional<MiniGoal> statement;
};

Hypothesis parse_hypothesis(const std::string& text) {
  const auto sep = text.find(" : ");
  if (sep == std::string::npos) {
    throw ParseError("hypothesis lacks ' : ': " + text, 1, 1);
  }
  Hypothesis h{text.substr(0, sep), std::nullopt};
  const std::string body = text.substr(sep + 3);
  if (body != "nat") h.statement = parse_goal(body);
  return h;
}

std::string render(const Hypothesis& h) {
  return h.name + " : " + (h.statement ? print_goal(*h.statement) : "nat");
}

// Parsed view of the focused obligation.
struct Focus {
  MiniGoal goal;
  std::vector<Hypothesis> hyps;

  const Hypothesis* find(std::string_view name) const {
    for (const auto& h : hyps) {
      if (h.name == name) return &h;
    }
    return nullptr;
  }

  Obligation to_obligation() const {
    std::vector<std::string> lines;
    lines.reserve(hyps.size());
    for (const auto& h : hyps) lines.push_back(render(h));
    return Obligation(print_goal(goal), std::move(lines));
  }
};

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind() == Term::Kind::kVar) out.insert(t.name());
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_names(const MiniGoal& g, std::set<std::string>& out) {
  out.insert(g.binders.begin(), g.binders.end());
  collect_vars(g.lhs, out);
  collect_vars(g.rhs, out);
}

std::string fresh_name(std::string base, const std::set<std::string>& used) {
  while (used.count(base)) base += '\'';
  return base;
}

// Replaces obligation 0 with `replacement` (possibly empty).
TransitionOutcome replace_focus(const ProofState& state,
                                std::vector<Obligation> replacement) {
  std::vector<Obligation> obs = std::move(replacement);
  obs.insert(obs.end(), state.obligations().begin() + 1,
             state.obligations().end());
  return Applied{ProofState(std::move(obs))};
}

TransitionOutcome close_focus(const ProofState& state) {
  return replace_focus(state, {});
}

TransitionOutcome with_goal(const ProofState& state, const Focus& focus,
                            MiniGoal goal) {
  if (goal.binders.empty() && goal.lhs == goal.rhs) return close_focus(state);
  Focus next{std::move(goal), focus.hyps};
  return replace_focus(state, {next.to_obligation()});
}

TransitionOutcome do_intro(const ProofState& state, const Focus& f,
                           const std::string& x) {
  if (f.goal.binders.empty() || f.goal.binders.front() != x) {
    return Failed{"goal does not begin with binder " + x};
  }
  if (f.find(x)) return Failed{"name already in use: " + x};
  Focus next = f;
  next.goal.binders.erase(next.goal.binders.begin());
  next.hyps.push_back({x, std::nullopt});
  return replace_focus(state, {next.to_obligation()});
}

TransitionOutcome do_refl(const ProofState& state, const Focus& f) {
  if (!f.goal.binders.empty()) return Failed{"goal has leading binders"};
  if (f.goal.lhs == f.goal.rhs) return close_focus(state);
  return Failed{"sides are not syntactically identical"};
}

TransitionOutcome do_simp(const ProofState& state, const Focus& f) {
  if (!f.goal.binders.empty()) return Failed{"goal has leading binders"};
  std::optional<NormalizeResult> lhs, rhs;
  try {
    lhs = normalize(f.goal.lhs);
    rhs = normalize(f.goal.rhs);
  } catch (const std::length_error& e) {
    return Failed{e.what()};
  }
  if (lhs->term == rhs->term) return close_focus(state);
  if (!lhs->rewritten && !rhs->rewritten) {
    return Failed{"simp made no progress"};
  }
  return with_goal(state, f, MiniGoal{{}, lhs->term, rhs->term});
}

TransitionOutcome do_rw(const ProofState& state, const Focus& f,
                        const std::string& name) {
  const Hypothesis* h = f.find(name);
  if (!h) return Failed{"no such hypothesis"};
  if (!h->statement || !h->statement->binders.empty()) {
    return Failed{"hypothesis " + name + " is not an equality"};
  }
  if (!f.goal.binders.empty()) return Failed{"goal has leading binders"};
  const Term& from = h->statement->lhs;
  const Term& to = h->statement->rhs;
  MiniGoal g = f.goal;
  if (auto r = replace_leftmost(g.lhs, from, to)) {
    g.lhs = std::move(*r);
  } else if (auto r2 = replace_leftmost(g.rhs, from, to)) {
    g.rhs = std::move(*r2);
  } else {
    return Failed{"no occurrence of " + print_term(from) + " in goal"};
  }
  return with_goal(state, f, std::move(g));
}

TransitionOutcome do_exact(const ProofState& state, const Focus& f,
                           const std::string& name) {
  const Hypothesis* h = f.find(name);
  if (!h) return Failed{"no such hypothesis"};
  if (h->statement && *h->statement == f.goal) return close_focus(state);
  return Failed{"hypothesis " + name + " does not match the goal"};
}

TransitionOutcome do_induction(const ProofState& state, const Focus& f,
                               const std::string& x) {
  const Hypothesis* decl = f.find(x);
  if (!decl || decl->statement) {
    return Failed{x + " is not a declared natural"};
  }
  for (const auto& h : f.hyps) {
    if (h.statement && (h.statement->lhs.mentions(x) ||
                        h.statement->rhs.mentions(x))) {
      return Failed{x + " occurs in hypothesis " + h.name};
    }
  }
  std::set<std::string> used;
  collect_names(f.goal, used);
  for (const auto& h : f.hyps) {
    used.insert(h.name);
    if (h.statement) collect_names(*h.statement, used);
  }
  const std::string pred = fresh_name(x + "'", used);
  used.insert(pred);
  const std::string ih = fresh_name("IH", used);

  std::vector<Hypothesis> rest;
  for (const auto& h : f.hyps) {
    if (h.name != x) rest.push_back(h);
  }

  Focus base{substitute(f.goal, x, Term::zero()), rest};
  Focus step{substitute(f.goal, x, Term::succ(Term::var(pred))), rest};
  step.hyps.push_back({pred, std::nullopt});
  step.hyps.push_back({ih, substitute(f.goal, x, Term::var(pred))});
  return replace_focus(state, {base.to_obligation(), step.to_obligation()});
}

// Splits "verb [arg]"; a second argument is an error.
bool split_tactic(const std::string& text, std::string& verb,
                  std::string& arg) {
  const auto sp = text.find_first_of(" \t");
  if (sp == std::string::npos) {
    verb = text;
    arg.clear();
    return true;
  }
  verb = text.substr(0, sp);
  const auto begin = text.find_first_not_of(" \t", sp);
  arg = text.substr(begin);
  return arg.find_first_of(" \t") == std::string::npos;
}

}  // namespace

ProofState initial_state(std::string_view statement) {
  const MiniGoal g = parse_goal(statement);
  return ProofState({Obligation(print_goal(g), {})});
}

TransitionOutcome mini_apply(const ProofState& state, const Tactic& tactic) {
  if (state.empty()) return Failed{"no goals"};
  std::string verb, arg;
  if (!split_tactic(tactic.text(), verb, arg)) {
    return Failed{"too many arguments: " + tactic.text()};
  }
  Focus f;
  try {
    const Obligation& ob = state.obligations().front();
    f.goal = parse_goal(ob.goal());
    for (const auto& h : ob.hypotheses()) f.hyps.push_back(parse_hypothesis(h));
  } catch (const ParseError& e) {
    return Failed{std::string("malformed state: ") + e.what()};
  }

  const bool takes_arg = verb == "intro" || verb == "rw" || verb == "exact" ||
                         verb == "induction";
  const bool nullary = verb == "refl" || verb == "simp";
  if (!takes_arg && !nullary) return Failed{"unknown tactic: " + verb};
  if (takes_arg && arg.empty()) return Failed{verb + " expects a name"};
  if (nullary && !arg.empty()) return Failed{verb + " takes no argument"};

  if (verb == "intro") return do_intro(state, f, arg);
  if (verb == "refl") return do_refl(state, f);
  if (verb == "simp") return do_simp(state, f);
  if (verb == "rw") return do_rw(state, f, arg);
  if (verb == "exact") return do_exact(state, f, arg);
  return do_induction(state, f, arg);
}

std::vector<Tactic> enumerate_applicable_tactics(const ProofState& state) {
  std::vector<Tactic> out;
  if (state.empty()) return out;
  const Obligation& ob = state.obligations().front();

  std::vector<std::string> candidates;
  try {
    const MiniGoal g = parse_goal(ob.goal());
    if (!g.binders.empty()) candidates.push_back("intro " + g.binders.front());
  } catch (const ParseError&) {
    return out;
  }
  candidates.push_back("refl");
  candidates.push_back("simp");
  std::vector<std::string> names;
  for (const auto& h : ob.hypotheses()) {
    names.emplace_back(hypothesis_name(h));
  }
  for (const auto& n : names) candidates.push_back("exact " + n);
  for (const auto& n : names) candidates.push_back("rw " + n);
  for (const auto& n : names) candidates.push_back("induction " + n);

  for (const auto& c : candidates) {
    Tactic t(c);
    if (mini_apply(state, t).applied()) out.push_back(std::move(t));
  }
  return out;
}

ProofState MiniEnvironment::start(const TheoremStatement& theorem) {
  return initial_state(theorem.statement);
}

TransitionOutcome MiniEnvironment::apply(const ProofState& state,
                                         const Tactic& tactic) {
  return mini_apply(state, tactic);
}

}  // namespace proofsearch::mini
