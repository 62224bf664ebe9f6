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

#ifndef PROOFSEARCH_MINI_TERM_H_
#define PROOFSEARCH_MINI_TERM_H_

// Terms and goals of the MiniITP calculus: Peano naturals with addition and
// multiplication.
//
//   term := "Z" | "S" term | NAME | term "+" term | term "*" term | "(" term ")"
//
// "S" binds tightest, then "*", then "+"; both binary operators are left
// associative. Printing is canonical: parse(print(t)) == t and the printed
// form is the text that appears in proof states.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proofsearch::mini {

class Term {
 public:
  enum class Kind { kZero, kSucc, kVar, kAdd, kMul };

  static Term zero();
  static Term succ(Term arg);
  static Term var(std::string name);
  static Term add(Term lhs, Term rhs);
  static Term mul(Term lhs, Term rhs);

  Kind kind() const { return kind_; }
  // kVar only.
  const std::string& name() const { return name_; }
  // kSucc: arg(0); kAdd/kMul: arg(0) lhs, arg(1) rhs.
  const Term& arg(std::size_t i) const { return args_[i]; }
  const std::vector<Term>& args() const { return args_; }

  std::size_t size() const;
  bool mentions(std::string_view var_name) const;

  bool operator==(const Term&) const = default;

 private:
  Term(Kind kind, std::string name, std::vector<Term> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_ = Kind::kZero;
  std::string name_;
  std::vector<Term> args_;
};

// Leading universally quantified binders then an equation.
struct MiniGoal {
  std::vector<std::string> binders;
  Term lhs = Term::zero();
  Term rhs = Term::zero();

  bool operator==(const MiniGoal&) const = default;
};

bool is_identifier(std::string_view name);
// "Z", "S" and "forall" are reserved.
bool is_reserved(std::string_view name);

// Throw ParseError (1-based line/column relative to `text`).
Term parse_term(std::string_view text);
MiniGoal parse_goal(std::string_view text);

std::string print_term(const Term& t);
// "forall a, b, lhs = rhs" or "lhs = rhs".
std::string print_goal(const MiniGoal& goal);

Term substitute(const Term& t, std::string_view var_name,
                const Term& replacement);
// Substitutes in both sides unless `var_name` is one of the goal's binders.
MiniGoal substitute(const MiniGoal& goal, std::string_view var_name,
                    const Term& replacement);

// Replaces the leftmost (pre-order) occurrence of `pattern`; nullopt if none.
std::optional<Term> replace_leftmost(const Term& t, const Term& pattern,
                                     const Term& replacement);

struct NormalizeResult {
  Term term;
  bool rewritten = false;
};

// Rewrites to normal form under
//   t + Z -> t,  t + S u -> S (t + u),  t * Z -> Z,  t * S u -> (t * u) + t
// innermost first. Throws std::length_error once the term would exceed
// `max_nodes`.
NormalizeResult normalize(const Term& t, std::size_t max_nodes = 20000);

}  // namespace proofsearch::mini

#endif  // PROOFSEARCH_MINI_TERM_H_
