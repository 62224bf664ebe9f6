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

#include "proofsearch/mini/term.h"

#include <cctype>
#include <stdexcept>
#include <unordered_set>

#include "proofsearch/errors.h"

namespace proofsearch::mini {

Term Term::zero() { return Term(Kind::kZero, {}, {}); }
Term Term::succ(Term arg) { return Term(Kind::kSucc, {}, {std::move(arg)}); }
Term Term::var(std::string name) {
  return Term(Kind::kVar, std::move(name), {});
}
Term Term::add(Term lhs, Term rhs) {
  return Term(Kind::kAdd, {}, {std::move(lhs), std::move(rhs)});
}
Term Term::mul(Term lhs, Term rhs) {
  return Term(Kind::kMul, {}, {std::move(lhs), std::move(rhs)});
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

bool Term::mentions(std::string_view var_name) const {
  if (kind_ == Kind::kVar) return name_ == var_name;
  for (const auto& a : args_) {
    if (a.mentions(var_name)) return true;
  }
  return false;
}

bool is_reserved(std::string_view name) {
  return name == "Z" || name == "S" || name == "forall";
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
    return false;
  }
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '\'') {
      return false;
    }
  }
  return true;
}

namespace {

enum class Tok { kIdent, kLParen, kRParen, kPlus, kStar, kEq, kComma, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::kEnd, "", line_, column_});
        return out;
      }
      const char c = text_[pos_];
      const int line = line_, column = column_;
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string word;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '\'')) {
          word += text_[pos_];
          advance();
        }
        out.push_back({Tok::kIdent, std::move(word), line, column});
        continue;
      }
      Tok kind;
      switch (c) {
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case '+': kind = Tok::kPlus; break;
        case '*': kind = Tok::kStar; break;
        case '=': kind = Tok::kEq; break;
        case ',': kind = Tok::kComma; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'",
                           line, column);
      }
      advance();
      out.push_back({kind, std::string(1, c), line, column});
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Term term() {
    Term t = product();
    while (peek().kind == Tok::kPlus) {
      next();
      t = Term::add(std::move(t), product());
    }
    return t;
  }

  MiniGoal goal() {
    MiniGoal g;
    if (peek().kind == Tok::kIdent && peek().text == "forall") {
      next();
      std::unordered_set<std::string> seen;
      do {
        const Token& name = expect(Tok::kIdent, "binder name");
        if (is_reserved(name.text)) {
          throw ParseError("reserved word used as binder: " + name.text,
                           name.line, name.column);
        }
        if (!seen.insert(name.text).second) {
          throw ParseError("duplicate binder: " + name.text, name.line,
                           name.column);
        }
        g.binders.push_back(name.text);
        expect(Tok::kComma, "','");
        // Another binder follows iff the next two tokens are NAME ",".
      } while (peek().kind == Tok::kIdent && !is_reserved(peek().text) &&
               peek(1).kind == Tok::kComma);
    }
    g.lhs = term();
    expect(Tok::kEq, "'='");
    g.rhs = term();
    return g;
  }

  void finish() {
    if (peek().kind != Tok::kEnd) {
      throw ParseError("unexpected '" + peek().text + "'", peek().line,
                       peek().column);
    }
  }

 private:
  Term product() {
    Term t = unary();
    while (peek().kind == Tok::kStar) {
      next();
      t = Term::mul(std::move(t), unary());
    }
    return t;
  }

  Term unary() {
    const Token& tok = peek();
    if (tok.kind == Tok::kIdent && tok.text == "S") {
      next();
      return Term::succ(unary());
    }
    return atom();
  }

  Term atom() {
    const Token& tok = next();
    switch (tok.kind) {
      case Tok::kIdent:
        if (tok.text == "Z") return Term::zero();
        if (is_reserved(tok.text)) {
          throw ParseError("unexpected '" + tok.text + "'", tok.line,
                           tok.column);
        }
        return Term::var(tok.text);
      case Tok::kLParen: {
        Term inner = term();
        expect(Tok::kRParen, "')'");
        return inner;
      }
      default:
        throw ParseError(
            tok.kind == Tok::kEnd ? "unexpected end of term"
                                  : "unexpected '" + tok.text + "'",
            tok.line, tok.column);
    }
  }

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      throw ParseError(std::string("expected ") + what, peek().line,
                       peek().column);
    }
    return next();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

bool is_atomic(const Term& t) {
  return t.kind() == Term::Kind::kZero || t.kind() == Term::Kind::kVar;
}

void print(const Term& t, std::string& out);

void print_parenthesized(const Term& t, bool parens, std::string& out) {
  if (parens) out += '(';
  print(t, out);
  if (parens) out += ')';
}

void print(const Term& t, std::string& out) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::kZero:
      out += 'Z';
      return;
    case K::kVar:
      out += t.name();
      return;
    case K::kSucc:
      out += "S ";
      print_parenthesized(t.arg(0), !is_atomic(t.arg(0)), out);
      return;
    case K::kAdd:
      print(t.arg(0), out);
      out += " + ";
      print_parenthesized(t.arg(1), t.arg(1).kind() == K::kAdd, out);
      return;
    case K::kMul:
      print_parenthesized(t.arg(0), t.arg(0).kind() == K::kAdd, out);
      out += " * ";
      print_parenthesized(
          t.arg(1),
          t.arg(1).kind() == K::kAdd || t.arg(1).kind() == K::kMul, out);
      return;
  }
}

class Normalizer {
 public:
  explicit Normalizer(std::size_t budget) : budget_(budget) {}

  Term run(const Term& t) {
    using K = Term::Kind;
    switch (t.kind()) {
      case K::kZero:
      case K::kVar:
        return t;
      case K::kSucc:
        return Term::succ(run(t.arg(0)));
      case K::kAdd:
        return add(run(t.arg(0)), run(t.arg(1)));
      case K::kMul:
        return mul(run(t.arg(0)), run(t.arg(1)));
    }
    return t;
  }

  bool rewritten() const { return rewritten_; }

 private:
  // Both operands are in normal form.
  Term add(Term a, const Term& b) {
    if (b.kind() == Term::Kind::kZero) {
      charge(1);
      return a;
    }
    if (b.kind() == Term::Kind::kSucc) {
      charge(1);
      return Term::succ(add(std::move(a), b.arg(0)));
    }
    return Term::add(std::move(a), b);
  }

  Term mul(const Term& a, const Term& b) {
    if (b.kind() == Term::Kind::kZero) {
      charge(1);
      return Term::zero();
    }
    if (b.kind() == Term::Kind::kSucc) {
      charge(a.size());
      return add(mul(a, b.arg(0)), a);
    }
    return Term::mul(a, b);
  }

  void charge(std::size_t n) {
    rewritten_ = true;
    if (n > budget_) throw std::length_error("simp: term grew beyond limit");
    budget_ -= n;
  }

  std::size_t budget_;
  bool rewritten_ = false;
};

}  // namespace

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

MiniGoal parse_goal(std::string_view text) {
  Parser p(text);
  MiniGoal g = p.goal();
  p.finish();
  return g;
}

std::string print_term(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

std::string print_goal(const MiniGoal& goal) {
  std::string out;
  if (!goal.binders.empty()) {
    out += "forall ";
    for (const auto& b : goal.binders) {
      out += b;
      out += ", ";
    }
  }
  print(goal.lhs, out);
  out += " = ";
  print(goal.rhs, out);
  return out;
}

Term substitute(const Term& t, std::string_view var_name,
                const Term& replacement) {
  if (t.kind() == Term::Kind::kVar) {
    return t.name() == var_name ? replacement : t;
  }
  switch (t.kind()) {
    case Term::Kind::kSucc:
      return Term::succ(substitute(t.arg(0), var_name, replacement));
    case Term::Kind::kAdd:
      return Term::add(substitute(t.arg(0), var_name, replacement),
                       substitute(t.arg(1), var_name, replacement));
    case Term::Kind::kMul:
      return Term::mul(substitute(t.arg(0), var_name, replacement),
                       substitute(t.arg(1), var_name, replacement));
    default:
      return t;
  }
}

MiniGoal substitute(const MiniGoal& goal, std::string_view var_name,
                    const Term& replacement) {
  for (const auto& b : goal.binders) {
    if (b == var_name) return goal;
  }
  return MiniGoal{goal.binders, substitute(goal.lhs, var_name, replacement),
                  substitute(goal.rhs, var_name, replacement)};
}

std::optional<Term> replace_leftmost(const Term& t, const Term& pattern,
                                     const Term& replacement) {
  if (t == pattern) return replacement;
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (auto r = replace_leftmost(t.arg(i), pattern, replacement)) {
      switch (t.kind()) {
        case Term::Kind::kSucc:
          return Term::succ(std::move(*r));
        case Term::Kind::kAdd:
          return i == 0 ? Term::add(std::move(*r), t.arg(1))
                        : Term::add(t.arg(0), std::move(*r));
        case Term::Kind::kMul:
          return i == 0 ? Term::mul(std::move(*r), t.arg(1))
                        : Term::mul(t.arg(0), std::move(*r));
        default:
          break;
      }
    }
  }
  return std::nullopt;
}

NormalizeResult normalize(const Term& t, std::size_t max_nodes) {
  Normalizer n(max_nodes);
  Term out = n.run(t);
  return {std::move(out), n.rewritten()};
}

}  // namespace proofsearch::mini
