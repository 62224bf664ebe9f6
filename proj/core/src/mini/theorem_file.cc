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

#include "proofsearch/mini/theorem_file.h"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "proofsearch/errors.h"

namespace proofsearch::mini {
namespace {

struct Line {
  std::string text;
  int number;
  // 1-based column of the first non-blank character.
  int indent;
  std::string trimmed;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string raw(text.substr(start, end - start));
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto b = raw.find_first_not_of(" \t");
    Line l{raw, number, 1, {}};
    if (b != std::string::npos) {
      const auto e = raw.find_last_not_of(" \t");
      l.indent = static_cast<int>(b) + 1;
      l.trimmed = raw.substr(b, e - b + 1);
    }
    lines.push_back(std::move(l));
    ++number;
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

// Theorem names also admit '_' (e.g. add_zero).
bool is_theorem_name(const std::string& name) {
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') {
    return false;
  }
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') {
      return false;
    }
  }
  return true;
}

bool is_skippable(const Line& l) {
  return l.trimmed.empty() || l.trimmed.rfind("--", 0) == 0;
}

bool starts_header(const Line& l) {
  return l.trimmed.rfind("theorem", 0) == 0 &&
         (l.trimmed.size() == 7 || l.trimmed[7] == ' ' || l.trimmed[7] == '\t');
}

Theorem parse_header(const Line& l) {
  const std::string& s = l.trimmed;
  std::size_t pos = 7;
  auto skip_ws = [&] {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  };
  auto col = [&](std::size_t p) { return l.indent + static_cast<int>(p); };

  skip_ws();
  const std::size_t name_begin = pos;
  while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != ':') {
    ++pos;
  }
  Theorem thm;
  thm.name = s.substr(name_begin, pos - name_begin);
  thm.line = l.number;
  if (thm.name.empty()) {
    throw ParseError("expected theorem name", l.number, col(name_begin));
  }
  if (!is_theorem_name(thm.name)) {
    throw ParseError("invalid theorem name '" + thm.name + "'", l.number,
                     col(name_begin));
  }
  skip_ws();
  if (pos >= s.size() || s[pos] != ':') {
    throw ParseError("expected ':' after theorem name", l.number, col(pos));
  }
  ++pos;
  if (s.back() != '.') {
    throw ParseError("statement must end with '.'", l.number,
                     col(s.size() - 1));
  }
  const std::string stmt = s.substr(pos, s.size() - 1 - pos);
  try {
    thm.statement = parse_goal(stmt);
  } catch (const ParseError& e) {
    // Statement errors are single-line; shift into file coordinates.
    throw ParseError(e.message(), l.number, col(pos) + e.column() - 1);
  }
  return thm;
}

}  // namespace

TheoremFile parse_theorem_file(std::string_view text) {
  TheoremFile file;
  std::unordered_map<std::string, int> seen;
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size()) {
    const Line& l = lines[i];
    if (is_skippable(l)) {
      ++i;
      continue;
    }
    if (!starts_header(l)) {
      throw ParseError("expected 'theorem'", l.number, l.indent);
    }
    Theorem thm = parse_header(l);
    if (auto it = seen.find(thm.name); it != seen.end()) {
      throw ParseError("duplicate theorem name '" + thm.name +
                           "' (first defined on line " +
                           std::to_string(it->second) + ")",
                       l.number, l.indent);
    }
    seen.emplace(thm.name, l.number);
    ++i;
    bool closed = false;
    for (; i < lines.size(); ++i) {
      const Line& t = lines[i];
      if (is_skippable(t)) continue;
      if (t.trimmed == "qed.") {
        closed = true;
        ++i;
        break;
      }
      if (starts_header(t)) {
        throw ParseError("missing 'qed.' before next theorem", t.number,
                         t.indent);
      }
      if (t.trimmed.back() != '.') {
        throw ParseError("tactic line must end with '.'", t.number,
                         t.indent + static_cast<int>(t.trimmed.size()) - 1);
      }
      const std::string body = t.trimmed.substr(0, t.trimmed.size() - 1);
      try {
        thm.proof.emplace_back(body);
      } catch (const std::invalid_argument&) {
        throw ParseError("empty tactic", t.number, t.indent);
      }
    }
    if (!closed) {
      throw ParseError("unexpected end of file: missing 'qed.'",
                       lines.back().number, 1);
    }
    file.theorems.push_back(std::move(thm));
  }
  return file;
}

TheoremFile load_theorem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read theorem file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_theorem_file(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.message(), e.line(),
                     e.column());
  }
}

std::string print_theorem_file(const TheoremFile& file) {
  std::string out;
  bool first = true;
  for (const auto& thm : file.theorems) {
    if (!first) out += '\n';
    first = false;
    out += "theorem " + thm.name + " : " + print_goal(thm.statement) + ".\n";
    for (const auto& t : thm.proof) out += "  " + t.text() + ".\n";
    out += "qed.\n";
  }
  return out;
}

}  // namespace proofsearch::mini
