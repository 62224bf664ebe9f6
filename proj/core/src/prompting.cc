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

#include "proofsearch/prompting.h"

#include <stdexcept>
#include <vector>

#include "proofsearch/errors.h"

namespace proofsearch {
namespace {

constexpr std::string_view kHeader = "Goals to prove:";
constexpr std::string_view kGoals = "[GOALS]";
constexpr std::string_view kGoal = "[GOAL] ";
constexpr std::string_view kHypotheses = "[HYPOTHESES] ";
constexpr std::string_view kHypothesis = "[HYPOTHESIS] ";
constexpr std::string_view kEnd = "[END]";
constexpr std::string_view kRunTactic = "[RUN TACTIC]";

struct Line {
  std::string text;
  bool droppable = false;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool starts_with(std::string_view s, std::string_view p) {
  return s.substr(0, p.size()) == p;
}

}  // namespace

Prompt format_prompt(const ProofState& state, std::size_t max_chars) {
  if (state.empty()) throw std::invalid_argument("cannot prompt a QED state");
  std::vector<Line> lines;
  lines.push_back({std::string(kHeader)});
  lines.push_back({std::string(kGoals)});
  for (std::size_t k = 0; k < state.size(); ++k) {
    const Obligation& o = state.obligations()[k];
    const std::string idx = std::to_string(k + 1);
    lines.push_back({std::string(kGoal) + idx});
    lines.push_back({" " + o.goal()});
    lines.push_back({std::string(kHypotheses) + idx});
    for (const auto& h : o.hypotheses()) {
      lines.push_back({std::string(kHypothesis) + h, true});
    }
  }
  lines.push_back({std::string(kEnd)});

  std::size_t total = lines.size() - 1;
  for (const auto& l : lines) total += l.text.size();
  std::vector<bool> dropped(lines.size(), false);
  for (std::size_t i = lines.size(); i > 0 && total > max_chars; --i) {
    if (!lines[i - 1].droppable) continue;
    dropped[i - 1] = true;
    total -= lines[i - 1].text.size() + 1;
  }
  if (total > max_chars) {
    throw Error("prompt budget of " + std::to_string(max_chars) +
                " chars cannot hold the goals (" + std::to_string(total) +
                " needed)");
  }
  Prompt p;
  p.text.reserve(total);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (dropped[i]) continue;
    if (!p.text.empty()) p.text += '\n';
    p.text += lines[i].text;
  }
  return p;
}

ProofState parse_prompt(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError(what, static_cast<int>(i + 1), 1);
  };
  auto expect = [&](std::string_view want) {
    if (i >= lines.size() || lines[i] != want) {
      throw fail("expected '" + std::string(want) + "'");
    }
    ++i;
  };
  expect(kHeader);
  expect(kGoals);
  std::vector<Obligation> obligations;
  while (i < lines.size() && starts_with(lines[i], kGoal)) {
    const std::string idx = std::to_string(obligations.size() + 1);
    expect(std::string(kGoal) + idx);
    if (i >= lines.size() || !starts_with(lines[i], " ")) {
      throw fail("expected an indented goal line");
    }
    std::string goal(lines[i].substr(1));
    ++i;
    expect(std::string(kHypotheses) + idx);
    std::vector<std::string> hyps;
    while (i < lines.size() && starts_with(lines[i], kHypothesis)) {
      hyps.emplace_back(lines[i].substr(kHypothesis.size()));
      ++i;
    }
    try {
      obligations.emplace_back(std::move(goal), std::move(hyps));
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
  }
  expect(kEnd);
  if (i != lines.size()) throw fail("trailing text after [END]");
  if (obligations.empty()) throw fail("prompt lists no goals");
  return ProofState(std::move(obligations));
}

std::string wrap_response(std::string_view tactic) {
  return std::string(kRunTactic) + "\n " + std::string(tactic) + "\n" +
         std::string(kEnd);
}

Tactic parse_response(std::string_view text) {
  const auto open = text.find(kRunTactic);
  if (open == std::string_view::npos) {
    throw ParseError("missing [RUN TACTIC] marker", 1, 1);
  }
  const auto body_start = open + kRunTactic.size();
  const auto close = text.find(kEnd, body_start);
  if (close == std::string_view::npos) {
    throw ParseError("missing [END] marker", 1,
                     static_cast<int>(body_start + 1));
  }
  const std::string_view body = text.substr(body_start, close - body_start);
  std::string joined;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto nl = body.find('\n', pos);
    if (nl == std::string_view::npos) nl = body.size();
    const auto piece = trim(body.substr(pos, nl - pos));
    if (!piece.empty()) {
      if (!joined.empty()) joined += ' ';
      joined += piece;
    }
    pos = nl + 1;
  }
  if (joined.empty()) {
    throw ParseError("empty tactic", 1, static_cast<int>(body_start + 1));
  }
  return Tactic(joined);
}

}  // namespace proofsearch
