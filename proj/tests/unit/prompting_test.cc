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

#include <gtest/gtest.h>

#include <random>

#include "proofsearch/errors.h"
#include "test_support.h"

namespace proofsearch {
namespace {

ProofState single_goal() {
  return ProofState({Obligation("S (n + 1) = S (S n)",
                                {"IHn : n + 1 = 1 + n", "n : nat"})});
}

ProofState two_goals() {
  return ProofState(
      {Obligation("Z + Z = Z", {}),
       Obligation("Z + S n' = S n'", {"n' : nat", "IH : Z + n' = n'"})});
}

TEST(FormatPrompt, MatchesGoldenFiles) {
  EXPECT_EQ(format_prompt(single_goal()).text,
            testing::read_file(testing::golden_dir() / "prompt_single_goal.txt"));
  EXPECT_EQ(format_prompt(two_goals()).text,
            testing::read_file(testing::golden_dir() / "prompt_two_goals.txt"));
}

TEST(FormatPrompt, RoundTrips) {
  EXPECT_EQ(parse_prompt(format_prompt(single_goal()).text), single_goal());
  EXPECT_EQ(parse_prompt(format_prompt(two_goals()).text), two_goals());
}

TEST(FormatPrompt, RandomStatesRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const ProofState s = testing::random_state(rng);
    EXPECT_EQ(parse_prompt(format_prompt(s).text), s);
  }
}

TEST(FormatPrompt, TruncatesHypothesesFromTheEnd) {
  const std::string full = format_prompt(two_goals()).text;
  const std::string last_line = "[HYPOTHESIS] IH : Z + n' = n'\n";
  const Prompt cut = format_prompt(two_goals(), full.size() - 1);
  EXPECT_LE(cut.text.size(), full.size() - 1);
  EXPECT_EQ(cut.text.find("[HYPOTHESIS] IH"), std::string::npos);
  EXPECT_NE(cut.text.find("[HYPOTHESIS] n' : nat"), std::string::npos);
  EXPECT_EQ(cut.text.size(), full.size() - last_line.size());

  const std::string goals_only =
      "Goals to prove:\n[GOALS]\n[GOAL] 1\n Z + Z = Z\n[HYPOTHESES] 1\n"
      "[GOAL] 2\n Z + S n' = S n'\n[HYPOTHESES] 2\n[END]";
  EXPECT_EQ(format_prompt(two_goals(), goals_only.size()).text, goals_only);
  EXPECT_THROW(format_prompt(two_goals(), goals_only.size() - 1), Error);
}

TEST(FormatPrompt, Errors) {
  EXPECT_THROW(format_prompt(ProofState::qed()), std::invalid_argument);
  EXPECT_THROW(format_prompt(two_goals(), 20), Error);
}

TEST(ParsePrompt, RejectsMalformed) {
  EXPECT_THROW(parse_prompt(""), ParseError);
  EXPECT_THROW(parse_prompt("Goals to prove:\n[GOALS]\n[END]"), ParseError);
  EXPECT_THROW(parse_prompt("Goals to prove:\n[GOALS]\n[GOAL] 2\n x\n"
                            "[HYPOTHESES] 2\n[END]"),
               ParseError);
  EXPECT_THROW(parse_prompt("Goals to prove:\n[GOALS]\n[GOAL] 1\n x\n"
                            "[HYPOTHESES] 1\n"),
               ParseError);
}

TEST(Response, WrapAndParse) {
  EXPECT_EQ(wrap_response("auto."), "[RUN TACTIC]\n auto.\n[END]");
  EXPECT_EQ(parse_response(wrap_response("simp [segment_eq_image']")).text(),
            "simp [segment_eq_image']");
  EXPECT_EQ(parse_response("noise [RUN TACTIC]\n  rw h \n\n  foo\n[END] tail")
                .text(),
            "rw h foo");
  EXPECT_THROW(parse_response("rw h"), ParseError);
  EXPECT_THROW(parse_response("[RUN TACTIC] rw h"), ParseError);
  EXPECT_THROW(parse_response("[RUN TACTIC]\n  \n[END]"), ParseError);
}

TEST(Response, FuzzedTacticsRoundTrip) {
  std::mt19937_64 rng(17);
  const std::string alphabet =
      "abcxyzSZ0123456789 +*=()[]{}',.;:_-<>|\\\"/\t\xce\xbb";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const auto len = std::uniform_int_distribution<int>(1, 40)(rng);
    for (int j = 0; j < len; ++j) {
      s += alphabet[std::uniform_int_distribution<std::size_t>(
          0, alphabet.size() - 1)(rng)];
    }
    std::optional<Tactic> t;
    try {
      t.emplace(s);
    } catch (const std::invalid_argument&) {
      continue;
    }
    EXPECT_EQ(parse_response(wrap_response(t->text())), *t) << s;
  }
}

}  // namespace
}  // namespace proofsearch
