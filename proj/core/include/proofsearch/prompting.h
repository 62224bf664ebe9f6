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

#ifndef PROOFSEARCH_PROMPTING_H_
#define PROOFSEARCH_PROMPTING_H_

// Prompt format v1:
//
//   Goals to prove:
//   [GOALS]
//   [GOAL] 1
//    <goal text>
//   [HYPOTHESES] 1
//   [HYPOTHESIS] <hypothesis>
//   ...
//   [END]
//
// Responses carry one tactic between "[RUN TACTIC]" and "[END]".

#include <cstddef>
#include <string>
#include <string_view>

#include "proofsearch/kernel.h"

namespace proofsearch {

inline constexpr std::string_view kPromptFormatVersion = "v1";
inline constexpr std::size_t kDefaultPromptChars = 8192;

struct Prompt {
  std::string text;
  bool operator==(const Prompt&) const = default;
};

// Drops hypothesis lines, last listed first, until the text fits
// `max_chars`. Throws std::invalid_argument for a QED state and Error when
// the goals alone do not fit.
Prompt format_prompt(const ProofState& state,
                     std::size_t max_chars = kDefaultPromptChars);

// Inverse of format_prompt for untruncated prompts. Throws ParseError.
ProofState parse_prompt(std::string_view text);

std::string wrap_response(std::string_view tactic);

// Content between the first "[RUN TACTIC]" and the next "[END]", each line
// trimmed and the non-empty lines joined with single spaces. Throws
// ParseError when a marker is missing or the content is empty.
Tactic parse_response(std::string_view text);

}  // namespace proofsearch

#endif  // PROOFSEARCH_PROMPTING_H_
