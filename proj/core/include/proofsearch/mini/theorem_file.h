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

#ifndef PROOFSEARCH_MINI_THEOREM_FILE_H_
#define PROOFSEARCH_MINI_THEOREM_FILE_H_

// Theorem files are the stand-in proof repository format:
//
//   file        := { theorem }
//   theorem     := "theorem" NAME ":" statement "." { tactic-line } "qed."
//   tactic-line := TACTIC-TEXT "."   (on its own line)
//
// Lines starting with "--" are comments.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "proofsearch/kernel.h"
#include "proofsearch/mini/term.h"

namespace proofsearch::mini {

struct Theorem {
  std::string name;
  MiniGoal statement;
  ProofScript proof;
  int line = 0;

  TheoremStatement as_statement() const {
    return {name, print_goal(statement)};
  }
};

struct TheoremFile {
  std::vector<Theorem> theorems;
};

// Throws ParseError with line and column, including for duplicate names.
TheoremFile parse_theorem_file(std::string_view text);
TheoremFile load_theorem_file(const std::filesystem::path& path);

std::string print_theorem_file(const TheoremFile& file);

}  // namespace proofsearch::mini

#endif  // PROOFSEARCH_MINI_THEOREM_FILE_H_
