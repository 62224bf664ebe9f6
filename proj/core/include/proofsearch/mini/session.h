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

#ifndef PROOFSEARCH_MINI_SESSION_H_
#define PROOFSEARCH_MINI_SESSION_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "proofsearch/env/protocol.h"
#include "proofsearch/kernel.h"

namespace proofsearch::mini {

// Server side of the adapter protocol backed by the MiniITP engine. Owns the
// state-id table of one backend instance.
class Session {
 public:
  // Returns the reply line, or nullopt after "shutdown" (no reply is sent).
  std::optional<std::string> handle(std::string_view line);

  bool shut_down() const { return shut_down_; }
  std::size_t live_states() const { return states_.size(); }
  std::size_t applies_handled() const { return applies_; }

 private:
  std::string init(const TheoremStatement& theorem);
  std::string apply(env::StateId id, const std::string& tactic);

  std::map<env::StateId, ProofState> states_;
  env::StateId next_id_ = 0;
  std::size_t applies_ = 0;
  bool shut_down_ = false;
};

}  // namespace proofsearch::mini

#endif  // PROOFSEARCH_MINI_SESSION_H_
