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

#ifndef PROOFSEARCH_ENV_PROTOCOL_H_
#define PROOFSEARCH_ENV_PROTOCOL_H_

// Adapter wire protocol: newline-delimited JSON over a backend's stdin and
// stdout, one object per line.
//
//   -> {"cmd":"init","theorem":{"name":..,"statement":..}}
//   <- {"ok":true,"state_id":0,"goals":[{"goal":..,"hypotheses":[..]}],"qed":false}
//   -> {"cmd":"apply","state_id":N,"tactic":..}
//   <- {"ok":true,"state_id":M,"goals":[..],"qed":bool} | {"ok":false,"error":..}
//   -> {"cmd":"dispose","state_ids":[..]}      <- {"ok":true}
//   -> {"cmd":"shutdown"}                      (backend exits 0)
//
// A failed apply creates no state id.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "proofsearch/kernel.h"

namespace proofsearch::env {

using StateId = std::int64_t;

nlohmann::json goals_to_json(const ProofState& state);
// Throws std::invalid_argument on schema violations.
ProofState goals_from_json(const nlohmann::json& goals);

std::string encode_init(const TheoremStatement& theorem);
std::string encode_apply(StateId id, const Tactic& tactic);
std::string encode_dispose(const std::vector<StateId>& ids);
std::string encode_shutdown();

struct Reply {
  bool ok = false;
  std::string error;
  // Only for ok replies to init/apply.
  bool has_state = false;
  StateId state_id = -1;
  ProofState state;
};

// Throws BackendFault when the line is not a well-formed reply.
Reply decode_reply(std::string_view line);

std::string encode_state_reply(StateId id, const ProofState& state);
std::string encode_error_reply(std::string_view error);
std::string encode_ok_reply();

}  // namespace proofsearch::env

#endif  // PROOFSEARCH_ENV_PROTOCOL_H_
