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

#include "proofsearch/env/protocol.h"

#include <stdexcept>

#include "proofsearch/errors.h"
#include "proofsearch/json_io.h"

namespace proofsearch::env {

using nlohmann::json;

json goals_to_json(const ProofState& state) {
  json goals = json::array();
  for (const auto& ob : state.obligations()) {
    goals.push_back({{"goal", ob.goal()}, {"hypotheses", ob.hypotheses()}});
  }
  return goals;
}

ProofState goals_from_json(const json& goals) {
  if (!goals.is_array()) throw std::invalid_argument("goals is not an array");
  std::vector<Obligation> obs;
  for (const auto& g : goals) {
    if (!g.is_object() || !g.contains("goal") || !g["goal"].is_string()) {
      throw std::invalid_argument("goal entry lacks a string 'goal'");
    }
    std::vector<std::string> hyps;
    if (g.contains("hypotheses")) {
      if (!g["hypotheses"].is_array()) {
        throw std::invalid_argument("'hypotheses' is not an array");
      }
      for (const auto& h : g["hypotheses"]) {
        if (!h.is_string()) {
          throw std::invalid_argument("hypothesis is not a string");
        }
        hyps.push_back(h.get<std::string>());
      }
    }
    obs.emplace_back(g["goal"].get<std::string>(), std::move(hyps));
  }
  return ProofState(std::move(obs));
}

std::string encode_init(const TheoremStatement& theorem) {
  return dump_line(json{{"cmd", "init"},
              {"theorem",
               {{"name", theorem.name}, {"statement", theorem.statement}}}});
}

std::string encode_apply(StateId id, const Tactic& tactic) {
  return dump_line(json{{"cmd", "apply"}, {"state_id", id}, {"tactic", tactic.text()}});
}

std::string encode_dispose(const std::vector<StateId>& ids) {
  return dump_line(json{{"cmd", "dispose"}, {"state_ids", ids}});
}

std::string encode_shutdown() { return dump_line(json{{"cmd", "shutdown"}}); }

Reply decode_reply(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw BackendFault(std::string("malformed reply: ") + e.what());
  }
  if (!j.is_object() || !j.contains("ok") || !j["ok"].is_boolean()) {
    throw BackendFault("reply lacks boolean 'ok': " + std::string(line));
  }
  Reply r;
  r.ok = j["ok"].get<bool>();
  if (!r.ok) {
    r.error = j.contains("error") && j["error"].is_string()
                  ? j["error"].get<std::string>()
                  : "unspecified error";
    return r;
  }
  if (j.contains("state_id")) {
    if (!j["state_id"].is_number_integer() || !j.contains("goals")) {
      throw BackendFault("reply has malformed state: " + std::string(line));
    }
    r.has_state = true;
    r.state_id = j["state_id"].get<StateId>();
    try {
      r.state = goals_from_json(j["goals"]);
    } catch (const std::invalid_argument& e) {
      throw BackendFault(std::string("reply has malformed goals: ") +
                         e.what());
    }
    if (j.contains("qed") && j["qed"].is_boolean() &&
        j["qed"].get<bool>() != r.state.empty()) {
      throw BackendFault("reply 'qed' disagrees with its goals");
    }
  }
  return r;
}

std::string encode_state_reply(StateId id, const ProofState& state) {
  return dump_line(json{{"ok", true},
              {"state_id", id},
              {"goals", goals_to_json(state)},
              {"qed", state.empty()}});
}

std::string encode_error_reply(std::string_view error) {
  return dump_line(json{{"ok", false}, {"error", error}});
}

std::string encode_ok_reply() { return dump_line(json{{"ok", true}}); }

}  // namespace proofsearch::env
