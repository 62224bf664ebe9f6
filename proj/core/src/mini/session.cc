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

#include "proofsearch/mini/session.h"

#include <nlohmann/json.hpp>

#include "proofsearch/errors.h"
#include "proofsearch/mini/engine.h"

namespace proofsearch::mini {

using nlohmann::json;

std::optional<std::string> Session::handle(std::string_view line) {
  json cmd;
  try {
    cmd = json::parse(line);
  } catch (const json::parse_error&) {
    return env::encode_error_reply("malformed command");
  }
  if (!cmd.is_object() || !cmd.contains("cmd") || !cmd["cmd"].is_string()) {
    return env::encode_error_reply("command lacks 'cmd'");
  }
  const std::string verb = cmd["cmd"].get<std::string>();
  if (verb == "init") {
    const auto& thm = cmd.value("theorem", json::object());
    if (!thm.is_object() || !thm.contains("statement") ||
        !thm["statement"].is_string()) {
      return env::encode_error_reply("init lacks theorem.statement");
    }
    const auto& name = thm.value("name", json(""));
    if (!name.is_string()) {
      return env::encode_error_reply("theorem.name is not a string");
    }
    return init({name.get<std::string>(), thm["statement"].get<std::string>()});
  }
  if (verb == "apply") {
    if (!cmd.contains("state_id") || !cmd["state_id"].is_number_integer() ||
        !cmd.contains("tactic") || !cmd["tactic"].is_string()) {
      return env::encode_error_reply("apply needs state_id and tactic");
    }
    return apply(cmd["state_id"].get<env::StateId>(),
                 cmd["tactic"].get<std::string>());
  }
  if (verb == "dispose") {
    if (!cmd.contains("state_ids") || !cmd["state_ids"].is_array()) {
      return env::encode_error_reply("dispose needs state_ids");
    }
    for (const auto& id : cmd["state_ids"]) {
      if (id.is_number_integer()) states_.erase(id.get<env::StateId>());
    }
    return env::encode_ok_reply();
  }
  if (verb == "shutdown") {
    shut_down_ = true;
    return std::nullopt;
  }
  return env::encode_error_reply("unknown command: " + verb);
}

// Starting a theorem discards every state of the previous one; ids keep
// counting, so the first id is 0 only on a fresh instance.
std::string Session::init(const TheoremStatement& theorem) {
  ProofState s0;
  try {
    s0 = initial_state(theorem.statement);
  } catch (const ParseError& e) {
    return env::encode_error_reply(std::string("bad statement: ") + e.what());
  }
  states_.clear();
  const env::StateId id = next_id_++;
  states_.emplace(id, s0);
  return env::encode_state_reply(id, s0);
}

std::string Session::apply(env::StateId id, const std::string& tactic) {
  ++applies_;
  auto it = states_.find(id);
  if (it == states_.end()) {
    return env::encode_error_reply("unknown state_id " + std::to_string(id));
  }
  std::optional<Tactic> t;
  try {
    t.emplace(tactic);
  } catch (const std::invalid_argument& e) {
    return env::encode_error_reply(e.what());
  }
  auto outcome = mini_apply(it->second, *t);
  if (outcome.failed()) return env::encode_error_reply(outcome.message());
  const env::StateId next = next_id_++;
  states_.emplace(next, outcome.next());
  return env::encode_state_reply(next, outcome.next());
}

}  // namespace proofsearch::mini
