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

#include "proofsearch/env/handle.h"

#include <stdexcept>

#include "proofsearch/errors.h"

namespace proofsearch::env {

EnvHandle::EnvHandle(int instance_id, SpawnSpec spec)
    : instance_id_(instance_id),
      spec_(std::move(spec)),
      transport_(spawn_transport(spec_)) {}

EnvHandle::~EnvHandle() { shutdown(); }

std::string EnvHandle::exchange(const std::string& line,
                                std::chrono::milliseconds timeout) {
  if (!alive()) {
    throw BackendFault("instance " + std::to_string(instance_id_) +
                       " is dead");
  }
  auto reply = transport_->exchange(line, timeout);
  if (!reply) {
    throw BackendFault("instance " + std::to_string(instance_id_) +
                       " timed out");
  }
  return *reply;
}

ProofState EnvHandle::start(const TheoremStatement& theorem) {
  const Reply r = decode_reply(exchange(encode_init(theorem), kControlTimeout));
  if (!r.ok) {
    throw BackendFault("init of '" + theorem.name + "' rejected: " + r.error);
  }
  if (!r.has_state) throw BackendFault("init reply carries no state");
  known_.clear();
  by_key_.clear();
  redundant_.clear();
  theorem_ = theorem;
  const std::string key = canonical_key(r.state);
  known_.emplace(r.state_id, key);
  by_key_.emplace(key, r.state_id);
  return r.state;
}

TransitionOutcome EnvHandle::apply(const ProofState& state,
                                   const Tactic& tactic) {
  auto outcome = apply_within(state, tactic, kControlTimeout);
  if (!outcome) {
    throw BackendFault("instance " + std::to_string(instance_id_) +
                       " timed out");
  }
  return *outcome;
}

std::optional<TransitionOutcome> EnvHandle::apply_within(
    const ProofState& state, const Tactic& tactic,
    std::chrono::milliseconds timeout) {
  if (state.empty()) return TransitionOutcome(Failed{"no goals"});
  return apply_key(canonical_key(state), tactic, timeout);
}

std::optional<TransitionOutcome> EnvHandle::apply_key(
    const std::string& key, const Tactic& tactic,
    std::chrono::milliseconds timeout) {
  if (key.empty()) return TransitionOutcome(Failed{"no goals"});
  const auto id = id_of(key);
  if (!id) {
    throw std::logic_error("instance " + std::to_string(instance_id_) +
                           " does not hold the requested state");
  }
  if (!alive()) {
    throw BackendFault("instance " + std::to_string(instance_id_) +
                       " is dead");
  }
  auto line = transport_->exchange(encode_apply(*id, tactic), timeout);
  if (!line) return std::nullopt;
  const Reply r = decode_reply(*line);
  if (!r.ok) return TransitionOutcome(Failed{r.error});
  if (!r.has_state) throw BackendFault("apply reply carries no state");
  const std::string next_key = canonical_key(r.state);
  if (by_key_.count(next_key)) {
    redundant_.push_back(r.state_id);
  } else {
    known_.emplace(r.state_id, next_key);
    by_key_.emplace(next_key, r.state_id);
  }
  return TransitionOutcome(Applied{r.state});
}

std::optional<StateId> EnvHandle::id_of(const std::string& key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

void EnvHandle::dispose(const std::vector<StateId>& ids) {
  std::vector<StateId> batch = std::move(redundant_);
  redundant_.clear();
  for (StateId id : ids) {
    auto it = known_.find(id);
    if (it == known_.end()) continue;
    by_key_.erase(it->second);
    known_.erase(it);
    batch.push_back(id);
  }
  if (batch.empty()) return;
  const Reply r = decode_reply(exchange(encode_dispose(batch), kControlTimeout));
  if (!r.ok) throw BackendFault("dispose rejected: " + r.error);
}

void EnvHandle::dispose_except(const std::unordered_set<std::string>& keep) {
  std::vector<StateId> drop;
  for (const auto& [id, key] : known_) {
    if (!keep.count(key)) drop.push_back(id);
  }
  dispose(drop);
}

void EnvHandle::shutdown() noexcept {
  if (transport_) transport_->close();
}

}  // namespace proofsearch::env
