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

#ifndef PROOFSEARCH_ENV_HANDLE_H_
#define PROOFSEARCH_ENV_HANDLE_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "proofsearch/env/protocol.h"
#include "proofsearch/env/transport.h"
#include "proofsearch/kernel.h"

namespace proofsearch::env {

// Client side of one backend instance. Tracks which states the instance
// holds by canonical key, so callers address states by value while the wire
// protocol addresses them by immutable id.
class EnvHandle : public EnvironmentBackend {
 public:
  static constexpr std::chrono::milliseconds kControlTimeout{60000};

  // Throws SpawnError.
  EnvHandle(int instance_id, SpawnSpec spec);
  ~EnvHandle() override;

  EnvHandle(const EnvHandle&) = delete;
  EnvHandle& operator=(const EnvHandle&) = delete;

  int instance_id() const { return instance_id_; }
  const SpawnSpec& spawn_spec() const { return spec_; }
  bool alive() const { return transport_ && transport_->alive(); }

  // Sends "init"; forgets every state known so far.
  ProofState start(const TheoremStatement& theorem) override;
  const std::optional<TheoremStatement>& theorem() const { return theorem_; }

  TransitionOutcome apply(const ProofState& state,
                          const Tactic& tactic) override;
  // nullopt on timeout; the handle is dead afterwards. Throws BackendFault
  // on process death or protocol violation, std::logic_error if `state` is
  // not held.
  std::optional<TransitionOutcome> apply_within(
      const ProofState& state, const Tactic& tactic,
      std::chrono::milliseconds timeout);

  // Same as apply_within, addressing the state by canonical key.
  std::optional<TransitionOutcome> apply_key(
      const std::string& key, const Tactic& tactic,
      std::chrono::milliseconds timeout);

  bool holds(const std::string& key) const { return by_key_.count(key) > 0; }
  std::optional<StateId> id_of(const std::string& key) const;
  const std::map<StateId, std::string>& known_states() const {
    return known_;
  }

  void dispose(const std::vector<StateId>& ids);
  // Drops every held state whose key is not in `keep`.
  void dispose_except(const std::unordered_set<std::string>& keep);

  void shutdown() noexcept;

  std::uint64_t last_used = 0;

 private:
  std::string exchange(const std::string& line,
                       std::chrono::milliseconds timeout);

  int instance_id_;
  SpawnSpec spec_;
  std::unique_ptr<Transport> transport_;
  std::optional<TheoremStatement> theorem_;
  std::map<StateId, std::string> known_;
  std::unordered_map<std::string, StateId> by_key_;
  // Ids that duplicate an already-held key; released on the next dispose.
  std::vector<StateId> redundant_;
};

}  // namespace proofsearch::env

#endif  // PROOFSEARCH_ENV_HANDLE_H_
