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

#ifndef PROOFSEARCH_ENV_POOL_H_
#define PROOFSEARCH_ENV_POOL_H_

// Pool of replicated backend instances for one theorem. Instances hold
// states by immutable id; a frontier state is "matched" by the instances
// that hold it, and other instances reach it by replaying the recorded
// tactic path from the initial state.
//
// All mutation happens on the calling (coordinator) thread. During
// execute_parallel each instance is driven by exactly one worker thread.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "proofsearch/env/handle.h"
#include "proofsearch/env/transport.h"
#include "proofsearch/kernel.h"

namespace proofsearch::env {

struct PoolOptions {
  // Upper bound on live instances; initialize() raises it to `size`.
  std::size_t max_size = 0;
  std::chrono::milliseconds per_tactic_timeout{60000};
};

struct PathStep {
  Tactic tactic;
  std::string key_after;
};

// Tactics leading from the theorem's initial state to some state, with the
// canonical key reached after each step.
struct StatePath {
  std::vector<PathStep> steps;
};

struct Execution {
  Tactic tactic;
  TransitionOutcome outcome;
  std::chrono::duration<double> elapsed{0};
};

struct PoolCounters {
  std::size_t spawned = 0;
  std::size_t respawned = 0;
  std::size_t replays = 0;
  std::size_t faults = 0;
  std::size_t timeouts = 0;
};

class EnvPool {
 public:
  // Indices into the pool's instance slots.
  using Subpool = std::vector<std::size_t>;

  // Throws std::invalid_argument for size 0 and SpawnError when no instance
  // comes up. Individual spawn failures are kept in spawn_errors().
  static EnvPool initialize(const SpawnSpec& spec, std::size_t size,
                            const TheoremStatement& theorem,
                            PoolOptions options = {});

  EnvPool(EnvPool&&) noexcept = default;
  EnvPool& operator=(EnvPool&&) noexcept = default;
  ~EnvPool();

  // Instances currently holding `state`; may be empty.
  Subpool filter(const ProofState& state) const;

  // Returns at least min(needed, max_size) instances holding `state`,
  // replaying `path` on fresh or least-recently-used instances as needed, or
  // fewer if instances cannot be brought up. The path is remembered for
  // respawns.
  Subpool ensure(const ProofState& state, std::size_t needed,
                 const StatePath& path);

  // Applies each candidate exactly once on some instance of `subpool`,
  // at most |subpool| in flight. Results follow candidate order. Timed-out
  // candidates are Failed("timeout"); a candidate whose instance crashes is
  // retried once on a respawned instance. Throws PoolFault when no instance
  // can be brought up.
  std::vector<Execution> execute_parallel(const Subpool& subpool,
                                          const ProofState& state,
                                          const std::vector<Tactic>& candidates);
  std::vector<Execution> execute_parallel(
      const Subpool& subpool, const ProofState& state,
      const std::vector<Tactic>& candidates,
      std::chrono::milliseconds per_tactic_timeout);

  // Every instance drops states not in `keep`; the initial state and
  // protected keys always survive.
  void dispose_states(const std::unordered_set<std::string>& keep);
  void protect(const std::string& key) { protected_.insert(key); }

  // A new instance outside the pool, started on the pool's theorem.
  std::unique_ptr<EnvHandle> spawn_fresh() const;

  std::size_t size() const { return slots_.size(); }
  std::size_t live_size() const;
  std::size_t max_size() const { return options_.max_size; }
  EnvHandle& handle(std::size_t slot) { return *slots_[slot]; }
  const EnvHandle& handle(std::size_t slot) const { return *slots_[slot]; }
  const ProofState& initial_state() const { return initial_; }
  const TheoremStatement& theorem() const { return theorem_; }
  const std::vector<std::string>& spawn_errors() const { return spawn_errors_; }
  const PoolCounters& counters() const { return counters_; }

 private:
  EnvPool(SpawnSpec spec, TheoremStatement theorem, PoolOptions options);

  std::unique_ptr<EnvHandle> launch();
  // Replays the remembered path for `key` on slot; throws BackendFault.
  void replay(EnvHandle& h, const std::string& key, const StatePath& path);
  // Brings slot to hold `key`, respawning once on failure.
  bool bring_to(std::size_t slot, const std::string& key,
                const StatePath& path);
  const StatePath& path_for(const std::string& key) const;
  void touch(std::size_t slot) { slots_[slot]->last_used = ++tick_; }

  SpawnSpec spec_;
  TheoremStatement theorem_;
  PoolOptions options_;
  ProofState initial_;
  std::string initial_key_;
  std::vector<std::unique_ptr<EnvHandle>> slots_;
  std::map<std::string, StatePath> paths_;
  std::unordered_set<std::string> protected_;
  std::vector<std::string> spawn_errors_;
  PoolCounters counters_;
  std::uint64_t tick_ = 0;
  int next_instance_id_ = 0;
};

}  // namespace proofsearch::env

#endif  // PROOFSEARCH_ENV_POOL_H_
