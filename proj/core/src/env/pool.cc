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

#include "proofsearch/env/pool.h"

#include <algorithm>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "proofsearch/errors.h"

namespace proofsearch::env {
namespace {

using Clock = std::chrono::steady_clock;

const StatePath kEmptyPath{};

}  // namespace

EnvPool::EnvPool(SpawnSpec spec, TheoremStatement theorem, PoolOptions options)
    : spec_(std::move(spec)),
      theorem_(std::move(theorem)),
      options_(options) {}

EnvPool::~EnvPool() {
  for (auto& h : slots_) {
    if (h) h->shutdown();
  }
}

EnvPool EnvPool::initialize(const SpawnSpec& spec, std::size_t size,
                            const TheoremStatement& theorem,
                            PoolOptions options) {
  if (size == 0) throw std::invalid_argument("pool size must be at least 1");
  options.max_size = std::max(options.max_size, size);
  EnvPool pool(spec, theorem, options);
  for (std::size_t i = 0; i < size; ++i) {
    try {
      pool.slots_.push_back(pool.launch());
    } catch (const BackendFault& e) {
      pool.spawn_errors_.push_back(e.what());
    }
  }
  if (pool.slots_.empty()) {
    throw SpawnError(pool.spawn_errors_.empty() ? "no instance started"
                                                : pool.spawn_errors_.front());
  }
  return pool;
}

std::unique_ptr<EnvHandle> EnvPool::launch() {
  auto h = std::make_unique<EnvHandle>(next_instance_id_++, spec_);
  ProofState s0 = h->start(theorem_);
  if (initial_key_.empty() && initial_.empty()) {
    initial_ = s0;
    initial_key_ = canonical_key(s0);
  } else if (canonical_key(s0) != initial_key_) {
    throw BackendFault("instance " + std::to_string(h->instance_id()) +
                       " started in a different initial state");
  }
  ++counters_.spawned;
  h->last_used = ++tick_;
  return h;
}

std::unique_ptr<EnvHandle> EnvPool::spawn_fresh() const {
  auto h = std::make_unique<EnvHandle>(-1, spec_);
  h->start(theorem_);
  return h;
}

std::size_t EnvPool::live_size() const {
  return static_cast<std::size_t>(std::count_if(
      slots_.begin(), slots_.end(), [](const auto& h) { return h->alive(); }));
}

EnvPool::Subpool EnvPool::filter(const ProofState& state) const {
  const std::string key = canonical_key(state);
  Subpool out;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i]->alive() && slots_[i]->holds(key)) out.push_back(i);
  }
  return out;
}

const StatePath& EnvPool::path_for(const std::string& key) const {
  auto it = paths_.find(key);
  return it == paths_.end() ? kEmptyPath : it->second;
}

void EnvPool::replay(EnvHandle& h, const std::string& key,
                     const StatePath& path) {
  if (h.holds(key)) return;
  const auto& steps = path.steps;
  if (!steps.empty() && steps.back().key_after != key) {
    throw std::logic_error("replay path does not end in the requested state");
  }
  if (steps.empty() && key != initial_key_) {
    throw std::logic_error("no replay path recorded for the requested state");
  }
  // Resume from the deepest state on the path this instance still holds.
  std::size_t from = 0;
  for (std::size_t k = steps.size(); k > 0; --k) {
    if (h.holds(steps[k - 1].key_after)) {
      from = k;
      break;
    }
  }
  if (from == 0 && !h.holds(initial_key_)) h.start(theorem_);
  std::string current = from == 0 ? initial_key_ : steps[from - 1].key_after;
  ++counters_.replays;
  for (std::size_t i = from; i < steps.size(); ++i) {
    auto outcome = h.apply_key(current, steps[i].tactic,
                               EnvHandle::kControlTimeout);
    if (!outcome) throw BackendFault("replay timed out");
    if (outcome->failed()) {
      throw BackendFault("replay diverged at step " + std::to_string(i + 1) +
                         ": " + outcome->message());
    }
    current = canonical_key(outcome->next());
    if (current != steps[i].key_after) {
      throw BackendFault("replay diverged at step " + std::to_string(i + 1) +
                         ": unexpected state");
    }
  }
}

bool EnvPool::bring_to(std::size_t slot, const std::string& key,
                       const StatePath& path) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      if (!slots_[slot]->alive()) {
        slots_[slot]->shutdown();
        slots_[slot] = launch();
        ++counters_.respawned;
      }
      replay(*slots_[slot], key, path);
      touch(slot);
      return true;
    } catch (const BackendFault& e) {
      ++counters_.faults;
      spawn_errors_.push_back(e.what());
      slots_[slot]->shutdown();
    }
  }
  return false;
}

EnvPool::Subpool EnvPool::ensure(const ProofState& state, std::size_t needed,
                                 const StatePath& path) {
  const std::string key = canonical_key(state);
  if (key != initial_key_) paths_[key] = path;
  needed = std::clamp<std::size_t>(needed, 1, options_.max_size);
  Subpool out = filter(state);
  if (out.size() >= needed) {
    for (auto s : out) touch(s);
    return out;
  }
  while (out.size() < needed && slots_.size() < options_.max_size) {
    try {
      slots_.push_back(launch());
    } catch (const BackendFault& e) {
      spawn_errors_.push_back(e.what());
      break;
    }
    const std::size_t slot = slots_.size() - 1;
    if (bring_to(slot, key, path)) out.push_back(slot);
  }
  // Repurpose the least recently used instances that lack the state.
  std::vector<std::size_t> idle;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (std::find(out.begin(), out.end(), i) == out.end()) idle.push_back(i);
  }
  std::sort(idle.begin(), idle.end(), [&](std::size_t a, std::size_t b) {
    const bool la = slots_[a]->alive(), lb = slots_[b]->alive();
    if (la != lb) return la;
    return slots_[a]->last_used < slots_[b]->last_used;
  });
  for (std::size_t slot : idle) {
    if (out.size() >= needed) break;
    if (bring_to(slot, key, path)) out.push_back(slot);
  }
  std::sort(out.begin(), out.end());
  for (auto s : out) touch(s);
  return out;
}

std::vector<Execution> EnvPool::execute_parallel(
    const Subpool& subpool, const ProofState& state,
    const std::vector<Tactic>& candidates) {
  return execute_parallel(subpool, state, candidates,
                          options_.per_tactic_timeout);
}

std::vector<Execution> EnvPool::execute_parallel(
    const Subpool& subpool, const ProofState& state,
    const std::vector<Tactic>& candidates,
    std::chrono::milliseconds per_tactic_timeout) {
  std::vector<std::optional<Execution>> results(candidates.size());
  if (candidates.empty()) return {};
  const std::string key = canonical_key(state);

  std::deque<std::size_t> pending;
  for (std::size_t i = 0; i < candidates.size(); ++i) pending.push_back(i);
  std::vector<int> faults(candidates.size(), 0);

  while (!pending.empty()) {
    Subpool live;
    for (std::size_t slot : subpool) {
      if (slot < slots_.size() && slots_[slot]->alive() &&
          slots_[slot]->holds(key)) {
        live.push_back(slot);
      }
    }
    if (live.empty()) {
      // Bring back the subpool's instances, else any slot at all.
      for (std::size_t slot : subpool) {
        if (slot < slots_.size() && bring_to(slot, key, path_for(key))) {
          live.push_back(slot);
        }
      }
      for (std::size_t slot = 0; live.empty() && slot < slots_.size();
           ++slot) {
        if (bring_to(slot, key, path_for(key))) live.push_back(slot);
      }
      if (live.empty()) {
        throw PoolFault("no live instance for theorem '" + theorem_.name +
                        "'");
      }
    }

    std::mutex mu;
    std::deque<std::size_t> retry;
    std::size_t timeouts = 0, crash_count = 0;
    auto worker = [&](std::size_t slot) {
      EnvHandle& h = *slots_[slot];
      while (true) {
        std::size_t idx;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (pending.empty()) return;
          idx = pending.front();
          pending.pop_front();
        }
        const auto t0 = Clock::now();
        try {
          auto outcome = h.apply_key(key, candidates[idx], per_tactic_timeout);
          const std::chrono::duration<double> dt = Clock::now() - t0;
          std::lock_guard<std::mutex> lock(mu);
          if (!outcome) {
            ++timeouts;
            results[idx] =
                Execution{candidates[idx], Failed{"timeout"}, dt};
            return;
          }
          results[idx] = Execution{candidates[idx], std::move(*outcome), dt};
        } catch (const BackendFault& e) {
          const std::chrono::duration<double> dt = Clock::now() - t0;
          std::lock_guard<std::mutex> lock(mu);
          ++crash_count;
          if (++faults[idx] >= 2) {
            results[idx] = Execution{
                candidates[idx],
                Failed{std::string("backend fault: ") + e.what()}, dt};
          } else {
            retry.push_back(idx);
          }
          return;
        }
      }
    };

    if (live.size() == 1) {
      worker(live.front());
    } else {
      std::vector<std::thread> threads;
      threads.reserve(live.size());
      for (std::size_t slot : live) threads.emplace_back(worker, slot);
      for (auto& t : threads) t.join();
    }
    for (std::size_t slot : live) touch(slot);
    counters_.timeouts += timeouts;
    counters_.faults += crash_count;
    for (std::size_t idx : retry) pending.push_back(idx);
  }

  // Reset instances that died during the batch.
  for (std::size_t slot : subpool) {
    if (slot < slots_.size() && !slots_[slot]->alive()) {
      bring_to(slot, key, path_for(key));
    }
  }

  std::vector<Execution> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

void EnvPool::dispose_states(const std::unordered_set<std::string>& keep) {
  std::unordered_set<std::string> all = keep;
  all.insert(protected_.begin(), protected_.end());
  all.insert(initial_key_);
  for (auto& h : slots_) {
    if (!h->alive()) continue;
    try {
      h->dispose_except(all);
    } catch (const BackendFault& e) {
      spawn_errors_.push_back(e.what());
      h->shutdown();
    }
  }
  for (auto it = paths_.begin(); it != paths_.end();) {
    it = all.count(it->first) ? std::next(it) : paths_.erase(it);
  }
}

}  // namespace proofsearch::env
