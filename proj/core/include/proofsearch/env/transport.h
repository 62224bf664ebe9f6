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

#ifndef PROOFSEARCH_ENV_TRANSPORT_H_
#define PROOFSEARCH_ENV_TRANSPORT_H_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proofsearch::env {

// Fault-injection knobs understood by the MiniITP backend (in-process and
// the mini_itp binary's --delay-ms / --crash-after flags).
struct MiniHooks {
  int delay_ms = 0;
  // The instance dies on receiving its N-th apply; negative disables.
  long crash_after = -1;
  // When set, only the first instance (process-wide) to reach crash_after
  // with this token dies.
  std::string crash_once;
};

// How to launch one backend instance.
//   "mini"                          in-process MiniITP
//   "mini:delay-ms=5,crash-after=3,crash-once=T"  in-process with hooks
//   "proto:CMD ARG..."              child process speaking the protocol
struct SpawnSpec {
  enum class Kind { kMiniInProcess, kProcess };

  Kind kind = Kind::kMiniInProcess;
  std::vector<std::string> argv;
  MiniHooks hooks;

  // Throws std::invalid_argument.
  static SpawnSpec parse(std::string_view text);
  static SpawnSpec mini(MiniHooks hooks = {});
  static SpawnSpec process(std::vector<std::string> argv);

  std::string describe() const;
};

// One line out, one line back.
class Transport {
 public:
  virtual ~Transport() = default;

  // nullopt when no reply arrived within `timeout`; the transport is dead
  // afterwards. Throws BackendFault if the peer is gone.
  virtual std::optional<std::string> exchange(
      const std::string& line, std::chrono::milliseconds timeout) = 0;
  virtual bool alive() const = 0;
  // Sends "shutdown" and reaps the peer; never throws.
  virtual void close() noexcept = 0;
};

// Throws SpawnError naming the spec.
std::unique_ptr<Transport> spawn_transport(const SpawnSpec& spec);

}  // namespace proofsearch::env

#endif  // PROOFSEARCH_ENV_TRANSPORT_H_
