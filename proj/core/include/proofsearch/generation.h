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

#ifndef PROOFSEARCH_GENERATION_H_
#define PROOFSEARCH_GENERATION_H_

// Proof-step generators: given a prompt, propose tactics scored by negative
// log-likelihood (lower is more likely).
//
//   oracle          parses the prompt back into a MiniITP state and ranks
//                   its applicable tactics, NLL = ln(rank + 1)
//   replay:FILE     returns candidates recorded per prompt hash
//   remote:URL      POST URL/generate

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "proofsearch/kernel.h"
#include "proofsearch/prompting.h"

namespace proofsearch {

inline constexpr std::size_t kMaxCandidates = 256;

struct ScoredCandidate {
  Tactic tactic;
  double neg_log_likelihood = 0.0;
  bool operator==(const ScoredCandidate&) const = default;
};

struct GenerationRequest {
  std::size_t n = 32;
  double temperature = 0.75;
  std::size_t max_new_chars = 256;
};

// Dedups keeping the lowest NLL, sorts by (NLL, text) and keeps the first n.
// Throws std::invalid_argument on a negative or non-finite score.
std::vector<ScoredCandidate> normalize_candidates(
    std::vector<ScoredCandidate> candidates, std::size_t n);

class ProofStepGenerator {
 public:
  virtual ~ProofStepGenerator() = default;

  // Sorted and deduplicated, at most request.n entries. Remote generators
  // throw TransportError. Must tolerate concurrent calls.
  virtual std::vector<ScoredCandidate> generate(
      const Prompt& prompt, const GenerationRequest& request) = 0;
};

class OracleGenerator : public ProofStepGenerator {
 public:
  std::vector<ScoredCandidate> generate(
      const Prompt& prompt, const GenerationRequest& request) override;
};

// FNV-1a 64-bit of the prompt bytes, 16 lowercase hex digits.
std::string prompt_hash(std::string_view prompt);

// JSON lines of {"prompt_hash":str,"candidates":[{"text","neg_log_likelihood"}]}.
class ReplayStore {
 public:
  ReplayStore() = default;
  // A missing file is an empty store. Throws Error on malformed lines.
  static ReplayStore load(const std::filesystem::path& path);

  const std::vector<ScoredCandidate>* find(const Prompt& prompt) const;
  void put(const Prompt& prompt, std::vector<ScoredCandidate> candidates);
  std::size_t size() const { return entries_.size(); }
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::string, std::vector<ScoredCandidate>> entries_;
};

class ReplayGenerator : public ProofStepGenerator {
 public:
  explicit ReplayGenerator(ReplayStore store) : store_(std::move(store)) {}

  // A prompt missing from the store yields [].
  std::vector<ScoredCandidate> generate(
      const Prompt& prompt, const GenerationRequest& request) override;

 private:
  ReplayStore store_;
};

// Passes calls through and records what the inner generator returned.
class RecordingGenerator : public ProofStepGenerator {
 public:
  explicit RecordingGenerator(std::shared_ptr<ProofStepGenerator> inner)
      : inner_(std::move(inner)) {}

  std::vector<ScoredCandidate> generate(
      const Prompt& prompt, const GenerationRequest& request) override;

  ReplayStore store() const;

 private:
  std::shared_ptr<ProofStepGenerator> inner_;
  mutable std::mutex mu_;
  ReplayStore store_;
};

struct RemoteOptions {
  // At most this many requests in flight; 0 means unbounded.
  std::size_t max_in_flight = 0;
  std::chrono::milliseconds timeout{30000};
};

class RemoteGenerator : public ProofStepGenerator {
 public:
  // `endpoint` is "http://host:port[/prefix]". Throws std::invalid_argument.
  RemoteGenerator(std::string endpoint, RemoteOptions options = {});
  ~RemoteGenerator() override;

  std::vector<ScoredCandidate> generate(
      const Prompt& prompt, const GenerationRequest& request) override;

  const std::string& endpoint() const { return endpoint_; }

 private:
  class Limiter;

  std::string endpoint_;
  std::string base_;
  std::string path_;
  RemoteOptions options_;
  std::unique_ptr<Limiter> limiter_;
};

struct GeneratorSpec {
  enum class Kind { kOracle, kReplay, kRemote };

  Kind kind = Kind::kOracle;
  // Replay file or remote endpoint.
  std::string target;

  // "oracle", "replay:FILE" or "remote:URL". Throws std::invalid_argument.
  static GeneratorSpec parse(std::string_view text);
  std::string describe() const;
};

// Throws Error when a replay store cannot be read.
std::shared_ptr<ProofStepGenerator> make_generator(
    const GeneratorSpec& spec, RemoteOptions remote = {});

// Serves the remote protocol from a local generator on 127.0.0.1.
class MockGeneratorServer {
 public:
  explicit MockGeneratorServer(std::shared_ptr<ProofStepGenerator> backend);
  ~MockGeneratorServer();

  MockGeneratorServer(const MockGeneratorServer&) = delete;
  MockGeneratorServer& operator=(const MockGeneratorServer&) = delete;

  // Binds (port 0 picks a free one) and serves on a background thread.
  // Returns the bound port. Throws Error if the port cannot be bound.
  int start(int port = 0, std::string host = "127.0.0.1");
  // Blocks until stop() or a signal.
  void wait();
  void stop();

  std::size_t requests_served() const;
  std::string url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace proofsearch

#endif  // PROOFSEARCH_GENERATION_H_
