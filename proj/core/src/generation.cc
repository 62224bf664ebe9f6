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

#include "proofsearch/generation.h"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "proofsearch/errors.h"
#include "proofsearch/json_io.h"
#include "proofsearch/mini/engine.h"

namespace proofsearch {
namespace {

using json = nlohmann::json;

json candidates_to_json(const std::vector<ScoredCandidate>& cs,
                        bool wrap_text) {
  json arr = json::array();
  for (const auto& c : cs) {
    arr.push_back({{"text", wrap_text ? wrap_response(c.tactic.text())
                                      : c.tactic.text()},
                   {"neg_log_likelihood", c.neg_log_likelihood}});
  }
  return arr;
}

// Unparseable texts are dropped; bad scores are a schema violation.
std::vector<ScoredCandidate> candidates_from_json(const json& arr) {
  if (!arr.is_array()) throw TransportError("'candidates' is not an array");
  std::vector<ScoredCandidate> out;
  for (const auto& c : arr) {
    if (!c.is_object() || !c.contains("text") || !c["text"].is_string() ||
        !c.contains("neg_log_likelihood") ||
        !c["neg_log_likelihood"].is_number()) {
      throw TransportError("malformed candidate: " + dump_line(c));
    }
    const double nll = c["neg_log_likelihood"].get<double>();
    if (!std::isfinite(nll) || nll < 0) {
      throw TransportError("invalid neg_log_likelihood " + dump_line(c));
    }
    const std::string text = c["text"].get<std::string>();
    try {
      if (text.find("[RUN TACTIC]") != std::string::npos) {
        out.push_back({parse_response(text), nll});
      } else {
        out.push_back({Tactic(text), nll});
      }
    } catch (const ParseError&) {
    } catch (const std::invalid_argument&) {
    }
  }
  return out;
}

}  // namespace

std::vector<ScoredCandidate> normalize_candidates(
    std::vector<ScoredCandidate> candidates, std::size_t n) {
  for (const auto& c : candidates) {
    if (!std::isfinite(c.neg_log_likelihood) || c.neg_log_likelihood < 0) {
      throw std::invalid_argument("candidate score must be finite and >= 0");
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.tactic != b.tactic) return a.tactic < b.tactic;
              return a.neg_log_likelihood < b.neg_log_likelihood;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const ScoredCandidate& a,
                                  const ScoredCandidate& b) {
                                 return a.tactic == b.tactic;
                               }),
                   candidates.end());
  std::sort(candidates.begin(), candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.neg_log_likelihood != b.neg_log_likelihood) {
                return a.neg_log_likelihood < b.neg_log_likelihood;
              }
              return a.tactic < b.tactic;
            });
  const std::size_t cap = std::min(n, kMaxCandidates);
  if (candidates.size() > cap) {
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(cap),
                     candidates.end());
  }
  return candidates;
}

std::vector<ScoredCandidate> OracleGenerator::generate(
    const Prompt& prompt, const GenerationRequest& request) {
  const ProofState state = parse_prompt(prompt.text);
  const auto tactics = mini::enumerate_applicable_tactics(state);
  std::vector<ScoredCandidate> out;
  out.reserve(tactics.size());
  for (std::size_t rank = 0; rank < tactics.size(); ++rank) {
    out.push_back({tactics[rank], std::log(static_cast<double>(rank + 1))});
  }
  return normalize_candidates(std::move(out), request.n);
}

std::string prompt_hash(std::string_view prompt) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : prompt) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ReplayStore ReplayStore::load(const std::filesystem::path& path) {
  ReplayStore store;
  if (!std::filesystem::exists(path)) return store;
  std::size_t line = 0;
  for (const auto& j : read_json_lines(path)) {
    ++line;
    try {
      std::vector<ScoredCandidate> cs;
      for (const auto& c : j.at("candidates")) {
        cs.push_back({Tactic(c.at("text").get<std::string>()),
                      c.at("neg_log_likelihood").get<double>()});
      }
      store.entries_[j.at("prompt_hash").get<std::string>()] =
          normalize_candidates(std::move(cs), kMaxCandidates);
    } catch (const std::exception& e) {
      throw Error(path.string() + ": entry " + std::to_string(line) + ": " +
                  e.what());
    }
  }
  return store;
}

const std::vector<ScoredCandidate>* ReplayStore::find(
    const Prompt& prompt) const {
  auto it = entries_.find(prompt_hash(prompt.text));
  return it == entries_.end() ? nullptr : &it->second;
}

void ReplayStore::put(const Prompt& prompt,
                      std::vector<ScoredCandidate> candidates) {
  entries_[prompt_hash(prompt.text)] =
      normalize_candidates(std::move(candidates), kMaxCandidates);
}

void ReplayStore::save(const std::filesystem::path& path) const {
  std::string out;
  for (const auto& [hash, cs] : entries_) {
    out += dump_line({{"prompt_hash", hash},
                      {"candidates", candidates_to_json(cs, false)}});
    out += '\n';
  }
  write_text_file(path, out);
}

std::vector<ScoredCandidate> ReplayGenerator::generate(
    const Prompt& prompt, const GenerationRequest& request) {
  const auto* found = store_.find(prompt);
  if (!found) return {};
  return normalize_candidates(*found, request.n);
}

std::vector<ScoredCandidate> RecordingGenerator::generate(
    const Prompt& prompt, const GenerationRequest& request) {
  auto out = inner_->generate(prompt, request);
  std::lock_guard<std::mutex> lock(mu_);
  store_.put(prompt, out);
  return out;
}

ReplayStore RecordingGenerator::store() const {
  std::lock_guard<std::mutex> lock(mu_);
  return store_;
}

class RemoteGenerator::Limiter {
 public:
  explicit Limiter(std::size_t limit) : limit_(limit) {}

  void acquire() {
    if (limit_ == 0) return;
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
  }

  void release() {
    if (limit_ == 0) return;
    {
      std::lock_guard<std::mutex> lock(mu_);
      --in_flight_;
    }
    cv_.notify_one();
  }

 private:
  std::size_t limit_;
  std::size_t in_flight_ = 0;
  std::mutex mu_;
  std::condition_variable cv_;
};

RemoteGenerator::RemoteGenerator(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)),
      options_(options),
      limiter_(std::make_unique<Limiter>(options.max_in_flight)) {
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
  const auto scheme = endpoint_.find("://");
  if (scheme == std::string::npos || endpoint_.substr(0, scheme) != "http") {
    throw std::invalid_argument("remote endpoint must be http://host:port: " +
                                endpoint_);
  }
  const auto slash = endpoint_.find('/', scheme + 3);
  base_ = endpoint_.substr(0, slash);
  path_ = (slash == std::string::npos ? "" : endpoint_.substr(slash)) +
          "/generate";
  if (base_.size() <= scheme + 3) {
    throw std::invalid_argument("remote endpoint has no host: " + endpoint_);
  }
}

RemoteGenerator::~RemoteGenerator() = default;

std::vector<ScoredCandidate> RemoteGenerator::generate(
    const Prompt& prompt, const GenerationRequest& request) {
  const json body = {{"prompt", prompt.text},
                     {"n", request.n},
                     {"temperature", request.temperature},
                     {"max_new_chars", request.max_new_chars}};
  limiter_->acquire();
  httplib::Result res;
  {
    httplib::Client client(base_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
        options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        options_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    res = client.Post(path_, dump_line(body), "application/json");
  }
  limiter_->release();
  if (!res) {
    throw TransportError("generator " + endpoint_ + " unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("generator " + endpoint_ + " replied HTTP " +
                         std::to_string(res->status));
  }
  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw TransportError("generator reply is not JSON: " +
                         std::string(e.what()));
  }
  if (!reply.is_object() || !reply.contains("candidates")) {
    throw TransportError("generator reply lacks 'candidates'");
  }
  return normalize_candidates(candidates_from_json(reply["candidates"]),
                              request.n);
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  GeneratorSpec spec;
  if (text == "oracle") return spec;
  if (text.rfind("replay:", 0) == 0 && text.size() > 7) {
    spec.kind = Kind::kReplay;
    spec.target = std::string(text.substr(7));
    return spec;
  }
  if (text.rfind("remote:", 0) == 0 && text.size() > 7) {
    spec.kind = Kind::kRemote;
    spec.target = std::string(text.substr(7));
    return spec;
  }
  throw std::invalid_argument("unknown generator '" + std::string(text) +
                              "' (expected oracle, replay:FILE or remote:URL)");
}

std::string GeneratorSpec::describe() const {
  switch (kind) {
    case Kind::kOracle:
      return "oracle";
    case Kind::kReplay:
      return "replay:" + target;
    case Kind::kRemote:
      return "remote:" + target;
  }
  return "oracle";
}

std::shared_ptr<ProofStepGenerator> make_generator(const GeneratorSpec& spec,
                                                   RemoteOptions remote) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::kOracle:
      return std::make_shared<OracleGenerator>();
    case GeneratorSpec::Kind::kReplay:
      return std::make_shared<ReplayGenerator>(ReplayStore::load(spec.target));
    case GeneratorSpec::Kind::kRemote:
      return std::make_shared<RemoteGenerator>(spec.target, remote);
  }
  throw std::invalid_argument("bad generator kind");
}

struct MockGeneratorServer::Impl {
  std::shared_ptr<ProofStepGenerator> backend;
  httplib::Server server;
  std::thread thread;
  std::string host;
  int port = 0;
  std::mutex mu;
  std::size_t served = 0;
};

MockGeneratorServer::MockGeneratorServer(
    std::shared_ptr<ProofStepGenerator> backend)
    : impl_(std::make_unique<Impl>()) {
  impl_->backend = std::move(backend);
  Impl* impl = impl_.get();
  // httplib's default adds SO_REUSEPORT, which lets a busy port bind twice.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  impl_->server.Post("/generate", [impl](const httplib::Request& req,
                                         httplib::Response& res) {
    json reply;
    try {
      const json body = json::parse(req.body);
      GenerationRequest r;
      r.n = body.at("n").get<std::size_t>();
      r.temperature = body.value("temperature", 0.75);
      r.max_new_chars = body.value("max_new_chars", std::size_t{256});
      const Prompt prompt{body.at("prompt").get<std::string>()};
      const auto cs = impl->backend->generate(prompt, r);
      reply = {{"candidates", candidates_to_json(cs, true)}};
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(dump_line({{"error", e.what()}}), "application/json");
      return;
    }
    {
      std::lock_guard<std::mutex> lock(impl->mu);
      ++impl->served;
    }
    res.set_content(dump_line(reply), "application/json");
  });
}

MockGeneratorServer::~MockGeneratorServer() { stop(); }

int MockGeneratorServer::start(int port, std::string host) {
  impl_->host = std::move(host);
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->host.c_str());
  } else if (impl_->server.bind_to_port(impl_->host.c_str(), port)) {
    impl_->port = port;
  } else {
    impl_->port = -1;
  }
  if (impl_->port <= 0) {
    throw Error("cannot bind mock generator to " + impl_->host + ":" +
                std::to_string(port));
  }
  impl_->thread = std::thread([impl = impl_.get()] {
    impl->server.listen_after_bind();
  });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void MockGeneratorServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void MockGeneratorServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::size_t MockGeneratorServer::requests_served() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->served;
}

std::string MockGeneratorServer::url() const {
  return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

}  // namespace proofsearch
