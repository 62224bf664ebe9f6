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

#include "proofsearch/env/transport.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "proofsearch/env/protocol.h"
#include "proofsearch/errors.h"
#include "proofsearch/mini/session.h"

extern char** environ;

namespace proofsearch::env {
namespace {

MiniHooks parse_hooks(std::string_view text) {
  MiniHooks hooks;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("bad mini option: " + item);
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "delay-ms") {
      hooks.delay_ms = std::stoi(value);
    } else if (key == "crash-after") {
      hooks.crash_after = std::stol(value);
    } else if (key == "crash-once") {
      hooks.crash_once = value;
    } else {
      throw std::invalid_argument("unknown mini option: " + key);
    }
  }
  return hooks;
}

bool claim_crash(const std::string& token) {
  if (token.empty()) return true;
  static std::mutex mu;
  static std::set<std::string> claimed;
  std::lock_guard<std::mutex> lock(mu);
  return claimed.insert(token).second;
}

class LoopbackTransport : public Transport {
 public:
  explicit LoopbackTransport(MiniHooks hooks) : hooks_(hooks) {}

  std::optional<std::string> exchange(
      const std::string& line, std::chrono::milliseconds timeout) override {
    if (!alive_) throw BackendFault("in-process backend is dead");
    const bool is_apply = line.find("\"cmd\":\"apply\"") != std::string::npos;
    if (is_apply) {
      ++applies_;
      if (hooks_.crash_after >= 0 && applies_ >= hooks_.crash_after &&
          claim_crash(hooks_.crash_once)) {
        alive_ = false;
        throw BackendFault("in-process backend crashed (injected)");
      }
      if (hooks_.delay_ms > 0) {
        const auto delay = std::chrono::milliseconds(hooks_.delay_ms);
        if (delay > timeout) {
          std::this_thread::sleep_for(timeout);
          alive_ = false;
          return std::nullopt;
        }
        std::this_thread::sleep_for(delay);
      }
    }
    auto reply = session_.handle(line);
    if (!reply) {
      alive_ = false;
      throw BackendFault("in-process backend shut down");
    }
    return reply;
  }

  bool alive() const override { return alive_; }
  void close() noexcept override { alive_ = false; }

 private:
  MiniHooks hooks_;
  mini::Session session_;
  long applies_ = 0;
  bool alive_ = true;
};

class ProcessTransport : public Transport {
 public:
  explicit ProcessTransport(const SpawnSpec& spec) {
    static std::once_flag ignore_sigpipe;
    std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });

    int to_child[2], from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) {
      throw SpawnError("pipe failed for " + spec.describe());
    }
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw SpawnError("pipe failed for " + spec.describe());
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);

    std::vector<char*> argv;
    for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    const int rc = ::posix_spawnp(&pid_, argv[0], &actions, nullptr,
                                  argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
      ::close(to_child[1]);
      ::close(from_child[0]);
      pid_ = -1;
      throw SpawnError("cannot spawn backend '" + spec.describe() +
                       "': " + std::strerror(rc));
    }
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
  }

  ~ProcessTransport() override { close(); }

  std::optional<std::string> exchange(
      const std::string& line, std::chrono::milliseconds timeout) override {
    if (!alive()) throw BackendFault("backend process is dead");
    write_line(line);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string reply = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return reply;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        kill_child();
        return std::nullopt;
      }
      pollfd pfd{out_fd_, POLLIN, 0};
      const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (pr < 0) {
        if (errno == EINTR) continue;
        kill_child();
        throw BackendFault("poll failed on backend pipe");
      }
      if (pr == 0) continue;
      char chunk[4096];
      const ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        kill_child();
        throw BackendFault("backend process exited");
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  bool alive() const override { return pid_ > 0; }

  void close() noexcept override {
    if (pid_ <= 0) return;
    try {
      write_line(encode_shutdown());
    } catch (...) {
    }
    ::close(in_fd_);
    in_fd_ = -1;
    // Give the child a moment to exit on its own before killing it.
    for (int i = 0; i < 100; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
        pid_ = -1;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    kill_child();
  }

 private:
  void write_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::write(in_fd_, data.data() + off, data.size() - off);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        kill_child();
        throw BackendFault("cannot write to backend process");
      }
      off += static_cast<std::size_t>(n);
    }
  }

  void kill_child() noexcept {
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
    if (in_fd_ >= 0) ::close(in_fd_);
    if (out_fd_ >= 0) ::close(out_fd_);
    in_fd_ = out_fd_ = -1;
  }

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
};

}  // namespace

SpawnSpec SpawnSpec::parse(std::string_view text) {
  if (text == "mini") return mini();
  if (text.rfind("mini:", 0) == 0) return mini(parse_hooks(text.substr(5)));
  if (text.rfind("proto:", 0) == 0) {
    std::vector<std::string> argv;
    std::stringstream ss{std::string(text.substr(6))};
    std::string word;
    while (ss >> word) argv.push_back(word);
    if (argv.empty()) throw std::invalid_argument("proto: needs a command");
    return process(std::move(argv));
  }
  throw std::invalid_argument("unknown backend '" + std::string(text) +
                              "' (expected mini or proto:CMD)");
}

SpawnSpec SpawnSpec::mini(MiniHooks hooks) {
  SpawnSpec s;
  s.kind = Kind::kMiniInProcess;
  s.hooks = hooks;
  return s;
}

SpawnSpec SpawnSpec::process(std::vector<std::string> argv) {
  SpawnSpec s;
  s.kind = Kind::kProcess;
  s.argv = std::move(argv);
  return s;
}

std::string SpawnSpec::describe() const {
  if (kind == Kind::kMiniInProcess) return "mini";
  std::string out = "proto:";
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

std::unique_ptr<Transport> spawn_transport(const SpawnSpec& spec) {
  if (spec.kind == SpawnSpec::Kind::kMiniInProcess) {
    return std::make_unique<LoopbackTransport>(spec.hooks);
  }
  if (spec.argv.empty()) throw SpawnError("empty backend command");
  return std::make_unique<ProcessTransport>(spec);
}

}  // namespace proofsearch::env
