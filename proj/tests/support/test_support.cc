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

#include "test_support.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "proofsearch/mini/engine.h"

extern char** environ;

namespace proofsearch::testing {
namespace {

int exit_code_of(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

pid_t spawn(const std::vector<std::string>& argv, int out_fd, int err_fd,
            int in_fd = -1) {
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  if (in_fd >= 0) {
    posix_spawn_file_actions_adddup2(&actions, in_fd, STDIN_FILENO);
  } else {
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null",
                                     O_RDONLY, 0);
  }
  posix_spawn_file_actions_adddup2(&actions, out_fd, STDOUT_FILENO);
  if (err_fd >= 0) {
    posix_spawn_file_actions_adddup2(&actions, err_fd, STDERR_FILENO);
  }
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid = -1;
  const int rc =
      ::posix_spawn(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw std::runtime_error("cannot spawn " + argv[0]);
  return pid;
}

}  // namespace

std::filesystem::path fixture_dir() { return PROOFSEARCH_TEST_FIXTURES; }
std::filesystem::path corpus_dir() { return fixture_dir() / "corpus"; }
std::filesystem::path golden_dir() { return fixture_dir() / "golden"; }
std::filesystem::path mini_itp_binary() { return PROOFSEARCH_MINI_ITP; }
std::filesystem::path cli_binary() { return PROOFSEARCH_CLI; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TempDir::TempDir() {
  std::string pattern =
      (std::filesystem::temp_directory_path() / "proofsearch-test-XXXXXX")
          .string();
  if (!::mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::optional<std::size_t> bfs_min_proof_length(const ProofState& start,
                                                std::size_t max_depth) {
  if (start.empty()) return 0;
  std::unordered_set<std::string> seen{canonical_key(start)};
  std::vector<ProofState> layer{start};
  for (std::size_t depth = 1; depth <= max_depth && !layer.empty(); ++depth) {
    std::vector<ProofState> next;
    for (const auto& s : layer) {
      for (const auto& t : mini::enumerate_applicable_tactics(s)) {
        const auto out = mini::mini_apply(s, t);
        if (!out.applied()) continue;
        if (out.next().empty()) return depth;
        if (seen.insert(canonical_key(out.next())).second) {
          next.push_back(out.next());
        }
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

std::vector<CorpusEntry> fixture_corpus() { return load_corpus(corpus_dir()); }

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& input) {
  int out_pipe[2], err_pipe[2], in_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0 ||
      ::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw std::runtime_error("pipe failed");
  }
  const pid_t pid = spawn(argv, out_pipe[1], err_pipe[1], in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  ::close(in_pipe[0]);
  // Small inputs fit in the pipe buffer, so writing up front cannot block.
  ::signal(SIGPIPE, SIG_IGN);
  std::size_t off = 0;
  while (off < input.size()) {
    const ssize_t n = ::write(in_pipe[1], input.data() + off, input.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    off += static_cast<std::size_t>(n);
  }
  ::close(in_pipe[1]);
  ProcessResult r;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  while (open_fds > 0) {
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP))) continue;
      char buf[4096];
      const ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      if (n <= 0) {
        ::close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      } else {
        (i == 0 ? r.out : r.err).append(buf, static_cast<std::size_t>(n));
      }
    }
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  r.exit_code = exit_code_of(status);
  return r;
}

BackgroundProcess::BackgroundProcess(const std::vector<std::string>& argv) {
  int out_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw std::runtime_error("pipe");
  pid_ = spawn(argv, out_pipe[1], -1);
  ::close(out_pipe[1]);
  out_fd_ = out_pipe[0];
}

BackgroundProcess::~BackgroundProcess() { stop(); }

std::optional<std::string> BackgroundProcess::read_line(int timeout_ms) {
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    if (out_fd_ < 0) return std::nullopt;
    pollfd pfd{out_fd_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, timeout_ms);
    if (pr < 0 && errno == EINTR) continue;
    if (pr <= 0) return std::nullopt;
    char buf[1024];
    const ssize_t n = ::read(out_fd_, buf, sizeof buf);
    if (n <= 0) {
      ::close(out_fd_);
      out_fd_ = -1;
      continue;
    }
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

int BackgroundProcess::stop() {
  if (pid_ <= 0) return -1;
  ::kill(pid_, SIGTERM);
  int status = 0;
  ::waitpid(pid_, &status, 0);
  pid_ = -1;
  if (out_fd_ >= 0) ::close(out_fd_);
  out_fd_ = -1;
  return exit_code_of(status);
}

std::string random_term(std::mt19937_64& rng,
                        const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  switch (pick(rng)) {
    case 0:
      return "Z";
    case 1:
      if (vars.empty()) return "Z";
      return vars[std::uniform_int_distribution<std::size_t>(
          0, vars.size() - 1)(rng)];
    case 2:
      return "S (" + random_term(rng, vars, depth - 1) + ")";
    case 3:
      return "(" + random_term(rng, vars, depth - 1) + ") + (" +
             random_term(rng, vars, depth - 1) + ")";
    default:
      return "(" + random_term(rng, vars, depth - 1) + ") * (" +
             random_term(rng, vars, depth - 1) + ")";
  }
}

ProofState random_state(std::mt19937_64& rng) {
  static const std::vector<std::string> kNames = {"a", "b", "n", "m"};
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Obligation> obs;
  const int n_obs = count(rng);
  for (int o = 0; o < n_obs; ++o) {
    std::vector<std::string> free, binders, hyps;
    for (const auto& v : kNames) {
      const int r = std::uniform_int_distribution<int>(0, 2)(rng);
      if (r == 1) free.push_back(v);
      if (r == 2 && binders.size() < 2) binders.push_back(v);
    }
    for (const auto& v : free) hyps.push_back(v + " : nat");
    std::vector<std::string> scope = free;
    scope.insert(scope.end(), binders.begin(), binders.end());
    if (coin(rng)) {
      hyps.push_back("h : " + random_term(rng, free, 2) + " = " +
                     random_term(rng, free, 2));
    }
    std::string eq = random_term(rng, scope, 3) + " = " +
                     random_term(rng, scope, 3);
    std::string goal;
    if (!binders.empty()) {
      goal = "forall ";
      for (std::size_t i = 0; i < binders.size(); ++i) {
        goal += binders[i] + ", ";
      }
    }
    // Canonicalize through the engine so goals print the way it prints them.
    const ProofState canon = mini::initial_state(goal + eq);
    obs.emplace_back(canon.obligations().front().goal(), hyps);
  }
  return ProofState(std::move(obs));
}

ProofScript random_script(std::mt19937_64& rng, const ProofState& state,
                          std::size_t length) {
  static const std::vector<std::string> kGarbage = {
      "intro zz", "rw nope", "exact h9", "frobnicate", "induction q",
      "refl",     "simp",    "rw h",     "exact h",    "intro"};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProofScript script;
  ProofState cur = state;
  for (std::size_t i = 0; i < length; ++i) {
    const auto options = cur.empty() ? std::vector<Tactic>{}
                                     : mini::enumerate_applicable_tactics(cur);
    if (!options.empty() && u(rng) < 0.6) {
      const Tactic t = options[std::uniform_int_distribution<std::size_t>(
          0, options.size() - 1)(rng)];
      script.push_back(t);
      cur = mini::mini_apply(cur, t).next();
    } else {
      script.emplace_back(kGarbage[std::uniform_int_distribution<std::size_t>(
          0, kGarbage.size() - 1)(rng)]);
      const auto out = mini::mini_apply(cur, script.back());
      if (out.applied()) cur = out.next();
    }
  }
  return script;
}

ProofTree hand_built_tree() {
  const ProofState root({Obligation("forall n, n + Z = n", {})});
  const ProofState via_n({Obligation("n + Z = n", {"n : nat"})});
  const ProofState via_m({Obligation("m + Z = m", {"m : nat"})});
  const ProofState split({Obligation("Z + Z = Z", {}),
                          Obligation("S k + Z = S k",
                                     {"k : nat", "IH : k + Z = k"})});
  ProofTree tree(root);
  tree.record_edge(0, Tactic("intro n"), 0.1, via_n);
  tree.record_edge(0, Tactic("intro m"), 0.7, via_m);
  tree.record_edge(1, Tactic("induction n"), 0.3, split);
  tree.record_edge(1, Tactic("simp"), 0.2, ProofState::qed());
  tree.record_edge(2, Tactic("simp"), 0.4, ProofState::qed());
  tree.record_edge(2, Tactic("induction m"), 0.9, split);
  tree.add_proof({0, 3});
  tree.metadata()["theorem"] = "add_zero";
  tree.metadata()["model"] = "oracle";
  return tree;
}

}  // namespace proofsearch::testing
