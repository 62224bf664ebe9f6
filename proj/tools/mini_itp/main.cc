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

// mini_itp: the MiniITP backend as a child process speaking the adapter
// protocol (one JSON object per line on stdin/stdout).

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "proofsearch/mini/session.h"

namespace {

bool claim_crash_file(const std::string& path) {
  if (path.empty()) return true;
  const int fd = ::open(path.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) return false;
  ::close(fd);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MiniITP backend speaking the proof-state protocol on stdio"};
  int delay_ms = 0;
  long crash_after = -1;
  std::string crash_once_file;
  app.add_option("--delay-ms", delay_ms, "Sleep before answering each apply")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--crash-after", crash_after,
                 "Exit abruptly on receiving the N-th apply");
  app.add_option("--crash-once-file", crash_once_file,
                 "Crash only if this file can be created exclusively");
  CLI11_PARSE(app, argc, argv);

  std::ios::sync_with_stdio(false);
  proofsearch::mini::Session session;
  long applies = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto cmd = nlohmann::json::parse(line, nullptr, false);
    const bool is_apply = cmd.is_object() && cmd.contains("cmd") &&
                          cmd["cmd"].is_string() && cmd["cmd"] == "apply";
    if (is_apply) {
      ++applies;
      if (crash_after >= 0 && applies >= crash_after &&
          claim_crash_file(crash_once_file)) {
        ::_exit(70);
      }
      if (delay_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      }
    }
    const auto reply = session.handle(line);
    if (!reply) break;
    std::cout << *reply << '\n' << std::flush;
  }
  return 0;
}
