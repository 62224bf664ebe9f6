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

#ifndef PROOFSEARCH_ERRORS_H_
#define PROOFSEARCH_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proofsearch {

// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              what),
        message_(what),
        line_(line),
        column_(column) {}

  // The message without the "line:column: " prefix.
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

// The backend process died, hung up, or violated the wire protocol. This is
// never a tactic failure.
class BackendFault : public Error {
 public:
  using Error::Error;
};

class SpawnError : public BackendFault {
 public:
  using BackendFault::BackendFault;
};

// Every instance of a pool is gone and none could be respawned.
class PoolFault : public Error {
 public:
  using Error::Error;
};

// Remote generator unreachable or replied outside the schema.
class TransportError : public Error {
 public:
  using Error::Error;
};

class ReplayDivergence : public Error {
 public:
  ReplayDivergence(const std::string& theorem, std::size_t step_index,
                   const std::string& detail)
      : Error("theorem '" + theorem + "' diverges at step " +
              std::to_string(step_index) + ": " + detail),
        step_index_(step_index) {}

  // 1-based; equals script length + 1 when every step applied but the
  // final state is not QED.
  std::size_t step_index() const { return step_index_; }

 private:
  std::size_t step_index_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace proofsearch

#endif  // PROOFSEARCH_ERRORS_H_
