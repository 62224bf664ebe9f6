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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "proofsearch/generation.h"
#include "proofsearch/prompting.h"

namespace {

using namespace proofsearch;

ProofState wide_state(int goals) {
  std::vector<Obligation> obs;
  for (int i = 0; i < goals; ++i) {
    const std::string v = "x" + std::to_string(i);
    obs.emplace_back("S " + v + " + Z = S " + v,
                     std::vector<std::string>{v + " : nat",
                                              "IH" + std::to_string(i) + " : " +
                                                  v + " + Z = " + v});
  }
  return ProofState(std::move(obs));
}

void BM_FormatPrompt(benchmark::State& state) {
  const ProofState s = wide_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(format_prompt(s));
  }
}
BENCHMARK(BM_FormatPrompt)->Arg(1)->Arg(8)->Arg(64);

void BM_ParsePrompt(benchmark::State& state) {
  const std::string text = format_prompt(wide_state(8)).text;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_prompt(text));
  }
}
BENCHMARK(BM_ParsePrompt);

void BM_ParseResponse(benchmark::State& state) {
  const std::string text = wrap_response("rw IH0");
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_response(text));
  }
}
BENCHMARK(BM_ParseResponse);

void BM_OracleGenerate(benchmark::State& state) {
  OracleGenerator oracle;
  const Prompt p = format_prompt(wide_state(2));
  GenerationRequest req;
  req.n = 8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.generate(p, req));
  }
}
BENCHMARK(BM_OracleGenerate);

}  // namespace
