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

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "proofsearch/errors.h"
#include "proofsearch/json_io.h"
#include "proofsearch/mini/engine.h"
#include "test_support.h"

namespace proofsearch {
namespace {

ScoredCandidate sc(const std::string& t, double nll) {
  return {Tactic(t), nll};
}

Prompt prompt_for(const std::string& statement) {
  return format_prompt(mini::initial_state(statement));
}

Prompt induction_prompt() {
  return format_prompt(
      ProofState({Obligation("Z + n = n", {"n : nat", "h : Z + n = n"})}));
}

// A raw HTTP server with a fixed reply, for transport failures.
class FixedServer {
 public:
  FixedServer(int status, std::string body) {
    server_.Post("/generate", [status, body](const httplib::Request&,
                                             httplib::Response& res) {
      res.status = status;
      res.set_content(body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FixedServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST(NormalizeCandidates, DedupsSortsAndCaps) {
  const auto out = normalize_candidates(
      {sc("b", 0.5), sc("a", 0.5), sc("c", 0.1), sc("b", 0.2), sc("d", 3)}, 3);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0], sc("c", 0.1));
  EXPECT_EQ(out[1], sc("b", 0.2));
  EXPECT_EQ(out[2], sc("a", 0.5));
}

TEST(NormalizeCandidates, CapsAtMaximum) {
  std::vector<ScoredCandidate> many;
  for (int i = 0; i < 300; ++i) many.push_back(sc("t" + std::to_string(i), i));
  EXPECT_EQ(normalize_candidates(many, 1000).size(), kMaxCandidates);
}

TEST(NormalizeCandidates, RejectsBadScores) {
  EXPECT_THROW(normalize_candidates({sc("a", -1)}, 1), std::invalid_argument);
  EXPECT_THROW(normalize_candidates(
                   {sc("a", std::numeric_limits<double>::quiet_NaN())}, 1),
               std::invalid_argument);
  EXPECT_THROW(normalize_candidates(
                   {sc("a", std::numeric_limits<double>::infinity())}, 1),
               std::invalid_argument);
}

TEST(OracleGenerator, RanksApplicableTactics) {
  OracleGenerator g;
  const auto out = g.generate(induction_prompt(), {.n = 8});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].tactic.text(), "exact h");
  EXPECT_DOUBLE_EQ(out[0].neg_log_likelihood, 0.0);
  EXPECT_EQ(out[1].tactic.text(), "rw h");
  EXPECT_DOUBLE_EQ(out[1].neg_log_likelihood, std::log(2.0));
  EXPECT_EQ(g.generate(induction_prompt(), {.n = 1}).size(), 1u);
}

TEST(OracleGenerator, MalformedPromptIsError) {
  OracleGenerator g;
  EXPECT_THROW(g.generate(Prompt{"hello"}, {}), Error);
}

TEST(PromptHash, Fnv1a) {
  EXPECT_EQ(prompt_hash(""), "cbf29ce484222325");
  EXPECT_EQ(prompt_hash("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(prompt_hash("foobar"), "85944171f73967e8");
}

TEST(ReplayStore, SaveLoadRoundTrip) {
  testing::TempDir dir;
  ReplayStore store;
  const Prompt p = prompt_for("forall n, n + Z = n");
  store.put(p, {sc("intro n", 0.25), sc("simp", 1.5)});
  store.save(dir / "store.jsonl");
  const auto loaded = ReplayStore::load(dir / "store.jsonl");
  ASSERT_EQ(loaded.size(), 1u);
  ASSERT_NE(loaded.find(p), nullptr);
  EXPECT_EQ(*loaded.find(p),
            (std::vector<ScoredCandidate>{sc("intro n", 0.25), sc("simp", 1.5)}));
  EXPECT_EQ(loaded.find(Prompt{"other"}), nullptr);
  EXPECT_EQ(ReplayStore::load(dir / "missing.jsonl").size(), 0u);
}

TEST(ReplayStore, MalformedLineIsError) {
  testing::TempDir dir;
  write_text_file(dir / "bad.jsonl", "{\"prompt_hash\":1}\n");
  EXPECT_THROW(ReplayStore::load(dir / "bad.jsonl"), Error);
}

TEST(RecordingGenerator, RecordsAndReplays) {
  auto rec = std::make_shared<RecordingGenerator>(
      std::make_shared<OracleGenerator>());
  const Prompt p = induction_prompt();
  const auto live = rec->generate(p, {.n = 4});
  ReplayGenerator replay(rec->store());
  EXPECT_EQ(replay.generate(p, {.n = 4}), live);
  EXPECT_EQ(replay.generate(p, {.n = 1}).size(), 1u);
  EXPECT_TRUE(replay.generate(Prompt{"unseen"}, {}).empty());
}

TEST(GeneratorSpec, Parse) {
  EXPECT_EQ(GeneratorSpec::parse("oracle").kind, GeneratorSpec::Kind::kOracle);
  const auto r = GeneratorSpec::parse("replay:/tmp/x.jsonl");
  EXPECT_EQ(r.kind, GeneratorSpec::Kind::kReplay);
  EXPECT_EQ(r.target, "/tmp/x.jsonl");
  EXPECT_EQ(GeneratorSpec::parse("remote:http://h:1").describe(),
            "remote:http://h:1");
  EXPECT_THROW(GeneratorSpec::parse("gpt"), std::invalid_argument);
  EXPECT_THROW(GeneratorSpec::parse("replay:"), std::invalid_argument);
  EXPECT_THROW(RemoteGenerator("ftp://x"), std::invalid_argument);
  EXPECT_THROW(RemoteGenerator("http://"), std::invalid_argument);
}

TEST(Remote, MatchesLocalOracleThroughMockServer) {
  auto oracle = std::make_shared<OracleGenerator>();
  MockGeneratorServer server(oracle);
  server.start();
  RemoteGenerator remote(server.url(), {.max_in_flight = 2});
  const Prompt p = induction_prompt();
  EXPECT_EQ(remote.generate(p, {.n = 8}), oracle->generate(p, {.n = 8}));
  EXPECT_EQ(server.requests_served(), 1u);
}

TEST(Remote, ConcurrentRequests) {
  MockGeneratorServer server(std::make_shared<OracleGenerator>());
  server.start();
  RemoteGenerator remote(server.url(), {.max_in_flight = 2});
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&] {
      if (remote.generate(induction_prompt(), {.n = 4}).size() == 2) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 6);
  EXPECT_EQ(server.requests_served(), 6u);
}

TEST(Remote, BadRequestsGet400) {
  MockGeneratorServer server(std::make_shared<OracleGenerator>());
  server.start();
  httplib::Client client(server.url());
  auto res = client.Post("/generate", "{\"n\":1}", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
}

TEST(Remote, TransportFailures) {
  {
    FixedServer s(500, "{}");
    EXPECT_THROW(RemoteGenerator(s.url()).generate(induction_prompt(), {}),
                 TransportError);
  }
  {
    FixedServer s(200, "not json");
    EXPECT_THROW(RemoteGenerator(s.url()).generate(induction_prompt(), {}),
                 TransportError);
  }
  {
    FixedServer s(200, "{\"candidates\":[{\"text\":\"simp\"}]}");
    EXPECT_THROW(RemoteGenerator(s.url()).generate(induction_prompt(), {}),
                 TransportError);
  }
  {
    FixedServer s(200, R"({"candidates":[{"text":"simp","neg_log_likelihood":-2}]})");
    EXPECT_THROW(RemoteGenerator(s.url()).generate(induction_prompt(), {}),
                 TransportError);
  }
  // Nothing listens on port 1.
  EXPECT_THROW(RemoteGenerator("http://127.0.0.1:1", {.timeout = std::chrono::milliseconds(500)})
                   .generate(induction_prompt(), {}),
               TransportError);
}

TEST(Remote, AcceptsWrappedAndRawText) {
  FixedServer s(200, R"({"candidates":[
      {"text":"[RUN TACTIC]\n rw h\n[END]","neg_log_likelihood":0.5},
      {"text":"exact h","neg_log_likelihood":0.25},
      {"text":"[RUN TACTIC] no end","neg_log_likelihood":0.1}]})");
  const auto out = RemoteGenerator(s.url()).generate(induction_prompt(), {});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], sc("exact h", 0.25));
  EXPECT_EQ(out[1], sc("rw h", 0.5));
}

TEST(MockServer, StartOnBusyPortFails) {
  MockGeneratorServer a(std::make_shared<OracleGenerator>());
  const int port = a.start();
  MockGeneratorServer b(std::make_shared<OracleGenerator>());
  EXPECT_THROW(b.start(port), Error);
}

}  // namespace
}  // namespace proofsearch
