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

#include "cli.h"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "proofsearch/analysis.h"
#include "proofsearch/config.h"
#include "proofsearch/env/handle.h"
#include "proofsearch/env/pool.h"
#include "proofsearch/errors.h"
#include "proofsearch/extraction.h"
#include "proofsearch/generation.h"
#include "proofsearch/json_io.h"
#include "proofsearch/mini/theorem_file.h"
#include "proofsearch/prooftree.h"
#include "proofsearch/search.h"

namespace proofsearch::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Source {
  TheoremStatement theorem;
  std::string data_mix;
};

std::string file_safe(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
            c == '-')
               ? c
               : '_';
  }
  return out;
}

fs::path manifest_path(const fs::path& records) {
  fs::path p = records;
  p.replace_extension(".splits.json");
  return p;
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> ks;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = std::stoul(text.substr(0, dots));
    const auto hi = std::stoul(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw ConfigError("bad k range '" + text + "'");
    for (auto k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto k = std::stoul(item);
    if (k < 1) throw ConfigError("k must be >= 1");
    ks.push_back(k);
  }
  if (ks.empty()) throw ConfigError("empty k list");
  return ks;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// A .thm file or directory, or a records .jsonl from `extract`.
std::vector<Source> load_sources(const fs::path& path) {
  std::vector<Source> out;
  if (fs::is_regular_file(path) && path.extension() == ".jsonl") {
    std::set<std::string> seen;
    for (const auto& j : read_json_lines(path)) {
      const ProofStepRecord r = record_from_json(j);
      if (!seen.insert(r.theorem_name).second) continue;
      if (r.start_goals.size() != 1 ||
          !r.start_goals.obligations()[0].hypotheses().empty()) {
        throw Error(path.string() + ": first record of '" + r.theorem_name +
                    "' does not start from a theorem statement");
      }
      out.push_back({{r.theorem_name, r.start_goals.obligations()[0].goal()},
                     path.stem().string()});
    }
    if (out.empty()) throw Error(path.string() + " has no records");
    return out;
  }
  for (const auto& e : load_corpus(path)) {
    out.push_back({e.theorem.as_statement(), fs::path(e.file).stem().string()});
  }
  return out;
}

std::vector<Source> select_split(std::vector<Source> sources,
                                 const Splits& splits,
                                 const std::string& split) {
  const auto& names = splits.get(split);
  const std::set<std::string> wanted(names.begin(), names.end());
  std::set<std::string> have;
  std::vector<Source> out;
  for (auto& s : sources) {
    if (wanted.count(s.theorem.name)) {
      have.insert(s.theorem.name);
      out.push_back(std::move(s));
    }
  }
  for (const auto& n : names) {
    if (!have.count(n)) {
      throw Error("split '" + split + "' names unknown theorem '" + n + "'");
    }
  }
  return out;
}

void add_config_option(CLI::App& cmd, std::optional<std::string>& path) {
  cmd.add_option("--config", path,
                 "Run config file (default: $PROOFSEARCH_CONFIG)");
}

RunConfig load_config(const std::optional<std::string>& path) {
  return RunConfig::load(path ? std::optional<fs::path>(*path) : std::nullopt);
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string corpus;
  std::optional<std::string> backend;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> test_min;
  std::optional<double> val_frac;
  bool skip_bad = false;
  std::optional<std::string> config;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(a.config);
  if (a.backend) cfg.set("backend", *a.backend);
  if (a.seed) cfg.split.seed = *a.seed;
  if (a.test_min) cfg.split.test_min = *a.test_min;
  if (a.val_frac) cfg.split.val_fraction = *a.val_frac;

  const auto corpus = load_corpus(a.corpus);
  const env::SpawnSpec spec = env::SpawnSpec::parse(cfg.backend);
  const std::string itp =
      spec.kind == env::SpawnSpec::Kind::kMiniInProcess ? "mini" : "external";
  std::unique_ptr<env::EnvHandle> handle;
  try {
    handle = std::make_unique<env::EnvHandle>(0, spec);
  } catch (const SpawnError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSpawn;
  }

  std::string lines;
  std::vector<std::string> names;
  std::size_t records = 0, bad = 0;
  for (const auto& entry : corpus) {
    const TheoremStatement thm = entry.theorem.as_statement();
    try {
      if (!handle->alive()) handle = std::make_unique<env::EnvHandle>(0, spec);
      const auto recs = extract_theorem(*handle, thm, entry.theorem.proof,
                                        {entry.file, itp});
      for (const auto& r : recs) lines += dump_line(record_to_json(r)) + "\n";
      records += recs.size();
      names.push_back(thm.name);
    } catch (const ReplayDivergence& e) {
      ++bad;
      err << (a.skip_bad ? "skipped: " : "error: ") << e.what() << "\n";
      if (!a.skip_bad) return kExitPartial;
    } catch (const BackendFault& e) {
      ++bad;
      err << (a.skip_bad ? "skipped: " : "error: ") << thm.name << ": "
          << e.what() << "\n";
      if (!a.skip_bad) return kExitPartial;
    }
  }
  const Splits splits = make_splits(names, cfg.split);
  write_text_file(a.out, lines);
  write_text_file(manifest_path(a.out), splits.to_json().dump(2) + "\n");
  out << "extracted " << records << " records from " << names.size()
      << " theorems";
  if (bad) out << " (" << bad << " skipped)";
  out << "\nsplits: train " << splits.train.size() << ", test "
      << splits.test.size() << ", val " << splits.val.size() << " -> "
      << manifest_path(a.out).string() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- search

struct SearchArgs {
  std::string theorems;
  std::optional<std::string> splits;
  std::optional<std::string> split;
  std::optional<std::string> generator;
  std::optional<std::string> algo;
  std::optional<std::size_t> width;
  std::optional<double> timeout;
  std::optional<double> temperature;
  std::optional<std::size_t> pool_size;
  std::optional<std::size_t> attempts;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> n_samples;
  std::optional<std::string> score_mode;
  std::optional<double> per_tactic_timeout;
  std::optional<std::size_t> max_tree_nodes;
  std::optional<std::string> backend;
  std::optional<std::size_t> jobs;
  bool collect_all = false;
  bool long_timeout = false;
  std::optional<std::string> config;
};

struct TheoremRun {
  json line;
  bool fault = false;
  bool spawn_failed = false;
  bool found = false;
};

TheoremRun search_one(const Source& src, std::size_t index,
                      std::size_t attempt, const RunConfig& cfg,
                      const SearchParams& params,
                      ProofStepGenerator& generator, const fs::path& tree_dir) {
  TheoremRun run;
  const env::SpawnSpec spec = env::SpawnSpec::parse(cfg.backend);
  env::PoolOptions po;
  po.max_size = params.pool_size;
  po.per_tactic_timeout = params.per_tactic_timeout;
  std::optional<env::EnvPool> pool;
  try {
    pool.emplace(env::EnvPool::initialize(spec, params.pool_size, src.theorem,
                                          po));
  } catch (const BackendFault& e) {
    run.spawn_failed = true;
    run.fault = true;
    run.line = {{"search_result", "v1"},
                {"prompt_format", std::string(kPromptFormatVersion)},
                {"theorem_name", src.theorem.name},
                {"found", false},
                {"proofs", json::array()},
                {"termination", "fault"},
                {"wall_time_s", 0.0},
                {"tree", ""},
                {"error", e.what()}};
    return run;
  }
  SearchResult result = run_search(src.theorem, generator, *pool, params);
  auto& md = result.tree.metadata();
  md["theorem"] = src.theorem.name;
  md["attempt"] = std::to_string(attempt);
  md["model"] = cfg.generator;
  md["data_mix"] = src.data_mix;
  md["algorithm"] = std::string(to_string(params.algorithm));
  md["width"] = std::to_string(params.width);
  md["prompt_format"] = std::string(kPromptFormatVersion);

  char prefix[16];
  std::snprintf(prefix, sizeof prefix, "%04zu_", index);
  const fs::path tree_file =
      tree_dir / (prefix + file_safe(src.theorem.name) + ".json");
  write_text_file(tree_file, tree_to_json(result.tree).dump(1) + "\n");
  run.line = result_to_json(
      result, (fs::path("trees") / tree_dir.filename() / tree_file.filename())
                  .string());
  run.line["attempt"] = attempt;
  run.line["generator"] = cfg.generator;
  run.line["algorithm"] = std::string(to_string(params.algorithm));
  run.fault = result.termination == Termination::kFault;
  run.found = result.found;
  return run;
}

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(a.config);
  if (a.long_timeout) cfg.search.timeout_s = kLongTimeoutS;
  if (a.generator) cfg.set("generator", *a.generator);
  if (a.algo) cfg.set("algorithm", *a.algo);
  if (a.width) cfg.search.width = *a.width;
  if (a.timeout) cfg.search.timeout_s = *a.timeout;
  if (a.temperature) cfg.search.temperature = *a.temperature;
  if (a.pool_size) cfg.search.pool_size = *a.pool_size;
  if (a.attempts) cfg.attempts = *a.attempts;
  if (a.out_dir) cfg.out_dir = *a.out_dir;
  if (a.n_samples) cfg.n_samples = *a.n_samples;
  if (a.score_mode) cfg.set("score_mode", *a.score_mode);
  if (a.per_tactic_timeout) {
    cfg.set("per_tactic_timeout", std::to_string(*a.per_tactic_timeout));
  }
  if (a.max_tree_nodes) cfg.search.max_tree_nodes = *a.max_tree_nodes;
  if (a.backend) cfg.set("backend", *a.backend);
  if (a.jobs) cfg.jobs = *a.jobs;
  if (a.collect_all) cfg.search.collect_all = true;
  if (cfg.attempts < 1) throw ConfigError("attempts must be >= 1");
  const SearchParams params = cfg.search_params();
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::vector<Source> sources = load_sources(a.theorems);
  if (a.split) {
    fs::path manifest;
    if (a.splits) {
      manifest = *a.splits;
    } else if (fs::path(a.theorems).extension() == ".jsonl") {
      manifest = manifest_path(a.theorems);
    } else {
      throw ConfigError("--split needs --splits MANIFEST");
    }
    sources = select_split(std::move(sources),
                           Splits::from_json(read_json_file(manifest)),
                           *a.split);
  }

  RemoteOptions remote;
  remote.max_in_flight = cfg.effective_max_in_flight();
  const auto generator =
      make_generator(GeneratorSpec::parse(cfg.generator), remote);

  const fs::path out_dir = cfg.out_dir;
  fs::create_directories(out_dir);
  write_text_file(out_dir / "run.json",
                  json{{"generator", cfg.generator},
                       {"backend", cfg.backend},
                       {"algorithm", std::string(to_string(params.algorithm))},
                       {"width", params.width},
                       {"n_samples", params.n_samples},
                       {"timeout_s", params.timeout_s},
                       {"temperature", params.temperature},
                       {"pool_size", params.pool_size},
                       {"attempts", cfg.attempts},
                       {"collect_all", params.collect_all},
                       {"score_mode", std::string(to_string(params.score_mode))},
                       {"theorems", sources.size()},
                       {"prompt_format", std::string(kPromptFormatVersion)},
                       {"attempt_definition",
                        "one independent search run per attempt"}}
                          .dump(2) +
                      "\n");

  bool any_fault = false, any_spawn = false;
  for (std::size_t attempt = 0; attempt < cfg.attempts; ++attempt) {
    const fs::path tree_dir =
        out_dir / "trees" / ("attempt_" + std::to_string(attempt));
    std::vector<TheoremRun> runs(sources.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t i = next++;
        if (i >= sources.size()) return;
        runs[i] = search_one(sources[i], i, attempt, cfg, params, *generator,
                             tree_dir);
      }
    };
    const std::size_t jobs = std::clamp<std::size_t>(cfg.jobs, 1, sources.size());
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
    std::string lines;
    std::size_t proved = 0;
    for (const auto& r : runs) {
      lines += dump_line(r.line) + "\n";
      proved += r.found ? 1 : 0;
      any_fault = any_fault || r.fault;
      any_spawn = any_spawn || r.spawn_failed;
    }
    write_text_file(out_dir / ("attempt_" + std::to_string(attempt) + ".jsonl"),
                    lines);
    out << "attempt " << attempt << ": proved " << proved << "/"
        << sources.size() << "\n";
  }
  if (any_spawn) {
    err << "error: some backend instances could not be spawned\n";
    return kExitSpawn;
  }
  if (any_fault) {
    err << "warning: some theorems ended in a fault\n";
    return kExitPartial;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- eval

std::vector<fs::path> attempt_files(const fs::path& dir) {
  std::vector<std::pair<long, fs::path>> found;
  if (!fs::is_directory(dir)) throw Error("no such results directory: " + dir.string());
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("attempt_", 0) != 0 || e.path().extension() != ".jsonl") {
      continue;
    }
    const std::string idx = e.path().stem().string().substr(8);
    if (idx.empty() ||
        !std::all_of(idx.begin(), idx.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      continue;
    }
    found.push_back({std::stol(idx), e.path()});
  }
  std::sort(found.begin(), found.end());
  std::vector<fs::path> out;
  for (auto& [i, p] : found) out.push_back(p);
  if (out.empty()) throw Error(dir.string() + " has no attempt_<i>.jsonl files");
  return out;
}

struct EvalArgs {
  std::string results;
  std::optional<std::string> baseline;
  std::string k = "1..5";
  std::size_t bootstrap = kDefaultResamples;
  std::size_t bootstrap_k = 1;
  std::uint64_t seed = 0;
  double alpha = kDefaultAlpha;
  unsigned threads = 1;
  std::optional<std::string> out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const AttemptMatrix m = load_results(attempt_files(a.results));
  const auto ks = parse_k_list(a.k);
  EvalReport report = evaluate(m, ks);
  if (a.baseline) {
    const AttemptMatrix b = load_results(attempt_files(*a.baseline));
    report.baseline_pass_at_k = evaluate(b, ks).pass_at_k;
    if (a.bootstrap > 0) {
      report.bootstrap = paired_bootstrap(m, b, a.bootstrap_k, a.bootstrap,
                                          a.seed, a.alpha, a.threads);
    }
  }
  out << report.to_table();
  if (a.out) write_text_file(*a.out, report.to_json().dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------------ stats

struct StatsArgs {
  std::string trees;
  std::string group_by = "model,data_mix";
  std::optional<std::string> out;
};

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(a.trees)) {
    files.push_back(a.trees);
  } else if (fs::is_directory(a.trees)) {
    for (const auto& e : fs::recursive_directory_iterator(a.trees)) {
      if (e.is_regular_file() && e.path().extension() == ".json") {
        files.push_back(e.path());
      }
    }
  } else {
    throw Error("no such trees path: " + a.trees);
  }
  std::sort(files.begin(), files.end());
  std::vector<LabelledStats> items;
  for (const auto& f : files) {
    const json j = read_json_file(f);
    if (!j.is_object() || !j.contains("version") || !j.contains("nodes")) {
      continue;
    }
    try {
      const ProofTree tree = tree_from_json(j);
      items.push_back({tree.metadata(), compute_stats(tree)});
    } catch (const Error& e) {
      throw Error(f.string() + ": " + e.what());
    }
  }
  if (items.empty()) throw Error("no proof trees under " + a.trees);
  const StatsTable table = aggregate_stats(items, split_commas(a.group_by));
  out << table.to_csv();
  if (a.out) {
    fs::path json_path = *a.out;
    write_text_file(json_path, table.to_json().dump(2) + "\n");
    fs::path csv_path = json_path;
    csv_path.replace_extension(".csv");
    write_text_file(csv_path, table.to_csv());
  }
  return kExitOk;
}

struct ExportArgs {
  std::string tree;
  std::string format = "dot";
  std::optional<std::string> out;
};

int cmd_export_tree(const ExportArgs& a, std::ostream& out) {
  const ProofTree tree = tree_from_json(read_json_file(a.tree));
  const std::string text = a.format == "dot"
                               ? tree_to_dot(tree)
                               : tree_to_json(tree).dump(1) + "\n";
  if (a.out) {
    write_text_file(*a.out, text);
  } else {
    out << text;
  }
  return kExitOk;
}

// ------------------------------------------------------------ mock-server

struct MockArgs {
  std::string backend = "oracle";
  int port = 0;
  std::string host = "127.0.0.1";
};

int cmd_mock_server(const MockArgs& a, std::ostream& out) {
  const GeneratorSpec spec = GeneratorSpec::parse(a.backend);
  if (spec.kind == GeneratorSpec::Kind::kRemote) {
    throw ConfigError("mock-server backend must be oracle or replay:FILE");
  }
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  MockGeneratorServer server(make_generator(spec));
  const int port = server.start(a.port, a.host);
  out << "listening on http://" << a.host << ":" << port << "\n" << std::flush;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  out << "served " << server.requests_served() << " requests\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Generator-guided proof search toolkit", "proofsearch"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Replay a corpus into proof-step records and splits");
  extract->add_option("--corpus", ex.corpus, "Theorem file or directory")->required();
  extract->add_option("--backend", ex.backend, "mini | proto:CMD ARGS");
  extract->add_option("--out", ex.out, "Records output (.jsonl)")->required();
  extract->add_option("--split-seed", ex.seed, "Split shuffle seed");
  extract->add_option("--test-min", ex.test_min, "Minimum test theorems");
  extract->add_option("--val-frac", ex.val_frac, "Validation fraction in [0,1)");
  extract->add_flag("--skip-bad", ex.skip_bad, "Skip theorems whose replay diverges");
  add_config_option(*extract, ex.config);

  SearchArgs se;
  auto* search = app.add_subcommand("search", "Run proof search over theorems");
  search->add_option("--theorems", se.theorems, "Theorem file, directory, or records .jsonl")->required();
  search->add_option("--splits", se.splits, "Split manifest");
  search->add_option("--split", se.split, "train | test | val");
  search->add_option("--generator", se.generator, "oracle | replay:FILE | remote:URL");
  search->add_option("--algo", se.algo, "beam | best-first");
  search->add_option("--width", se.width, "Beam width (default 32)");
  search->add_option("--timeout", se.timeout, "Search timeout in seconds (default 600)");
  search->add_flag("--long-timeout", se.long_timeout, "Use the 1200 s timeout profile");
  search->add_option("--temperature", se.temperature, "Sampling temperature (default 0.75)");
  search->add_option("--pool-size", se.pool_size, "Backend instances per theorem");
  search->add_option("--attempts", se.attempts, "Independent runs (one results file each)");
  search->add_option("--out-dir", se.out_dir, "Output directory");
  search->add_option("--n-samples", se.n_samples, "Candidates per expansion (default = width)");
  search->add_option("--score-mode", se.score_mode, "cumulative | per-step");
  search->add_option("--per-tactic-timeout", se.per_tactic_timeout, "Seconds per tactic (default 60)");
  search->add_option("--max-tree-nodes", se.max_tree_nodes, "Tree size cap (default 10000)");
  search->add_option("--backend", se.backend, "mini | proto:CMD ARGS");
  search->add_option("--jobs", se.jobs, "Theorems searched concurrently");
  search->add_flag("--collect-all", se.collect_all, "Keep searching after the first proof");
  add_config_option(*search, se.config);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "pass@k and paired bootstrap over results");
  eval->add_option("--results", ev.results, "Results directory")->required();
  eval->add_option("--baseline", ev.baseline, "Baseline results directory");
  eval->add_option("--k", ev.k, "k values: 1..5 or 1,2,4");
  eval->add_option("--bootstrap", ev.bootstrap, "Bootstrap resamples (0 disables)");
  eval->add_option("--bootstrap-k", ev.bootstrap_k, "k used by the bootstrap test");
  eval->add_option("--seed", ev.seed, "Bootstrap seed");
  eval->add_option("--alpha", ev.alpha, "Significance level");
  eval->add_option("--threads", ev.threads, "Resampling threads");
  eval->add_option("--out", ev.out, "Report JSON output");

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Aggregate proof-tree statistics");
  stats->add_option("--trees", st.trees, "Tree file or directory")->required();
  stats->add_option("--group-by", st.group_by, "Comma-separated metadata keys");
  stats->add_option("--out", st.out, "stats.json (a .csv is written beside it)");

  ExportArgs xa;
  auto* exp = app.add_subcommand("export-tree", "Export a proof tree");
  exp->add_option("--tree", xa.tree, "Tree JSON file")->required();
  exp->add_option("--format", xa.format, "dot | json")->check(CLI::IsMember({"dot", "json"}));
  exp->add_option("--out", xa.out, "Output file (default stdout)");

  MockArgs mk;
  auto* mock = app.add_subcommand("mock-server", "Serve the remote generator protocol");
  mock->add_option("--backend", mk.backend, "oracle | replay:FILE");
  mock->add_option("--port", mk.port, "Port (0 picks a free one)");
  mock->add_option("--host", mk.host, "Bind address");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*extract) return cmd_extract(ex, out, err);
    if (*search) return cmd_search(se, out, err);
    if (*eval) return cmd_eval(ev, out);
    if (*stats) return cmd_stats(st, out);
    if (*exp) return cmd_export_tree(xa, out);
    if (*mock) return cmd_mock_server(mk, out);
  } catch (const SpawnError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSpawn;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace proofsearch::cli
