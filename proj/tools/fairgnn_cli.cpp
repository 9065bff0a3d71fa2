// Copyright 2026 The FairGNN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// fairgnn command-line tool. Talks to the engine only through the C API.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fairgnn/fairgnn.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Carries a status out of nested helpers so main can choose the exit code.
class CliError : public std::runtime_error {
 public:
  CliError(fg_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  fg_status status() const { return status_; }

 private:
  fg_status status_;
};

void Check(fg_status status, const std::string& context) {
  if (status == FG_OK) return;
  throw CliError(status, context + ": " + fg_last_error());
}

int ExitCodeFor(fg_status status) {
  switch (status) {
    case FG_ERR_INVALID_ARGUMENT:
    case FG_ERR_STRUCTURAL:
    case FG_ERR_CONFIG:
    case FG_ERR_DOMAIN:
    case FG_ERR_IO:
    case FG_ERR_SCHEMA:
      return 2;
    default:
      return 1;
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<fg_dataset, Deleter<fg_dataset, fg_dataset_free>>;
using SplitsPtr = std::unique_ptr<fg_splits, Deleter<fg_splits, fg_splits_free>>;
using RunPtr = std::unique_ptr<fg_run, Deleter<fg_run, fg_run_free>>;
using ModelPtr = std::unique_ptr<fg_model, Deleter<fg_model, fg_model_free>>;
using ResultPtr = std::unique_ptr<fg_result, Deleter<fg_result, fg_result_free>>;
using SearchPtr = std::unique_ptr<fg_search, Deleter<fg_search, fg_search_free>>;

struct DataOptions {
  std::string nodes;
  std::string edges;
  std::string synthetic;
};

struct ModelOptions {
  std::string model = "gcn";
  double alpha = 0.0;
  double beta = 0.0;
  double lr = 1e-2;
  double weight_decay = 0.0;
  double dropout = 0.2;
  std::size_t hidden = 16;
  std::size_t layers = 2;
  std::size_t epochs = 100;
  bool no_self_loops = false;
  bool strict_empty_groups = false;
  double threshold = 0.5;
};

struct Common {
  DataOptions data;
  ModelOptions model;
  std::optional<std::size_t> labeled_count;
  std::string seeds;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out = ".";
};

std::uint64_t DefaultSeed() {
  const char* env = std::getenv("FAIRGNN_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::strlen(env)) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw CliError(FG_ERR_CONFIG, std::string("FAIRGNN_SEED is not an unsigned integer: ") + env);
  }
}

// Accepts "3", "0..4" (inclusive) or "1,5,9".
std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto number = [&text](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-') {
      throw CliError(FG_ERR_CONFIG, "invalid --seeds value '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
  };
  const std::size_t range = text.find("..");
  if (range != std::string::npos) {
    const std::uint64_t lo = number(text.substr(0, range));
    const std::uint64_t hi = number(text.substr(range + 2));
    if (hi < lo) throw CliError(FG_ERR_CONFIG, "empty seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  } else if (text.find(',') == std::string::npos) {
    // A bare count N means seeds 0..N-1.
    const std::uint64_t count = number(text);
    for (std::uint64_t s = 0; s < count; ++s) seeds.push_back(s);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) seeds.push_back(number(item));
  }
  if (seeds.empty()) throw CliError(FG_ERR_CONFIG, "no seeds given");
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return seeds;
}

std::vector<std::uint64_t> ResolveSeeds(const Common& c) {
  if (c.seeds.empty()) return {c.seed};
  return ParseSeeds(c.seeds);
}

DatasetPtr LoadData(const DataOptions& d) {
  const bool files = !d.nodes.empty() || !d.edges.empty();
  const bool synthetic = !d.synthetic.empty();
  if (files == synthetic) {
    throw CliError(FG_ERR_CONFIG, "give exactly one data source: --nodes/--edges or --synthetic");
  }
  fg_dataset* raw = nullptr;
  if (synthetic) {
    fg_synthetic_config config;
    Check(fg_synthetic_config_load(d.synthetic.c_str(), &config), "loading " + d.synthetic);
    Check(fg_dataset_synthesize(&config, &raw), "generating synthetic graph");
  } else {
    if (d.nodes.empty() || d.edges.empty()) {
      throw CliError(FG_ERR_CONFIG, "--nodes and --edges must be given together");
    }
    Check(fg_dataset_load(d.nodes.c_str(), d.edges.c_str(), &raw), "loading dataset");
  }
  return DatasetPtr(raw);
}

fg_dataset_info Info(const fg_dataset* dataset) {
  fg_dataset_info info;
  Check(fg_dataset_get_info(dataset, &info), "dataset info");
  return info;
}

std::size_t ResolveLabeledCount(const Common& c, const fg_dataset* dataset) {
  if (c.labeled_count) return *c.labeled_count;
  const fg_dataset_info info = Info(dataset);
  const std::size_t holdout = 2 * (info.num_nodes / 4);
  const std::size_t room = info.num_labeled > holdout ? info.num_labeled - holdout : 0;
  if (room == 0) throw CliError(FG_ERR_CONFIG, "no labeled nodes left for training");
  return std::min<std::size_t>(100, room);
}

fg_train_options TrainOptions(const ModelOptions& m, std::uint64_t seed) {
  fg_train_options o;
  fg_train_options_default(&o);
  o.model = m.model == "sage" ? FG_MODEL_SAGE : FG_MODEL_GCN;
  o.hidden = m.hidden;
  o.layers = m.layers;
  o.dropout = m.dropout;
  o.epochs = m.epochs;
  o.lr = m.lr;
  o.weight_decay = m.weight_decay;
  o.alpha = m.alpha;
  o.beta = m.beta;
  o.seed = seed;
  o.self_loops = m.no_self_loops ? 0 : 1;
  o.strict_empty_groups = m.strict_empty_groups ? 1 : 0;
  o.threshold = m.threshold;
  return o;
}

std::string MethodName(const std::string& model, double alpha, double beta) {
  std::string name = model == "sage" ? "SAGE" : "GCN";
  if (alpha != 0.0 || beta != 0.0) name += "-EOSP";
  return name;
}

json MetricValue(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json MetricsJson(const fg_metrics& m) {
  return json{{"bacc", MetricValue(m.bacc)},
              {"auc", MetricValue(m.auc)},
              {"f1", MetricValue(m.f1)},
              {"delta_sp", MetricValue(m.delta_sp)},
              {"delta_eo", MetricValue(m.delta_eo)}};
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(FG_ERR_IO, "cannot write " + path.string());
  out << text;
  if (!out) throw CliError(FG_ERR_IO, "failed writing " + path.string());
}

void MakeDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError(FG_ERR_IO, "cannot create " + dir.string() + ": " + ec.message());
}

// Shortest text that reads back to the same double.
std::string FormatNumber(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

// Resolved settings echoed as flat TOML. Output paths and thread counts are
// left out so the echo is identical across reruns.
class ConfigEcho {
 public:
  explicit ConfigEcho(std::string command) { text_ = "command = \"" + command + "\"\n"; }
  ConfigEcho& Add(const std::string& key, const std::string& value) {
    text_ += key + " = " + json(value).dump() + "\n";
    return *this;
  }
  ConfigEcho& Add(const std::string& key, double value) {
    text_ += key + " = " + FormatNumber(value) + "\n";
    return *this;
  }
  ConfigEcho& Add(const std::string& key, std::uint64_t value) {
    text_ += key + " = " + std::to_string(value) + "\n";
    return *this;
  }
  ConfigEcho& Add(const std::string& key, bool value) {
    text_ += key + " = " + (value ? "true" : "false") + "\n";
    return *this;
  }
  ConfigEcho& Data(const DataOptions& d) {
    if (!d.synthetic.empty()) return Add("synthetic", d.synthetic);
    return Add("nodes", d.nodes).Add("edges", d.edges);
  }
  ConfigEcho& Model(const ModelOptions& m) {
    Add("model", m.model).Add("alpha", m.alpha).Add("beta", m.beta).Add("lr", m.lr);
    Add("weight_decay", m.weight_decay).Add("dropout", m.dropout);
    Add("hidden", static_cast<std::uint64_t>(m.hidden));
    Add("layers", static_cast<std::uint64_t>(m.layers));
    Add("epochs", static_cast<std::uint64_t>(m.epochs));
    Add("self_loops", !m.no_self_loops).Add("strict_empty_groups", m.strict_empty_groups);
    return Add("threshold", m.threshold);
  }
  void Write(const fs::path& dir) const { WriteText(dir / "config.toml", text_); }

 private:
  std::string text_;
};

// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
// failure by index wins so the reported error does not depend on timing.
template <typename Body>
void ParallelFor(std::size_t count, std::size_t jobs, Body body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, count));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct SeedRun {
  fg_metrics test{};
  double wall_seconds = 0.0;
  std::size_t best_epoch = 0;
};

SeedRun TrainOneSeed(const fg_dataset* dataset, std::size_t labeled_count, std::uint64_t seed,
                     const ModelOptions& m, const fs::path& dir) {
  fg_splits* raw_splits = nullptr;
  Check(fg_splits_make(dataset, labeled_count, seed, &raw_splits),
        "seed " + std::to_string(seed) + ": splits");
  SplitsPtr splits(raw_splits);
  const fg_train_options options = TrainOptions(m, seed);
  fg_run* raw_run = nullptr;
  Check(fg_train(dataset, splits.get(), &options, &raw_run),
        "seed " + std::to_string(seed) + ": training");
  RunPtr run(raw_run);
  SeedRun result;
  Check(fg_run_metrics(run.get(), FG_SPLIT_TEST, &result.test), "metrics");
  Check(fg_run_wall_seconds(run.get(), &result.wall_seconds), "timing");
  double score = 0.0;
  Check(fg_run_best_epoch(run.get(), &result.best_epoch, &score), "best epoch");
  if (!dir.empty()) {
    MakeDir(dir);
    Check(fg_splits_save(splits.get(), (dir / "splits.json").c_str()), "writing splits");
    Check(fg_run_write_history(run.get(), (dir / "history.jsonl").c_str()), "writing history");
    Check(fg_run_write_checkpoint(run.get(), (dir / "checkpoint.json").c_str()),
          "writing checkpoint");
    fg_metrics val{};
    Check(fg_run_metrics(run.get(), FG_SPLIT_VAL, &val), "metrics");
    const json metrics{{"seed", seed},
                       {"best_epoch", result.best_epoch},
                       {"validation_hybrid_score", score},
                       {"validation", MetricsJson(val)},
                       {"test", MetricsJson(result.test)}};
    WriteText(dir / "metrics.json", metrics.dump(2) + "\n");
  }
  return result;
}

ResultPtr CollectResult(const std::string& method, const std::vector<SeedRun>& runs) {
  fg_result* raw = nullptr;
  Check(fg_result_create(method.c_str(), &raw), "result");
  ResultPtr result(raw);
  for (const SeedRun& r : runs) Check(fg_result_add(result.get(), &r.test), "result");
  return result;
}

void WriteSummaries(const std::vector<const fg_result*>& results, const fs::path& out,
                    const std::string& stem) {
  Check(fg_results_write(results.data(), results.size(), (out / (stem + ".csv")).c_str(),
                         FG_FORMAT_CSV),
        "writing " + stem + ".csv");
  Check(fg_results_write(results.data(), results.size(), (out / (stem + ".json")).c_str(),
                         FG_FORMAT_JSON),
        "writing " + stem + ".json");
}

void PrintFile(const fs::path& path) {
  std::ifstream in(path);
  std::cout << in.rdbuf();
}

int CmdTrain(const Common& c) {
  const std::vector<std::uint64_t> seeds = ResolveSeeds(c);
  DatasetPtr dataset = LoadData(c.data);
  const std::size_t labeled_count = ResolveLabeledCount(c, dataset.get());
  const fs::path out(c.out);
  MakeDir(out);
  ConfigEcho echo("train");
  echo.Data(c.data).Model(c.model).Add("labeled_count", static_cast<std::uint64_t>(labeled_count));
  echo.Add("seeds", c.seeds.empty() ? std::to_string(c.seed) : c.seeds).Write(out);

  std::vector<SeedRun> runs(seeds.size());
  ParallelFor(seeds.size(), c.jobs, [&](std::size_t i) {
    runs[i] = TrainOneSeed(dataset.get(), labeled_count, seeds[i], c.model,
                           out / ("seed_" + std::to_string(seeds[i])));
  });

  ResultPtr result = CollectResult(MethodName(c.model.model, c.model.alpha, c.model.beta), runs);
  WriteSummaries({result.get()}, out, "summary");
  json timing = json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    timing.push_back({{"seed", seeds[i]}, {"wall_seconds", runs[i].wall_seconds}});
  }
  WriteText(out / "timing.json", timing.dump(2) + "\n");
  PrintFile(out / "summary.csv");
  return 0;
}

int CmdEval(const Common& c, const std::string& checkpoint, const std::string& splits_path,
            const std::string& split) {
  DatasetPtr dataset = LoadData(c.data);
  fg_model* raw_model = nullptr;
  Check(fg_model_load(checkpoint.c_str(), &raw_model), "loading checkpoint");
  ModelPtr model(raw_model);
  SplitsPtr splits;
  if (!splits_path.empty()) {
    fg_splits* raw = nullptr;
    Check(fg_splits_load(splits_path.c_str(), &raw), "loading splits");
    splits.reset(raw);
  } else {
    fg_splits* raw = nullptr;
    Check(fg_splits_make(dataset.get(), ResolveLabeledCount(c, dataset.get()), c.seed, &raw),
          "splits");
    splits.reset(raw);
  }
  const fg_split_kind which =
      split == "train" ? FG_SPLIT_TRAIN : (split == "val" ? FG_SPLIT_VAL : FG_SPLIT_TEST);
  fg_metrics metrics{};
  Check(fg_model_evaluate(model.get(), dataset.get(), splits.get(), which, c.model.threshold,
                          &metrics),
        "evaluation");
  const fs::path out(c.out);
  MakeDir(out);
  ConfigEcho echo("eval");
  echo.Data(c.data).Add("checkpoint", checkpoint).Add("split", split);
  if (!splits_path.empty()) echo.Add("splits", splits_path);
  echo.Add("threshold", c.model.threshold).Write(out);
  const json report{{"split", split}, {"metrics", MetricsJson(metrics)}};
  WriteText(out / "metrics.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

int CmdHpo(const Common& c, std::size_t trials, std::size_t batch) {
  DatasetPtr dataset = LoadData(c.data);
  const std::size_t labeled_count = ResolveLabeledCount(c, dataset.get());
  fg_splits* raw_splits = nullptr;
  Check(fg_splits_make(dataset.get(), labeled_count, c.seed, &raw_splits), "splits");
  SplitsPtr splits(raw_splits);
  const fg_train_options base = TrainOptions(c.model, c.seed);
  fg_search_options options;
  fg_search_options_default(&options);
  options.trials = trials;
  options.seed = c.seed;
  options.batch = batch;
  options.jobs = c.jobs;
  fg_search* raw_search = nullptr;
  Check(fg_search_run(dataset.get(), splits.get(), &base, &options, &raw_search), "search");
  SearchPtr search(raw_search);

  const fs::path out(c.out);
  MakeDir(out);
  ConfigEcho echo("hpo");
  echo.Data(c.data).Model(c.model).Add("labeled_count", static_cast<std::uint64_t>(labeled_count));
  echo.Add("seed", c.seed).Add("trials", static_cast<std::uint64_t>(trials));
  echo.Add("batch", static_cast<std::uint64_t>(batch)).Write(out);
  Check(fg_search_write_log(search.get(), (out / "trials.jsonl").c_str()), "writing trial log");
  Check(fg_search_write_summary(search.get(), (out / "summary.json").c_str()),
        "writing summary");
  Check(fg_search_write_timing(search.get(), (out / "timing.json").c_str()), "writing timing");
  double alpha = 0.0, beta = 0.0, score = 0.0;
  Check(fg_search_best(search.get(), &alpha, &beta, &score), "best");
  std::printf("best alpha=%g beta=%g score=%.4f\n", alpha, beta, score);
  return 0;
}

int CmdSynth(const std::string& config_path, std::optional<std::uint64_t> seed,
             const std::string& out_dir) {
  fg_synthetic_config config;
  Check(fg_synthetic_config_load(config_path.c_str(), &config), "loading " + config_path);
  if (seed) config.seed = *seed;
  fg_dataset* raw = nullptr;
  Check(fg_dataset_synthesize(&config, &raw), "generating synthetic graph");
  DatasetPtr dataset(raw);
  const fs::path out(out_dir);
  MakeDir(out);
  Check(fg_dataset_save(dataset.get(), (out / "nodes.csv").c_str(), (out / "edges.csv").c_str()),
        "writing dataset");
  const fg_dataset_info info = Info(dataset.get());
  std::printf("nodes=%zu edges=%zu features=%zu\n", info.num_nodes, info.num_edges,
              info.num_features);
  return 0;
}

int CmdFeasibility(double x, double y, std::size_t resolution, std::size_t jobs,
                   const std::string& out_dir) {
  double measure = 0.0;
  Check(fg_feasibility_measure(x, y, resolution, jobs, &measure), "feasibility");
  const fs::path out(out_dir);
  MakeDir(out);
  Check(fg_feasibility_write_region(x, y, resolution, (out / "region.csv").c_str()),
        "writing region");
  const json report{{"x", x}, {"y", y}, {"resolution", resolution}, {"measure", measure}};
  WriteText(out / "measure.json", report.dump(2) + "\n");
  std::printf("measure=%.6f\n", measure);
  return 0;
}

std::vector<double> ParseProportions(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v > 0.0) || v > 100.0) {
      throw CliError(FG_ERR_CONFIG, "invalid proportion '" + item + "' (percent in (0, 100])");
    }
    values.push_back(v);
  }
  if (values.empty()) throw CliError(FG_ERR_CONFIG, "no proportions given");
  return values;
}

int CmdSweep(const Common& c, const std::string& proportions_text) {
  const std::vector<double> proportions = ParseProportions(proportions_text);
  const std::vector<std::uint64_t> seeds = ResolveSeeds(c);
  DatasetPtr dataset = LoadData(c.data);
  const std::size_t n = Info(dataset.get()).num_nodes;

  ModelOptions base = c.model;
  base.alpha = 0.0;
  base.beta = 0.0;
  ModelOptions fair = c.model;
  if (fair.alpha == 0.0 && fair.beta == 0.0) fair.alpha = fair.beta = 1.0;
  const ModelOptions* variants[2] = {&base, &fair};

  struct Job {
    std::size_t proportion;
    std::size_t variant;
    std::size_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < proportions.size(); ++p) {
    for (std::size_t v = 0; v < 2; ++v) {
      for (std::size_t s = 0; s < seeds.size(); ++s) jobs.push_back({p, v, s});
    }
  }
  std::vector<std::size_t> counts;
  for (double p : proportions) {
    counts.push_back(static_cast<std::size_t>(std::floor(p / 100.0 * static_cast<double>(n))));
  }
  std::vector<SeedRun> runs(jobs.size());
  ParallelFor(jobs.size(), c.jobs, [&](std::size_t i) {
    const Job& j = jobs[i];
    runs[i] = TrainOneSeed(dataset.get(), counts[j.proportion], seeds[j.seed],
                           *variants[j.variant], fs::path());
  });

  const fs::path out(c.out);
  MakeDir(out);
  ConfigEcho echo("sweep-labeled");
  echo.Data(c.data).Model(fair).Add("proportions", proportions_text);
  echo.Add("seeds", c.seeds.empty() ? std::to_string(c.seed) : c.seeds).Write(out);

  // One row per (proportion, method); cells are "mean (std)" over seeds.
  std::ostringstream table;
  table << "proportion,labeled_count,method,bacc,auc,f1,delta_sp,delta_eo\n";
  std::ostringstream timing;
  timing << "proportion,labeled_count,method,seed,wall_seconds\n";
  const fs::path scratch = out / ".sweep_row.csv";
  for (std::size_t p = 0; p < proportions.size(); ++p) {
    for (std::size_t v = 0; v < 2; ++v) {
      std::vector<SeedRun> group;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].proportion != p || jobs[i].variant != v) continue;
        group.push_back(runs[i]);
        timing << FormatNumber(proportions[p]) << "," << counts[p] << ","
               << MethodName(variants[v]->model, variants[v]->alpha, variants[v]->beta) << ","
               << seeds[jobs[i].seed] << "," << FormatNumber(runs[i].wall_seconds) << "\n";
      }
      const std::string method =
          MethodName(variants[v]->model, variants[v]->alpha, variants[v]->beta);
      ResultPtr result = CollectResult(method, group);
      const fg_result* handle = result.get();
      Check(fg_results_write(&handle, 1, scratch.c_str(), FG_FORMAT_CSV), "sweep row");
      std::ifstream in(scratch);
      std::string header, row;
      std::getline(in, header);
      std::getline(in, row);
      table << FormatNumber(proportions[p]) << "," << counts[p] << "," << row << "\n";
    }
  }
  std::error_code ec;
  fs::remove(scratch, ec);
  WriteText(out / "sweep.csv", table.str());
  WriteText(out / "sweep_timing.csv", timing.str());
  std::cout << table.str();
  return 0;
}

void AddData(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--nodes", d.nodes, "Node CSV (id,feat_*,label,sensitive)");
  cmd->add_option("--edges", d.edges, "Edge CSV (src,dst)");
  cmd->add_option("--synthetic", d.synthetic, "Synthetic graph config (key = value lines)");
}

void AddModel(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--model", m.model, "Encoder")
      ->check(CLI::IsMember({"gcn", "sage"}))
      ->capture_default_str();
  cmd->add_option("--alpha", m.alpha, "Equal-opportunity weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--beta", m.beta, "Statistical-parity weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--lr", m.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--weight-decay", m.weight_decay, "L2 weight decay")->capture_default_str();
  cmd->add_option("--dropout", m.dropout, "Dropout rate")->capture_default_str();
  cmd->add_option("--hidden", m.hidden, "Hidden width")->capture_default_str();
  cmd->add_option("--layers", m.layers, "Encoder depth (1-3)")->capture_default_str();
  cmd->add_option("--epochs", m.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--threshold", m.threshold, "Decision threshold")->capture_default_str();
  cmd->add_flag("--no-self-loops", m.no_self_loops, "Normalize A without self-loops");
  cmd->add_flag("--strict-empty-groups", m.strict_empty_groups,
                "Fail when a sensitive group is empty in the training set");
}

void AddRun(CLI::App* cmd, Common& c, bool multi_seed) {
  cmd->add_option("--labeled-count", c.labeled_count,
                  "Training nodes with observed label and attribute");
  if (multi_seed) cmd->add_option("--seeds", c.seeds, "Seeds: count N (0..N-1), range A..B or list a,b,c");
  cmd->add_option("--seed", c.seed, "Seed (default: FAIRGNN_SEED or 0)");
  cmd->add_option("--jobs", c.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness-aware graph neural network training"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);

  Common common;
  std::string checkpoint, splits_path, split = "test";
  std::size_t trials = 15, batch = 1;
  std::string synth_config;
  std::optional<std::uint64_t> synth_seed;
  double x = 0.0, y = 0.0;
  std::size_t resolution = 200;
  std::string proportions = "20,30,37.5,50";

  try {
    common.seed = DefaultSeed();
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* train = app.add_subcommand("train", "Train over one or more seeds");
  AddData(train, common.data);
  AddModel(train, common.model);
  AddRun(train, common, true);

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  AddData(eval, common.data);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint JSON")->required();
  eval->add_option("--splits", splits_path, "Splits JSON (default: regenerate from --seed)");
  eval->add_option("--split", split, "Split to evaluate")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();
  eval->add_option("--threshold", common.model.threshold, "Decision threshold");
  AddRun(eval, common, false);

  CLI::App* hpo = app.add_subcommand("hpo", "Search (alpha, beta) on the validation score");
  AddData(hpo, common.data);
  AddModel(hpo, common.model);
  AddRun(hpo, common, false);
  hpo->add_option("--trials", trials, "Trial budget")->capture_default_str();
  hpo->add_option("--batch", batch, "Suggestions per synchronization round")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic graph as CSV");
  synth->add_option("--synthetic", synth_config, "Synthetic graph config")->required();
  synth->add_option("--seed", synth_seed, "Override the config seed");
  synth->add_option("--out", common.out, "Output directory")->capture_default_str();

  CLI::App* feas = app.add_subcommand("feasibility", "Map the joint EO/SP feasibility region");
  feas->add_option("--x", x, "Negative proportion of group a")->required();
  feas->add_option("--y", y, "Negative proportion of group b")->required();
  feas->add_option("--resolution", resolution, "Grid cells per axis")->capture_default_str();
  feas->add_option("--jobs", common.jobs, "Threads")->check(CLI::PositiveNumber);
  feas->add_option("--out", common.out, "Output directory")->capture_default_str();

  CLI::App* sweep =
      app.add_subcommand("sweep-labeled", "Baseline vs fair training across labeled proportions");
  AddData(sweep, common.data);
  AddModel(sweep, common.model);
  AddRun(sweep, common, true);
  sweep->add_option("--proportions", proportions, "Labeled percentages, comma separated")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train) return CmdTrain(common);
    if (*eval) return CmdEval(common, checkpoint, splits_path, split);
    if (*hpo) return CmdHpo(common, trials, batch);
    if (*synth) return CmdSynth(synth_config, synth_seed, common.out);
    if (*feas) return CmdFeasibility(x, y, resolution, common.jobs, common.out);
    if (*sweep) return CmdSweep(common, proportions);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.status());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
