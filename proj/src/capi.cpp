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

#include "fairgnn/fairgnn.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <new>
#include <sstream>
#include <string>

#include "fairgnn/data_io.hpp"
#include "fairgnn/error.hpp"
#include "fairgnn/feasibility.hpp"
#include "fairgnn/graph.hpp"
#include "fairgnn/hpo.hpp"
#include "fairgnn/log.hpp"
#include "fairgnn/metrics.hpp"
#include "fairgnn/models.hpp"
#include "fairgnn/trainer.hpp"
#include "json.hpp"

struct fg_dataset {
  fairgnn::Dataset dataset;
};

struct fg_splits {
  fairgnn::Splits splits;
};

struct fg_model {
  fairgnn::ModelParams params;
};

struct fg_run {
  fairgnn::TrainResult result;
  fairgnn::MetricsReport metrics[3];
  double wall_seconds = 0.0;
};

struct fg_result {
  fairgnn::ExperimentResult result;
};

struct fg_search {
  fairgnn::SearchResult result;
};

namespace {

using namespace fairgnn;

thread_local std::string g_last_error;

fg_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return FG_ERR_STRUCTURAL;
    case ErrorKind::kConfig: return FG_ERR_CONFIG;
    case ErrorKind::kDomain: return FG_ERR_DOMAIN;
    case ErrorKind::kIo: return FG_ERR_IO;
    case ErrorKind::kContract: return FG_ERR_CONTRACT;
    case ErrorKind::kNumeric: return FG_ERR_NUMERIC;
    case ErrorKind::kConstraint: return FG_ERR_CONSTRAINT;
    case ErrorKind::kSearch: return FG_ERR_SEARCH;
    case ErrorKind::kUndefined: return FG_ERR_UNDEFINED;
    case ErrorKind::kSchema: return FG_ERR_SCHEMA;
  }
  return FG_ERR_INTERNAL;
}

fg_status Failure(fg_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Body>
fg_status Guard(Body&& body) {
  try {
    body();
    return FG_OK;
  } catch (const Error& e) {
    return Failure(StatusOf(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return Failure(FG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Failure(FG_ERR_INTERNAL, e.what());
  } catch (...) {
    return Failure(FG_ERR_INTERNAL, "unknown error");
  }
}

#define FG_REQUIRE(ptr)                                                      \
  do {                                                                       \
    if ((ptr) == nullptr) return Failure(FG_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

double Nan() { return std::numeric_limits<double>::quiet_NaN(); }

fg_metrics ToC(const MetricsReport& r) {
  return fg_metrics{r.bacc.value_or(Nan()), r.auc.value_or(Nan()), r.f1.value_or(Nan()),
                    r.delta_sp.value_or(Nan()), r.delta_eo.value_or(Nan())};
}

Percentage FromC(double v) {
  if (std::isnan(v)) return std::nullopt;
  return v;
}

MetricsReport FromC(const fg_metrics& m) {
  MetricsReport r;
  r.bacc = FromC(m.bacc);
  r.auc = FromC(m.auc);
  r.f1 = FromC(m.f1);
  r.delta_sp = FromC(m.delta_sp);
  r.delta_eo = FromC(m.delta_eo);
  return r;
}

SyntheticConfig FromC(const fg_synthetic_config& c) {
  SyntheticConfig s;
  s.n = c.n;
  s.label_balance = c.label_balance;
  s.group_balance = c.group_balance;
  s.label_attr_correlation = c.label_attr_correlation;
  s.intra_edge_prob = c.intra_edge_prob;
  s.inter_edge_prob = c.inter_edge_prob;
  s.feature_dim = c.feature_dim;
  s.label_shift = c.label_shift;
  s.attr_shift = c.attr_shift;
  s.seed = c.seed;
  return s;
}

fg_synthetic_config ToC(const SyntheticConfig& s) {
  return fg_synthetic_config{s.n,           s.label_balance,   s.group_balance,
                             s.label_attr_correlation, s.intra_edge_prob, s.inter_edge_prob,
                             s.feature_dim, s.label_shift,     s.attr_shift,
                             s.seed};
}

const IndexSet& SplitOf(const Splits& splits, fg_split_kind which) {
  switch (which) {
    case FG_SPLIT_TRAIN: return splits.train;
    case FG_SPLIT_VAL: return splits.val;
    case FG_SPLIT_TEST: return splits.test;
  }
  Fail(ErrorKind::kConfig, "unknown split kind");
}

ModelConfig ModelConfigFrom(const fg_train_options& o, std::size_t input_dim) {
  ModelConfig config;
  if (o.model != FG_MODEL_GCN && o.model != FG_MODEL_SAGE) Fail(ErrorKind::kConfig, "unknown model kind");
  config.kind = o.model == FG_MODEL_GCN ? EncoderKind::kGcn : EncoderKind::kSage;
  config.input_dim = input_dim;
  config.hidden = o.hidden;
  config.depth = o.layers;
  config.dropout = o.dropout;
  config.self_loops = o.self_loops != 0;
  return config;
}

TrainConfig TrainConfigFrom(const fg_train_options& o) {
  TrainConfig config;
  config.epochs = o.epochs;
  config.lr = o.lr;
  config.adam.weight_decay = o.weight_decay;
  config.seed = o.seed;
  config.fairness.alpha = o.alpha;
  config.fairness.beta = o.beta;
  config.fairness.empty_group_policy =
      o.strict_empty_groups ? EmptyGroupPolicy::kError : EmptyGroupPolicy::kZero;
  config.threshold = o.threshold;
  return config;
}

std::unique_ptr<fg_run> TrainRun(const Dataset& dataset, const Splits& splits,
                                 const fg_train_options& options) {
  const auto start = std::chrono::steady_clock::now();
  const ModelConfig model_config = ModelConfigFrom(options, dataset.num_features());
  const GraphInputs inputs = GraphInputs::From(dataset, model_config.self_loops);
  ModelParams init = InitParams(model_config, options.seed);
  auto run = std::make_unique<fg_run>();
  run->result = Train(dataset, inputs, splits, std::move(init), TrainConfigFrom(options));
  run->wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const IndexSet* sets[] = {&splits.train, &splits.val, &splits.test};
  for (int k = 0; k < 3; ++k) {
    run->metrics[k] = Evaluate(run->result.model, dataset, inputs, *sets[k], options.threshold);
  }
  return run;
}

struct WarningHandler {
  std::mutex mutex;
  fg_warning_handler handler = nullptr;
  void* user = nullptr;
};

WarningHandler& Handler() {
  static WarningHandler h;
  return h;
}

}  // namespace

extern "C" {

const char* fg_version(void) { return "1.0.0"; }

const char* fg_last_error(void) { return g_last_error.c_str(); }

const char* fg_status_name(fg_status status) {
  switch (status) {
    case FG_OK: return "ok";
    case FG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FG_ERR_STRUCTURAL: return "structural error";
    case FG_ERR_CONFIG: return "configuration error";
    case FG_ERR_DOMAIN: return "domain error";
    case FG_ERR_IO: return "I/O error";
    case FG_ERR_CONTRACT: return "contract error";
    case FG_ERR_NUMERIC: return "numeric error";
    case FG_ERR_CONSTRAINT: return "constraint error";
    case FG_ERR_SEARCH: return "search error";
    case FG_ERR_UNDEFINED: return "undefined";
    case FG_ERR_SCHEMA: return "schema error";
    case FG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void fg_string_free(char* text) { std::free(text); }

void fg_set_warning_handler(fg_warning_handler handler, void* user) {
  {
    std::lock_guard<std::mutex> lock(Handler().mutex);
    Handler().handler = handler;
    Handler().user = user;
  }
  if (handler == nullptr) {
    SetWarningSink({});
    return;
  }
  SetWarningSink([](const std::string& message) {
    // SetWarningSink already serializes calls.
    Handler().handler(message.c_str(), Handler().user);
  });
}

void fg_synthetic_config_default(fg_synthetic_config* config) {
  if (config) *config = ToC(SyntheticConfig{});
}

fg_status fg_synthetic_config_load(const char* path, fg_synthetic_config* config) {
  FG_REQUIRE(path);
  FG_REQUIRE(config);
  return Guard([&] { *config = ToC(LoadSyntheticConfig(path)); });
}

fg_status fg_dataset_load(const char* nodes_path, const char* edges_path, fg_dataset** out) {
  FG_REQUIRE(nodes_path);
  FG_REQUIRE(edges_path);
  FG_REQUIRE(out);
  return Guard([&] { *out = new fg_dataset{LoadDataset(nodes_path, edges_path)}; });
}

fg_status fg_dataset_synthesize(const fg_synthetic_config* config, fg_dataset** out) {
  FG_REQUIRE(config);
  FG_REQUIRE(out);
  return Guard([&] { *out = new fg_dataset{GenerateSynthetic(FromC(*config))}; });
}

fg_status fg_dataset_save(const fg_dataset* dataset, const char* nodes_path, const char* edges_path) {
  FG_REQUIRE(dataset);
  FG_REQUIRE(nodes_path);
  FG_REQUIRE(edges_path);
  return Guard([&] { SaveDataset(dataset->dataset, nodes_path, edges_path); });
}

fg_status fg_dataset_get_info(const fg_dataset* dataset, fg_dataset_info* info) {
  FG_REQUIRE(dataset);
  FG_REQUIRE(info);
  return Guard([&] {
    const Dataset& d = dataset->dataset;
    *info = fg_dataset_info{d.num_nodes(), d.num_features(), d.num_edges(), d.labeled().size()};
  });
}

fg_status fg_dataset_validate(const fg_dataset* dataset, size_t* violations, char** report) {
  FG_REQUIRE(dataset);
  FG_REQUIRE(violations);
  return Guard([&] {
    const ValidationReport r = ValidateDataset(dataset->dataset);
    *violations = r.violations.size();
    if (report) {
      std::string text;
      for (const Violation& v : r.violations) text += v.message + "\n";
      *report = static_cast<char*>(std::malloc(text.size() + 1));
      if (*report == nullptr) throw std::bad_alloc();
      std::memcpy(*report, text.c_str(), text.size() + 1);
    }
  });
}

void fg_dataset_free(fg_dataset* dataset) { delete dataset; }

fg_status fg_splits_make(const fg_dataset* dataset, size_t labeled_count, uint64_t seed,
                         fg_splits** out) {
  FG_REQUIRE(dataset);
  FG_REQUIRE(out);
  return Guard([&] { *out = new fg_splits{MakeSplits(dataset->dataset, labeled_count, seed)}; });
}

fg_status fg_splits_load(const char* path, fg_splits** out) {
  FG_REQUIRE(path);
  FG_REQUIRE(out);
  return Guard([&] { *out = new fg_splits{LoadSplits(path)}; });
}

fg_status fg_splits_save(const fg_splits* splits, const char* path) {
  FG_REQUIRE(splits);
  FG_REQUIRE(path);
  return Guard([&] { SaveSplits(splits->splits, path); });
}

fg_status fg_splits_size(const fg_splits* splits, fg_split_kind which, size_t* size) {
  FG_REQUIRE(splits);
  FG_REQUIRE(size);
  return Guard([&] { *size = SplitOf(splits->splits, which).size(); });
}

void fg_splits_free(fg_splits* splits) { delete splits; }

void fg_train_options_default(fg_train_options* options) {
  if (options == nullptr) return;
  *options = fg_train_options{FG_MODEL_GCN, 16, 2, 0.2, 100, 1e-2, 0.0, 0.0, 0.0, 0, 1, 0, 0.5};
}

fg_status fg_train(const fg_dataset* dataset, const fg_splits* splits,
                   const fg_train_options* options, fg_run** out) {
  FG_REQUIRE(dataset);
  FG_REQUIRE(splits);
  FG_REQUIRE(options);
  FG_REQUIRE(out);
  return Guard([&] { *out = TrainRun(dataset->dataset, splits->splits, *options).release(); });
}

fg_status fg_run_metrics(const fg_run* run, fg_split_kind which, fg_metrics* out) {
  FG_REQUIRE(run);
  FG_REQUIRE(out);
  if (which < FG_SPLIT_TRAIN || which > FG_SPLIT_TEST) {
    return Failure(FG_ERR_INVALID_ARGUMENT, "unknown split kind");
  }
  *out = ToC(run->metrics[which]);
  return FG_OK;
}

fg_status fg_run_best_epoch(const fg_run* run, size_t* epoch, double* score) {
  FG_REQUIRE(run);
  const TrainHistory& h = run->result.history;
  if (epoch) *epoch = h.best_epoch;
  if (score) *score = h.best_epoch > 0 ? h.epochs[h.best_epoch - 1].hybrid_score : Nan();
  return FG_OK;
}

fg_status fg_run_wall_seconds(const fg_run* run, double* seconds) {
  FG_REQUIRE(run);
  FG_REQUIRE(seconds);
  *seconds = run->wall_seconds;
  return FG_OK;
}

fg_status fg_run_write_history(const fg_run* run, const char* path) {
  FG_REQUIRE(run);
  FG_REQUIRE(path);
  return Guard([&] { WriteFile(path, HistoryToJsonLines(run->result.history)); });
}

fg_status fg_run_write_checkpoint(const fg_run* run, const char* path) {
  FG_REQUIRE(run);
  FG_REQUIRE(path);
  return Guard([&] { SaveCheckpoint(run->result.model, path); });
}

void fg_run_free(fg_run* run) { delete run; }

fg_status fg_model_load(const char* checkpoint_path, fg_model** out) {
  FG_REQUIRE(checkpoint_path);
  FG_REQUIRE(out);
  return Guard([&] { *out = new fg_model{LoadCheckpoint(checkpoint_path)}; });
}

fg_status fg_model_save(const fg_model* model, const char* checkpoint_path) {
  FG_REQUIRE(model);
  FG_REQUIRE(checkpoint_path);
  return Guard([&] { SaveCheckpoint(model->params, checkpoint_path); });
}

fg_status fg_model_evaluate(const fg_model* model, const fg_dataset* dataset,
                            const fg_splits* splits, fg_split_kind which, double threshold,
                            fg_metrics* out) {
  FG_REQUIRE(model);
  FG_REQUIRE(dataset);
  FG_REQUIRE(splits);
  FG_REQUIRE(out);
  return Guard([&] {
    const GraphInputs inputs = GraphInputs::From(dataset->dataset, model->params.config.self_loops);
    *out = ToC(Evaluate(model->params, dataset->dataset, inputs, SplitOf(splits->splits, which),
                        threshold));
  });
}

fg_status fg_model_predict(const fg_model* model, const fg_dataset* dataset, double* probabilities,
                           size_t count) {
  FG_REQUIRE(model);
  FG_REQUIRE(dataset);
  FG_REQUIRE(probabilities);
  return Guard([&] {
    if (count < dataset->dataset.num_nodes()) Fail(ErrorKind::kConfig, "output buffer too small");
    const GraphInputs inputs = GraphInputs::From(dataset->dataset, model->params.config.self_loops);
    const Eigen::VectorXd p = PredictProbabilities(model->params, inputs);
    for (Eigen::Index i = 0; i < p.size(); ++i) probabilities[i] = p[i];
  });
}

void fg_model_free(fg_model* model) { delete model; }

double fg_hybrid_score(double bacc, double delta_eo, double delta_sp) {
  // NaN marks an undefined metric, scored at its worst value.
  return HybridScore(std::isnan(bacc) ? 0.0 : bacc, std::isnan(delta_eo) ? 100.0 : delta_eo,
                     std::isnan(delta_sp) ? 100.0 : delta_sp);
}

fg_status fg_result_create(const char* method, fg_result** out) {
  FG_REQUIRE(method);
  FG_REQUIRE(out);
  return Guard([&] {
    auto r = std::make_unique<fg_result>();
    r->result.method = method;
    *out = r.release();
  });
}

fg_status fg_result_add(fg_result* result, const fg_metrics* metrics) {
  FG_REQUIRE(result);
  FG_REQUIRE(metrics);
  return Guard([&] { result->result.per_seed.push_back(FromC(*metrics)); });
}

fg_status fg_results_write(const fg_result* const* results, size_t count, const char* path,
                           fg_format format) {
  FG_REQUIRE(results);
  FG_REQUIRE(path);
  return Guard([&] {
    std::vector<ExperimentResult> all;
    for (size_t k = 0; k < count; ++k) {
      if (results[k] == nullptr) Fail(ErrorKind::kConfig, "null result handle");
      all.push_back(results[k]->result);
    }
    WriteResults(all, path, format == FG_FORMAT_JSON ? ResultFormat::kJson : ResultFormat::kCsv);
  });
}

void fg_result_free(fg_result* result) { delete result; }

void fg_search_options_default(fg_search_options* options) {
  if (options) *options = fg_search_options{15, 0, 1, 1};
}

fg_status fg_search_run(const fg_dataset* dataset, const fg_splits* splits,
                        const fg_train_options* base, const fg_search_options* options,
                        fg_search** out) {
  FG_REQUIRE(dataset);
  FG_REQUIRE(splits);
  FG_REQUIRE(base);
  FG_REQUIRE(options);
  FG_REQUIRE(out);
  return Guard([&] {
    SearchSpace space;
    space.trials = options->trials;
    space.seed = options->seed;
    space.batch = options->batch;
    const Dataset& data = dataset->dataset;
    const Splits& split = splits->splits;
    const fg_train_options train_base = *base;
    TrialObjective objective = [&data, &split, train_base](const GridPoint& p, std::size_t) {
      fg_train_options o = train_base;
      o.alpha = p.alpha;
      o.beta = p.beta;
      auto run = TrainRun(data, split, o);
      const TrainHistory& h = run->result.history;
      const EpochRecord& best = h.epochs[h.best_epoch - 1];
      return TrialOutcome{best.hybrid_score, best.validation};
    };
    auto search = std::make_unique<fg_search>();
    search->result = Search(space, objective, options->jobs);
    *out = search.release();
  });
}

fg_status fg_search_best(const fg_search* search, double* alpha, double* beta, double* score) {
  FG_REQUIRE(search);
  if (alpha) *alpha = search->result.best.alpha;
  if (beta) *beta = search->result.best.beta;
  if (score) *score = search->result.best_score;
  return FG_OK;
}

fg_status fg_search_num_trials(const fg_search* search, size_t* count) {
  FG_REQUIRE(search);
  FG_REQUIRE(count);
  *count = search->result.trials.size();
  return FG_OK;
}

fg_status fg_search_grid_points(size_t* count) {
  FG_REQUIRE(count);
  *count = SearchSpace{}.num_points();
  return FG_OK;
}

fg_status fg_search_write_log(const fg_search* search, const char* path) {
  FG_REQUIRE(search);
  FG_REQUIRE(path);
  return Guard([&] { WriteFile(path, TrialLogJsonLines(search->result)); });
}

fg_status fg_search_write_summary(const fg_search* search, const char* path) {
  FG_REQUIRE(search);
  FG_REQUIRE(path);
  return Guard([&] { WriteFile(path, SearchSummaryJson(search->result)); });
}

fg_status fg_search_write_timing(const fg_search* search, const char* path) {
  FG_REQUIRE(search);
  FG_REQUIRE(path);
  return Guard([&] {
    nlohmann::json arr = nlohmann::json::array();
    for (const TrialRecord& t : search->result.trials) {
      arr.push_back({{"trial", t.index}, {"wall_seconds", t.wall_seconds}});
    }
    WriteFile(path, arr.dump(2) + "\n");
  });
}

void fg_search_free(fg_search* search) { delete search; }

fg_status fg_feasibility_check(double x, double y, double tp_b, double fp_b, int* feasible) {
  FG_REQUIRE(feasible);
  return Guard([&] { *feasible = CheckFeasible(BaseRates{x, y}, tp_b, fp_b) ? 1 : 0; });
}

fg_status fg_feasibility_complete(double x, double y, double tp_b, double fp_b,
                                  fg_confusion* group_a, fg_confusion* group_b) {
  FG_REQUIRE(group_a);
  FG_REQUIRE(group_b);
  return Guard([&] {
    const auto [a, b] = CompleteMatrices(BaseRates{x, y}, tp_b, fp_b);
    *group_a = fg_confusion{a.tp, a.fp, a.tn, a.fn};
    *group_b = fg_confusion{b.tp, b.fp, b.tn, b.fn};
  });
}

fg_status fg_feasibility_measure(double x, double y, size_t resolution, size_t threads,
                                 double* measure) {
  FG_REQUIRE(measure);
  return Guard([&] { *measure = RegionMeasure(BaseRates{x, y}, resolution, threads); });
}

fg_status fg_feasibility_write_region(double x, double y, size_t resolution, const char* path) {
  FG_REQUIRE(path);
  return Guard([&] {
    std::ostringstream os;
    WriteRegionCsv(BaseRates{x, y}, resolution, os);
    WriteFile(path, os.str());
  });
}

}  // extern "C"
