/*
 * Copyright 2026 The FairGNN Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the fairgnn engine.
 *
 * Objects are opaque handles created by fg_*_create/load/make functions and
 * released by the matching fg_*_free. Every fallible call returns an
 * fg_status; on failure fg_last_error() describes the problem. The message is
 * thread-local and valid until the next failing call on the same thread.
 *
 * Handles may be shared read-only across threads (e.g. one dataset used by
 * several concurrent fg_train calls). Mutating calls (fg_result_add) need
 * external synchronization.
 *
 * Metrics are percentages; NaN marks a metric undefined on the evaluated set.
 */
#ifndef FAIRGNN_FAIRGNN_H_
#define FAIRGNN_FAIRGNN_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FAIRGNN_BUILDING_LIBRARY)
#define FAIRGNN_API __attribute__((visibility("default")))
#else
#define FAIRGNN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fg_status {
  FG_OK = 0,
  FG_ERR_INVALID_ARGUMENT = 1,
  FG_ERR_STRUCTURAL = 2,
  FG_ERR_CONFIG = 3,
  FG_ERR_DOMAIN = 4,
  FG_ERR_IO = 5,
  FG_ERR_CONTRACT = 6,
  FG_ERR_NUMERIC = 7,
  FG_ERR_CONSTRAINT = 8,
  FG_ERR_SEARCH = 9,
  FG_ERR_UNDEFINED = 10,
  FG_ERR_SCHEMA = 11,
  FG_ERR_INTERNAL = 12
} fg_status;

typedef enum fg_model_kind { FG_MODEL_GCN = 0, FG_MODEL_SAGE = 1 } fg_model_kind;
typedef enum fg_split_kind { FG_SPLIT_TRAIN = 0, FG_SPLIT_VAL = 1, FG_SPLIT_TEST = 2 } fg_split_kind;
typedef enum fg_format { FG_FORMAT_CSV = 0, FG_FORMAT_JSON = 1 } fg_format;

typedef struct fg_dataset fg_dataset;
typedef struct fg_splits fg_splits;
typedef struct fg_model fg_model;
typedef struct fg_run fg_run;
typedef struct fg_result fg_result;
typedef struct fg_search fg_search;

FAIRGNN_API const char* fg_version(void);
FAIRGNN_API const char* fg_last_error(void);
FAIRGNN_API const char* fg_status_name(fg_status status);
/* Frees strings returned through char** out-parameters. */
FAIRGNN_API void fg_string_free(char* text);

/* Routes library warnings to `handler`; NULL restores the stderr default.
 * The handler may be called from any thread, one call at a time. */
typedef void (*fg_warning_handler)(const char* message, void* user);
FAIRGNN_API void fg_set_warning_handler(fg_warning_handler handler, void* user);

/* ---- datasets ---------------------------------------------------------- */

typedef struct fg_dataset_info {
  size_t num_nodes;
  size_t num_features;
  size_t num_edges;
  size_t num_labeled;
} fg_dataset_info;

typedef struct fg_synthetic_config {
  size_t n;
  double label_balance;
  double group_balance;
  double label_attr_correlation;
  double intra_edge_prob;
  double inter_edge_prob;
  size_t feature_dim;
  double label_shift;
  double attr_shift;
  uint64_t seed;
} fg_synthetic_config;

FAIRGNN_API void fg_synthetic_config_default(fg_synthetic_config* config);
/* Reads flat `key = value` lines; keys match the struct fields. */
FAIRGNN_API fg_status fg_synthetic_config_load(const char* path, fg_synthetic_config* config);

FAIRGNN_API fg_status fg_dataset_load(const char* nodes_path, const char* edges_path,
                                      fg_dataset** out);
FAIRGNN_API fg_status fg_dataset_synthesize(const fg_synthetic_config* config, fg_dataset** out);
FAIRGNN_API fg_status fg_dataset_save(const fg_dataset* dataset, const char* nodes_path,
                                      const char* edges_path);
FAIRGNN_API fg_status fg_dataset_get_info(const fg_dataset* dataset, fg_dataset_info* info);
/* Number of invariant violations; when `report` is non-NULL it receives a
 * newline-separated description (free with fg_string_free). */
FAIRGNN_API fg_status fg_dataset_validate(const fg_dataset* dataset, size_t* violations,
                                          char** report);
FAIRGNN_API void fg_dataset_free(fg_dataset* dataset);

/* ---- splits ------------------------------------------------------------ */

FAIRGNN_API fg_status fg_splits_make(const fg_dataset* dataset, size_t labeled_count,
                                     uint64_t seed, fg_splits** out);
FAIRGNN_API fg_status fg_splits_load(const char* path, fg_splits** out);
FAIRGNN_API fg_status fg_splits_save(const fg_splits* splits, const char* path);
FAIRGNN_API fg_status fg_splits_size(const fg_splits* splits, fg_split_kind which, size_t* size);
FAIRGNN_API void fg_splits_free(fg_splits* splits);

/* ---- training ---------------------------------------------------------- */

typedef struct fg_train_options {
  fg_model_kind model;
  size_t hidden;
  size_t layers;
  double dropout;
  size_t epochs;
  double lr;
  double weight_decay;
  double alpha; /* equal-opportunity weight */
  double beta;  /* statistical-parity weight */
  uint64_t seed;
  int self_loops;          /* nonzero: add self-loops before normalizing */
  int strict_empty_groups; /* nonzero: an empty sensitive group is an error */
  double threshold;
} fg_train_options;

typedef struct fg_metrics {
  double bacc;
  double auc;
  double f1;
  double delta_sp;
  double delta_eo;
} fg_metrics;

FAIRGNN_API void fg_train_options_default(fg_train_options* options);

/* Initializes weights from options->seed, trains, and keeps the parameters
 * of the epoch with the best validation hybrid score. */
FAIRGNN_API fg_status fg_train(const fg_dataset* dataset, const fg_splits* splits,
                               const fg_train_options* options, fg_run** out);
/* Metrics of the selected model on one split. */
FAIRGNN_API fg_status fg_run_metrics(const fg_run* run, fg_split_kind which, fg_metrics* out);
FAIRGNN_API fg_status fg_run_best_epoch(const fg_run* run, size_t* epoch, double* score);
FAIRGNN_API fg_status fg_run_wall_seconds(const fg_run* run, double* seconds);
/* JSON lines, one record per epoch. */
FAIRGNN_API fg_status fg_run_write_history(const fg_run* run, const char* path);
FAIRGNN_API fg_status fg_run_write_checkpoint(const fg_run* run, const char* path);
FAIRGNN_API void fg_run_free(fg_run* run);

FAIRGNN_API fg_status fg_model_load(const char* checkpoint_path, fg_model** out);
FAIRGNN_API fg_status fg_model_save(const fg_model* model, const char* checkpoint_path);
FAIRGNN_API fg_status fg_model_evaluate(const fg_model* model, const fg_dataset* dataset,
                                        const fg_splits* splits, fg_split_kind which,
                                        double threshold, fg_metrics* out);
/* Writes num_nodes probabilities into `probabilities` (capacity `count`). */
FAIRGNN_API fg_status fg_model_predict(const fg_model* model, const fg_dataset* dataset,
                                       double* probabilities, size_t count);
FAIRGNN_API void fg_model_free(fg_model* model);

/* Hybrid model-selection score: bacc + ((100 - delta_eo) + (100 - delta_sp)) / 2.
 * NaN inputs count as their worst value. */
FAIRGNN_API double fg_hybrid_score(double bacc, double delta_eo, double delta_sp);

/* ---- aggregated results ------------------------------------------------ */

FAIRGNN_API fg_status fg_result_create(const char* method, fg_result** out);
FAIRGNN_API fg_status fg_result_add(fg_result* result, const fg_metrics* metrics);
/* CSV cells are "mean (std)" with two decimals. */
FAIRGNN_API fg_status fg_results_write(const fg_result* const* results, size_t count,
                                       const char* path, fg_format format);
FAIRGNN_API void fg_result_free(fg_result* result);

/* ---- (alpha, beta) search ---------------------------------------------- */

typedef struct fg_search_options {
  size_t trials;
  uint64_t seed;
  size_t batch;
  size_t jobs;
} fg_search_options;

FAIRGNN_API void fg_search_options_default(fg_search_options* options);
/* Each trial trains with `base` plus the suggested (alpha, beta) and scores
 * the best validation hybrid score. */
FAIRGNN_API fg_status fg_search_run(const fg_dataset* dataset, const fg_splits* splits,
                                    const fg_train_options* base, const fg_search_options* options,
                                    fg_search** out);
FAIRGNN_API fg_status fg_search_best(const fg_search* search, double* alpha, double* beta,
                                     double* score);
FAIRGNN_API fg_status fg_search_num_trials(const fg_search* search, size_t* count);
FAIRGNN_API fg_status fg_search_grid_points(size_t* count);
/* Trial log (JSON lines), summary with convergence curve, and wall-times. */
FAIRGNN_API fg_status fg_search_write_log(const fg_search* search, const char* path);
FAIRGNN_API fg_status fg_search_write_summary(const fg_search* search, const char* path);
FAIRGNN_API fg_status fg_search_write_timing(const fg_search* search, const char* path);
FAIRGNN_API void fg_search_free(fg_search* search);

/* ---- EO + SP feasibility ------------------------------------------------ */

typedef struct fg_confusion {
  double tp;
  double fp;
  double tn;
  double fn;
} fg_confusion;

FAIRGNN_API fg_status fg_feasibility_check(double x, double y, double tp_b, double fp_b,
                                           int* feasible);
FAIRGNN_API fg_status fg_feasibility_complete(double x, double y, double tp_b, double fp_b,
                                              fg_confusion* group_a, fg_confusion* group_b);
FAIRGNN_API fg_status fg_feasibility_measure(double x, double y, size_t resolution,
                                             size_t threads, double* measure);
/* CSV rows tp_b,fp_b,feasible over the resolution x resolution grid. */
FAIRGNN_API fg_status fg_feasibility_write_region(double x, double y, size_t resolution,
                                                  const char* path);

#ifdef __cplusplus
}
#endif

#endif /* FAIRGNN_FAIRGNN_H_ */
