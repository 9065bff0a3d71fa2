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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairgnn/graph.hpp"
#include "fairgnn/metrics.hpp"

namespace fairgnn {

// Nodes file: header `id,feat_0,...,feat_{d-1},label,sensitive`; label and
// sensitive may be empty. Edges file: header `src,dst`, undirected; duplicate
// edges collapse and self-edges are dropped with a warning.
// Throws kIo (with line number) on parse failures and kSchema on non-binary
// labels/attributes or non-finite features.
Dataset LoadDataset(const std::string& nodes_path, const std::string& edges_path,
                    std::size_t* dropped_self_edges = nullptr);

void SaveDataset(const Dataset& dataset, const std::string& nodes_path,
                 const std::string& edges_path);

struct SyntheticConfig {
  std::size_t n = 1000;
  double label_balance = 0.5;           // P(y = 1)
  double group_balance = 0.5;           // P(s = 1)
  double label_attr_correlation = 0.0;  // Pearson correlation of y and s
  double intra_edge_prob = 0.02;        // edge probability when s agrees
  double inter_edge_prob = 0.004;       // edge probability when s differs
  std::size_t feature_dim = 16;
  // Mean offsets per (y, s) cell: the first ceil(d/2) features are shifted by
  // label_shift * (2y - 1), the rest by attr_shift * (2s - 1).
  double label_shift = 0.5;
  double attr_shift = 1.0;
  std::uint64_t seed = 0;
};

// Throws kConfig on out-of-range values or a correlation that no joint
// distribution with the given balances can reach (the message names the
// bound).
void ValidateSyntheticConfig(const SyntheticConfig& config);

// Flat `key = value` lines; `#` starts a comment. Unknown keys are errors.
SyntheticConfig ParseSyntheticConfig(const std::string& text);
SyntheticConfig LoadSyntheticConfig(const std::string& path);
std::string SyntheticConfigToText(const SyntheticConfig& config);

// Every node gets a label and attribute; edges are drawn independently with
// probability keyed on attribute agreement. Deterministic in config.seed.
Dataset GenerateSynthetic(const SyntheticConfig& config);

std::string SplitsToJson(const Splits& splits);
Splits SplitsFromJson(const std::string& text);
void SaveSplits(const Splits& splits, const std::string& path);
Splits LoadSplits(const std::string& path);

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> std;  // sample (n - 1) formula; 0 for one value
  std::size_t defined = 0;    // seeds on which the metric was defined
};

// Table column order: BACC, AUC, F1, delta_SP, delta_EO.
struct ExperimentResult {
  std::string method;
  std::vector<MetricsReport> per_seed;

  std::array<MetricSummary, 5> Summarize() const;
};

enum class ResultFormat { kCsv, kJson };

// "mean (std)" with two decimals, e.g. "59.70 (3.79)".
std::string FormatMeanStd(double mean, double std);

// CSV: header `method,bacc,auc,f1,delta_sp,delta_eo` and one row per result.
void WriteResults(const std::vector<ExperimentResult>& results, const std::string& path,
                  ResultFormat format);
void WriteResult(const ExperimentResult& result, const std::string& path, ResultFormat format);
std::vector<ExperimentResult> ReadResultsJson(const std::string& path);

// Reads a whole file; throws kIo naming the path.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace fairgnn
