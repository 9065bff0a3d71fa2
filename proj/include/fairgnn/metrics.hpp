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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairgnn/graph.hpp"

namespace fairgnn {

// All metrics are percentages in [0, 100]. std::nullopt marks a metric that
// is undefined on the evaluated set (empty group or single class); it is
// never silently reported as 0.
using Percentage = std::optional<double>;

// 100 * |P(y_hat=1 | s=1) - P(y_hat=1 | s=0)|
Percentage DeltaSp(const std::vector<int>& predictions, const std::vector<Observation>& sensitive,
                   const IndexSet& idx);

// 100 * |TPR(s=1) - TPR(s=0)|
Percentage DeltaEo(const std::vector<int>& predictions, const std::vector<Observation>& labels,
                   const std::vector<Observation>& sensitive, const IndexSet& idx);

// 100 * (TPR + TNR) / 2
Percentage BalancedAccuracy(const std::vector<int>& predictions,
                            const std::vector<Observation>& labels, const IndexSet& idx);

// Mann-Whitney: probability that a random positive outranks a random
// negative, ties counted one half.
Percentage Auc(const Eigen::VectorXd& probabilities, const std::vector<Observation>& labels,
               const IndexSet& idx);

// 100 * 2TP / (2TP + FP + FN); 0 when the denominator is 0.
double F1(const std::vector<int>& predictions, const std::vector<Observation>& labels,
          const IndexSet& idx);

// BACC + ((100 - delta_eo) + (100 - delta_sp)) / 2
double HybridScore(double bacc, double delta_eo, double delta_sp);

// counts[y][s][y_hat]
using CellCounts = std::array<std::array<std::array<std::size_t, 2>, 2>, 2>;

struct MetricsReport {
  Percentage bacc;
  Percentage auc;
  Percentage f1;
  Percentage delta_sp;
  Percentage delta_eo;
  CellCounts cells{};
  std::size_t evaluated = 0;

  // Undefined components are replaced by their worst value (BACC 0, gaps
  // 100), so a report with undefined parts never outranks a defined one.
  double hybrid_score() const;
};

MetricsReport ComputeMetrics(const Eigen::VectorXd& probabilities,
                             const std::vector<int>& predictions,
                             const std::vector<Observation>& labels,
                             const std::vector<Observation>& sensitive, const IndexSet& idx);

// Column order BACC, AUC, F1, delta_SP, delta_EO.
inline constexpr const char* kMetricsCsvHeader = "bacc,auc,f1,delta_sp,delta_eo";
std::string MetricsCsvRow(const MetricsReport& report);
std::string MetricsToJson(const MetricsReport& report);
MetricsReport MetricsFromJson(const std::string& text);

}  // namespace fairgnn
