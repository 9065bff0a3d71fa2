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

#include "fairgnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "fairgnn/error.hpp"
#include "internal/json_convert.hpp"

namespace fairgnn {
namespace {

int Observed(const std::vector<Observation>& values, std::size_t i, const char* what) {
  if (i >= values.size() || !values[i]) {
    Fail(ErrorKind::kConfig, std::string("node ") + std::to_string(i) + " has no observed " + what);
  }
  return *values[i];
}

int Predicted(const std::vector<int>& predictions, std::size_t i) {
  if (i >= predictions.size()) Fail(ErrorKind::kStructural, "prediction index out of range");
  return predictions[i];
}

std::optional<double> RateGap(std::size_t hits1, std::size_t total1, std::size_t hits0,
                              std::size_t total0) {
  if (total1 == 0 || total0 == 0) return std::nullopt;
  const double r1 = static_cast<double>(hits1) / static_cast<double>(total1);
  const double r0 = static_cast<double>(hits0) / static_cast<double>(total0);
  return 100.0 * std::abs(r1 - r0);
}

std::string FormatPercentage(const Percentage& p) {
  if (!p) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *p);
  return buf;
}

}  // namespace

Percentage DeltaSp(const std::vector<int>& predictions, const std::vector<Observation>& sensitive,
                   const IndexSet& idx) {
  std::array<std::size_t, 2> total{};
  std::array<std::size_t, 2> positive{};
  for (std::size_t i : idx) {
    const int s = Observed(sensitive, i, "sensitive attribute");
    ++total[s];
    positive[s] += Predicted(predictions, i) == 1 ? 1 : 0;
  }
  return RateGap(positive[1], total[1], positive[0], total[0]);
}

Percentage DeltaEo(const std::vector<int>& predictions, const std::vector<Observation>& labels,
                   const std::vector<Observation>& sensitive, const IndexSet& idx) {
  std::array<std::size_t, 2> total{};
  std::array<std::size_t, 2> hits{};
  for (std::size_t i : idx) {
    if (Observed(labels, i, "label") != 1) continue;
    const int s = Observed(sensitive, i, "sensitive attribute");
    ++total[s];
    hits[s] += Predicted(predictions, i) == 1 ? 1 : 0;
  }
  return RateGap(hits[1], total[1], hits[0], total[0]);
}

Percentage BalancedAccuracy(const std::vector<int>& predictions,
                            const std::vector<Observation>& labels, const IndexSet& idx) {
  std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i : idx) {
    const int y = Observed(labels, i, "label");
    const int p = Predicted(predictions, i);
    if (y == 1) {
      (p == 1 ? tp : fn) += 1;
    } else {
      (p == 1 ? fp : tn) += 1;
    }
  }
  if (tp + fn == 0 || tn + fp == 0) return std::nullopt;
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return 100.0 * (tpr + tnr) / 2.0;
}

Percentage Auc(const Eigen::VectorXd& probabilities, const std::vector<Observation>& labels,
               const IndexSet& idx) {
  std::vector<std::size_t> order(idx);
  for (std::size_t i : order) {
    if (i >= static_cast<std::size_t>(probabilities.size())) {
      Fail(ErrorKind::kStructural, "probability index out of range");
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probabilities[static_cast<Eigen::Index>(a)] < probabilities[static_cast<Eigen::Index>(b)];
  });
  // Sum of midranks of the positives.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    const double value = probabilities[static_cast<Eigen::Index>(order[k])];
    while (end < order.size() && probabilities[static_cast<Eigen::Index>(order[end])] == value) ++end;
    const double midrank = (static_cast<double>(k + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t j = k; j < end; ++j) {
      if (Observed(labels, order[j], "label") == 1) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    k = end;
  }
  const std::size_t negatives = order.size() - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const double np = static_cast<double>(positives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return 100.0 * u / (np * static_cast<double>(negatives));
}

double F1(const std::vector<int>& predictions, const std::vector<Observation>& labels,
          const IndexSet& idx) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i : idx) {
    const int y = Observed(labels, i, "label");
    const int p = Predicted(predictions, i);
    if (y == 1 && p == 1) ++tp;
    if (y == 0 && p == 1) ++fp;
    if (y == 1 && p == 0) ++fn;
  }
  const std::size_t denominator = 2 * tp + fp + fn;
  if (denominator == 0) return 0.0;
  return 100.0 * static_cast<double>(2 * tp) / static_cast<double>(denominator);
}

double HybridScore(double bacc, double delta_eo, double delta_sp) {
  return bacc + 0.5 * ((100.0 - delta_eo) + (100.0 - delta_sp));
}

double MetricsReport::hybrid_score() const {
  return HybridScore(bacc.value_or(0.0), delta_eo.value_or(100.0), delta_sp.value_or(100.0));
}

MetricsReport ComputeMetrics(const Eigen::VectorXd& probabilities,
                             const std::vector<int>& predictions,
                             const std::vector<Observation>& labels,
                             const std::vector<Observation>& sensitive, const IndexSet& idx) {
  MetricsReport report;
  report.bacc = BalancedAccuracy(predictions, labels, idx);
  report.auc = Auc(probabilities, labels, idx);
  report.f1 = F1(predictions, labels, idx);
  report.delta_sp = DeltaSp(predictions, sensitive, idx);
  report.delta_eo = DeltaEo(predictions, labels, sensitive, idx);
  for (std::size_t i : idx) {
    const int y = Observed(labels, i, "label");
    const int s = Observed(sensitive, i, "sensitive attribute");
    ++report.cells[y][s][Predicted(predictions, i) == 1 ? 1 : 0];
  }
  report.evaluated = idx.size();
  return report;
}

std::string MetricsCsvRow(const MetricsReport& report) {
  return FormatPercentage(report.bacc) + "," + FormatPercentage(report.auc) + "," +
         FormatPercentage(report.f1) + "," + FormatPercentage(report.delta_sp) + "," +
         FormatPercentage(report.delta_eo);
}

namespace internal {

nlohmann::json MetricsJson(const MetricsReport& report) {
  nlohmann::json j;
  j["bacc"] = PercentageJson(report.bacc);
  j["auc"] = PercentageJson(report.auc);
  j["f1"] = PercentageJson(report.f1);
  j["delta_sp"] = PercentageJson(report.delta_sp);
  j["delta_eo"] = PercentageJson(report.delta_eo);
  j["evaluated"] = report.evaluated;
  nlohmann::json cells = nlohmann::json::array();
  for (int y = 0; y < 2; ++y) {
    for (int s = 0; s < 2; ++s) {
      for (int p = 0; p < 2; ++p) {
        cells.push_back({{"y", y}, {"s", s}, {"y_hat", p}, {"count", report.cells[y][s][p]}});
      }
    }
  }
  j["cells"] = std::move(cells);
  return j;
}

MetricsReport MetricsFrom(const nlohmann::json& j) {
  MetricsReport report;
  report.bacc = PercentageFrom(j.at("bacc"));
  report.auc = PercentageFrom(j.at("auc"));
  report.f1 = PercentageFrom(j.at("f1"));
  report.delta_sp = PercentageFrom(j.at("delta_sp"));
  report.delta_eo = PercentageFrom(j.at("delta_eo"));
  report.evaluated = j.value("evaluated", std::size_t{0});
  if (j.contains("cells")) {
    for (const auto& c : j.at("cells")) {
      report.cells[c.at("y").get<int>()][c.at("s").get<int>()][c.at("y_hat").get<int>()] =
          c.at("count").get<std::size_t>();
    }
  }
  return report;
}

}  // namespace internal

std::string MetricsToJson(const MetricsReport& report) { return internal::MetricsJson(report).dump(); }

MetricsReport MetricsFromJson(const std::string& text) {
  try {
    return internal::MetricsFrom(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kIo, std::string("malformed metrics JSON: ") + e.what());
  }
}

}  // namespace fairgnn
