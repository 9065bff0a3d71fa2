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

#include "fairgnn/losses.hpp"

#include <cmath>

#include "fairgnn/error.hpp"
#include "fairgnn/log.hpp"

namespace fairgnn {
namespace {

constexpr double kLogClampLow = 1e-7;
constexpr double kLogClampHigh = 1.0 - 1e-7;

Var GroupGap(Tape& tape, Var probabilities, const IndexSet& first, const IndexSet& second,
             EmptyGroupPolicy policy, const char* name) {
  if (first.empty() || second.empty()) {
    const std::string msg = std::string(name) + ": a sensitive group has no members in the labeled set";
    if (policy == EmptyGroupPolicy::kError) Fail(ErrorKind::kConfig, msg);
    Warn(msg + "; term contributes 0");
    return tape.Constant(0.0);
  }
  return tape.Abs(tape.Sub(tape.MeanOver(probabilities, first), tape.MeanOver(probabilities, second)));
}

}  // namespace

void ValidateFairnessConfig(const FairnessConfig& config) {
  if (!std::isfinite(config.alpha) || config.alpha < 0.0 || !std::isfinite(config.beta) ||
      config.beta < 0.0) {
    Fail(ErrorKind::kConfig, "alpha and beta must be finite and non-negative");
  }
}

GroupIndexSets ResolveGroups(const std::vector<Observation>& labels,
                             const std::vector<Observation>& sensitive, const IndexSet& labeled) {
  GroupIndexSets groups;
  for (std::size_t i : labeled) {
    if (i >= labels.size() || !labels[i] || !sensitive[i]) continue;
    const bool positive = *labels[i] == 1;
    if (*sensitive[i] == 1) {
      groups.d1.push_back(i);
      if (positive) groups.p1.push_back(i);
    } else {
      groups.d0.push_back(i);
      if (positive) groups.p0.push_back(i);
    }
  }
  return groups;
}

Var PredictionLoss(Tape& tape, Var probabilities, const std::vector<Observation>& labels,
                   const IndexSet& labeled) {
  if (labeled.empty()) Fail(ErrorKind::kConfig, "cross-entropy over an empty labeled set");
  IndexSet positives;
  IndexSet negatives;
  for (std::size_t i : labeled) {
    if (i >= labels.size() || !labels[i]) {
      Fail(ErrorKind::kConfig, "labeled node " + std::to_string(i) + " has no label");
    }
    (*labels[i] == 1 ? positives : negatives).push_back(i);
  }
  const double total = static_cast<double>(labeled.size());
  Var loss = tape.Constant(0.0);
  if (!positives.empty()) {
    Var nll = tape.NegLog(probabilities, kLogClampLow, kLogClampHigh);
    loss = tape.Add(loss, tape.Scale(tape.MeanOver(nll, positives),
                                     static_cast<double>(positives.size()) / total));
  }
  if (!negatives.empty()) {
    Var complement = tape.Sub(tape.Constant(1.0), probabilities);
    Var nll = tape.NegLog(complement, kLogClampLow, kLogClampHigh);
    loss = tape.Add(loss, tape.Scale(tape.MeanOver(nll, negatives),
                                     static_cast<double>(negatives.size()) / total));
  }
  return loss;
}

Var StatisticalParityLoss(Tape& tape, Var probabilities, const GroupIndexSets& groups,
                          EmptyGroupPolicy policy) {
  return GroupGap(tape, probabilities, groups.d1, groups.d0, policy, "statistical parity loss");
}

Var EqualOpportunityLoss(Tape& tape, Var probabilities, const GroupIndexSets& groups,
                         EmptyGroupPolicy policy) {
  return GroupGap(tape, probabilities, groups.p1, groups.p0, policy, "equal opportunity loss");
}

Var FairnessLoss(Tape& tape, Var probabilities, const GroupIndexSets& groups,
                 const FairnessConfig& config) {
  ValidateFairnessConfig(config);
  Var loss = tape.Constant(0.0);
  if (config.alpha > 0.0) {
    Var eo = EqualOpportunityLoss(tape, probabilities, groups, config.empty_group_policy);
    loss = tape.Add(loss, tape.Scale(eo, config.alpha));
  }
  if (config.beta > 0.0) {
    Var sp = StatisticalParityLoss(tape, probabilities, groups, config.empty_group_policy);
    loss = tape.Add(loss, tape.Scale(sp, config.beta));
  }
  return loss;
}

Var TotalLoss(Tape& tape, Var base_loss, Var probabilities, const GroupIndexSets& groups,
              const FairnessConfig& config) {
  if (config.alpha == 0.0 && config.beta == 0.0) {
    ValidateFairnessConfig(config);
    return base_loss;
  }
  return tape.Add(base_loss, FairnessLoss(tape, probabilities, groups, config));
}

}  // namespace fairgnn
