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

#include <vector>

#include "fairgnn/autodiff.hpp"
#include "fairgnn/graph.hpp"

namespace fairgnn {

enum class EmptyGroupPolicy {
  kZero,   // contribute 0 and warn
  kError,  // throw kConfig
};

struct FairnessConfig {
  double alpha = 0.0;  // weight of the equal-opportunity term
  double beta = 0.0;   // weight of the statistical-parity term
  EmptyGroupPolicy empty_group_policy = EmptyGroupPolicy::kZero;
};

// Throws kConfig unless alpha and beta are finite and non-negative.
void ValidateFairnessConfig(const FairnessConfig& config);

// Partition of a labeled index set by sensitive attribute (D) and, among the
// positives, by attribute (P).
struct GroupIndexSets {
  IndexSet d1;  // s = 1
  IndexSet d0;  // s = 0
  IndexSet p1;  // y = 1, s = 1
  IndexSet p0;  // y = 1, s = 0
};

// Nodes in `labeled` without both observations are skipped.
GroupIndexSets ResolveGroups(const std::vector<Observation>& labels,
                             const std::vector<Observation>& sensitive, const IndexSet& labeled);

// Binary cross-entropy averaged over `labeled`. Probabilities are clamped to
// [1e-7, 1 - 1e-7] inside the logarithm only.
Var PredictionLoss(Tape& tape, Var probabilities, const std::vector<Observation>& labels,
                   const IndexSet& labeled);

// |mean_{D1} p - mean_{D0} p|
Var StatisticalParityLoss(Tape& tape, Var probabilities, const GroupIndexSets& groups,
                          EmptyGroupPolicy policy = EmptyGroupPolicy::kZero);

// |mean_{P1} p - mean_{P0} p|
Var EqualOpportunityLoss(Tape& tape, Var probabilities, const GroupIndexSets& groups,
                         EmptyGroupPolicy policy = EmptyGroupPolicy::kZero);

// alpha * L_EO + beta * L_SP. A term with zero weight is not recorded.
Var FairnessLoss(Tape& tape, Var probabilities, const GroupIndexSets& groups,
                 const FairnessConfig& config);

// base_loss + FairnessLoss. `base_loss` may be any scalar on the tape, so any
// model's native objective can take the regularizer.
Var TotalLoss(Tape& tape, Var base_loss, Var probabilities, const GroupIndexSets& groups,
              const FairnessConfig& config);

}  // namespace fairgnn
