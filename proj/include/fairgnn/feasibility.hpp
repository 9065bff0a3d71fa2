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

#include <cstddef>
#include <optional>
#include <ostream>
#include <utility>

namespace fairgnn {

// Confusion matrix normalized so that the four entries sum to 1.
struct GroupConfusion {
  double tp = 0.0;
  double fp = 0.0;
  double tn = 0.0;
  double fn = 0.0;

  double sum() const { return tp + fp + tn + fn; }
};

// x and y are the negative proportions of groups a and b; their base rates
// are 1 - x and 1 - y. Both must lie in the open interval (0, 1).
struct BaseRates {
  double x = 0.5;
  double y = 0.5;
};

// Throws kDomain for rates outside the open unit square.
void ValidateBaseRates(const BaseRates& rates);

// Whether equal opportunity and statistical parity can hold together with
// group b's free entries fixed at (tp_b, fp_b):
//   (y - x) tp_b <= (1 - y) fp_b       (ratio form, cross-multiplied)
//   fp_b + (x - y) / (1 - y) tp_b <= x
// Throws kDomain unless 0 <= tp_b <= 1 - y and 0 <= fp_b <= y.
bool CheckFeasible(const BaseRates& rates, double tp_b, double fp_b);

// Closed-form completion of both matrices so that TPR and positive-prediction
// rate agree across groups. Throws kConstraint on an infeasible input.
std::pair<GroupConfusion, GroupConfusion> CompleteMatrices(const BaseRates& rates, double tp_b,
                                                           double fp_b);

// Fraction of the box [0, 1-y] x [0, y] that is feasible, sampled at cell
// centres of a resolution x resolution grid. Rows are split across `threads`;
// the count is an integer so the result does not depend on the split.
double RegionMeasure(const BaseRates& rates, std::size_t resolution, std::size_t threads = 1);

// Writes "tp_b,fp_b,feasible" rows for every cell centre of the same grid.
void WriteRegionCsv(const BaseRates& rates, std::size_t resolution, std::ostream& out);

struct FairnessGaps {
  std::optional<double> eo_gap;  // undefined when a group has no positive mass
  double sp_gap = 0.0;
};

// eo_gap = |TPR_a - TPR_b|, sp_gap = |(tp_a + fp_a) - (tp_b + fp_b)|.
FairnessGaps VerifyFairnessOfCompletion(const GroupConfusion& a, const GroupConfusion& b);

}  // namespace fairgnn
