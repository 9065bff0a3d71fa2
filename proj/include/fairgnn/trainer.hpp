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
#include <cstdint>
#include <string>
#include <vector>

#include "fairgnn/graph.hpp"
#include "fairgnn/losses.hpp"
#include "fairgnn/metrics.hpp"
#include "fairgnn/models.hpp"

namespace fairgnn {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

struct AdamState {
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::size_t step = 0;
};

// One Adam update with bias correction. Weight decay is added to the
// gradient (L2 form). Moments are zero-initialized on the first call.
// Throws kNumeric on a non-finite gradient and kStructural on shape mismatch.
void AdamStep(std::vector<Matrix>& params, const std::vector<Matrix>& grads, AdamState& state,
              double lr, const AdamHyper& hyper);

struct TrainConfig {
  std::size_t epochs = 100;
  double lr = 1e-2;
  AdamHyper adam;
  std::uint64_t seed = 0;  // dropout stream
  FairnessConfig fairness;
  double threshold = 0.5;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double total_loss = 0.0;
  double pred_loss = 0.0;
  double sp_loss = 0.0;  // unweighted surrogate values on the training set
  double eo_loss = 0.0;
  MetricsReport validation;
  double hybrid_score = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 1-based, earliest maximizer of hybrid_score
};

struct TrainResult {
  ModelParams model;  // snapshot from best_epoch
  TrainHistory history;
};

// Index of the first maximum. Throws kContract on empty input.
std::size_t SelectBestIndex(const std::vector<double>& scores);

// Full-batch loop: for each epoch compute the cross-entropy on splits.train,
// add the weighted fairness surrogates on the same nodes, backpropagate, take
// an Adam step, then score the validation split in eval mode. Returns the
// parameters of the best-scoring epoch. Deterministic for a given seed.
TrainResult Train(const Dataset& dataset, const GraphInputs& inputs, const Splits& splits,
                  ModelParams init, const TrainConfig& config);

MetricsReport Evaluate(const ModelParams& model, const Dataset& dataset, const GraphInputs& inputs,
                       const IndexSet& idx, double threshold = 0.5);

// One JSON object per epoch, newline-terminated.
std::string HistoryToJsonLines(const TrainHistory& history);
TrainHistory HistoryFromJsonLines(const std::string& text);

}  // namespace fairgnn
