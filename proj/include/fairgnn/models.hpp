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

#include "fairgnn/autodiff.hpp"
#include "fairgnn/graph.hpp"
#include "fairgnn/random.hpp"

namespace fairgnn {

enum class EncoderKind { kGcn, kSage };

std::string ToString(EncoderKind kind);
EncoderKind ParseEncoderKind(const std::string& name);

struct ModelConfig {
  EncoderKind kind = EncoderKind::kGcn;
  std::size_t input_dim = 0;
  std::size_t hidden = 16;
  std::size_t depth = 2;
  double dropout = 0.2;
  bool self_loops = true;  // GCN normalization policy, kept with the weights
};

// Flat parameter list. Layout:
//   gcn:  W_0 .. W_{depth-1}
//   sage: (W_self_0, W_neigh_0) .. (W_self_{depth-1}, W_neigh_{depth-1})
// followed by the classifier weight (hidden x 1) and bias (1 x 1).
struct ModelParams {
  ModelConfig config;
  std::uint64_t seed = 0;
  std::vector<Matrix> tensors;

  std::size_t num_encoder_tensors() const { return tensors.size() - 2; }
  const Matrix& classifier_weight() const { return tensors[tensors.size() - 2]; }
  const Matrix& classifier_bias() const { return tensors.back(); }
};

// Throws kConfig for depth outside [1, 3], hidden == 0, input_dim == 0, or
// dropout outside [0, 1).
void ValidateModelConfig(const ModelConfig& config);

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; bias zero.
ModelParams InitParams(const ModelConfig& config, std::uint64_t seed);

// Checks that tensor shapes chain for the configured kind and depth.
void CheckShapes(const ModelParams& params);

// Fixed graph operators shared by every forward pass over one dataset.
struct GraphInputs {
  Matrix features;
  NormalizedAdjacency normalized;
  SparseMatrix mean_aggregation;

  static GraphInputs From(const Dataset& dataset, bool self_loops = true);
};

struct BoundParams {
  std::vector<Var> encoder;
  Var classifier;
  Var bias;
  std::vector<Var> all;  // same order as ModelParams::tensors
};

BoundParams BindParameters(Tape& tape, const ModelParams& params);

// Applies inverted dropout with drop probability `rate` when rng is non-null.
Var MaybeDropout(Tape& tape, Var input, double rate, Rng* rng);

// relu(A_hat relu(... A_hat X W_0 ...) W_{k-1}); dropout on each layer input
// in training mode (rng != nullptr).
Var GcnForward(Tape& tape, const ModelConfig& config, const BoundParams& bound, Var features,
               const SparseMatrix& normalized_adjacency, Rng* rng);

// Per layer: relu(h W_self + mean_neighbors(h) W_neigh). Equivalent to a
// single map over concat(h, mean_neighbors(h)); isolated nodes aggregate a
// zero vector.
Var SageForward(Tape& tape, const ModelConfig& config, const BoundParams& bound, Var features,
                const SparseMatrix& mean_aggregation, Rng* rng);

Var EncoderForward(Tape& tape, const ModelConfig& config, const BoundParams& bound,
                   const GraphInputs& inputs, Rng* rng);

// sigmoid(H phi + b), an n x 1 column of probabilities.
Var Classify(Tape& tape, Var embeddings, const BoundParams& bound);

// Eval-mode convenience: probabilities for every node.
Eigen::VectorXd PredictProbabilities(const ModelParams& params, const GraphInputs& inputs);

// y_hat = 1 iff p > threshold.
std::vector<int> PredictLabels(const Eigen::VectorXd& probabilities, double threshold = 0.5);

void SaveCheckpoint(const ModelParams& params, const std::string& path);
ModelParams LoadCheckpoint(const std::string& path);

std::string CheckpointToJson(const ModelParams& params);
ModelParams CheckpointFromJson(const std::string& text);

}  // namespace fairgnn
