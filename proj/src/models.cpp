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

#include "fairgnn/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fairgnn/error.hpp"

namespace fairgnn {

using nlohmann::json;

std::string ToString(EncoderKind kind) { return kind == EncoderKind::kGcn ? "gcn" : "sage"; }

EncoderKind ParseEncoderKind(const std::string& name) {
  if (name == "gcn") return EncoderKind::kGcn;
  if (name == "sage") return EncoderKind::kSage;
  Fail(ErrorKind::kConfig, "unknown model kind '" + name + "' (expected gcn or sage)");
}

void ValidateModelConfig(const ModelConfig& config) {
  if (config.depth < 1 || config.depth > 3) Fail(ErrorKind::kConfig, "depth must be 1, 2 or 3");
  if (config.hidden == 0) Fail(ErrorKind::kConfig, "hidden size must be positive");
  if (config.input_dim == 0) Fail(ErrorKind::kConfig, "input dimension must be positive");
  if (!(config.dropout >= 0.0 && config.dropout < 1.0)) {
    Fail(ErrorKind::kConfig, "dropout must lie in [0, 1)");
  }
}

namespace {

Matrix UniformInit(Rng& rng, std::size_t rows, std::size_t cols) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Row-major fill order so the draw sequence does not depend on storage.
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.Uniform(-bound, bound);
  }
  return m;
}

std::size_t LayerInput(const ModelConfig& config, std::size_t layer) {
  return layer == 0 ? config.input_dim : config.hidden;
}

}  // namespace

ModelParams InitParams(const ModelConfig& config, std::uint64_t seed) {
  ValidateModelConfig(config);
  Rng rng(seed);
  ModelParams params;
  params.config = config;
  params.seed = seed;
  for (std::size_t layer = 0; layer < config.depth; ++layer) {
    const std::size_t in = LayerInput(config, layer);
    params.tensors.push_back(UniformInit(rng, in, config.hidden));
    if (config.kind == EncoderKind::kSage) {
      params.tensors.push_back(UniformInit(rng, in, config.hidden));
    }
  }
  params.tensors.push_back(UniformInit(rng, config.hidden, 1));
  params.tensors.push_back(Matrix::Zero(1, 1));
  return params;
}

void CheckShapes(const ModelParams& params) {
  const ModelConfig& config = params.config;
  ValidateModelConfig(config);
  const std::size_t per_layer = config.kind == EncoderKind::kSage ? 2 : 1;
  if (params.tensors.size() != per_layer * config.depth + 2) {
    Fail(ErrorKind::kStructural, "parameter count does not match model configuration");
  }
  auto expect = [](const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
    if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols) {
      std::ostringstream os;
      os << what << " has shape " << m.rows() << "x" << m.cols() << ", expected " << rows << "x"
         << cols;
      Fail(ErrorKind::kStructural, os.str());
    }
  };
  for (std::size_t layer = 0; layer < config.depth; ++layer) {
    for (std::size_t j = 0; j < per_layer; ++j) {
      expect(params.tensors[layer * per_layer + j], LayerInput(config, layer), config.hidden,
             "encoder weight");
    }
  }
  expect(params.classifier_weight(), config.hidden, 1, "classifier weight");
  expect(params.classifier_bias(), 1, 1, "classifier bias");
}

GraphInputs GraphInputs::From(const Dataset& dataset, bool self_loops) {
  GraphInputs inputs;
  inputs.features = dataset.features();
  inputs.normalized = NormalizeAdjacency(dataset.adjacency(), self_loops);
  inputs.mean_aggregation = MeanAggregationMatrix(dataset.adjacency());
  return inputs;
}

BoundParams BindParameters(Tape& tape, const ModelParams& params) {
  BoundParams bound;
  for (const Matrix& m : params.tensors) bound.all.push_back(tape.Parameter(m));
  bound.encoder.assign(bound.all.begin(), bound.all.end() - 2);
  bound.classifier = bound.all[bound.all.size() - 2];
  bound.bias = bound.all.back();
  return bound;
}

Var MaybeDropout(Tape& tape, Var input, double rate, Rng* rng) {
  if (rng == nullptr || rate <= 0.0) return input;
  const Matrix& x = tape.value(input);
  const double keep = 1.0 - rate;
  Matrix mask(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    for (Eigen::Index c = 0; c < mask.cols(); ++c) {
      mask(r, c) = rng->Uniform() < keep ? 1.0 / keep : 0.0;
    }
  }
  return tape.MaskApply(input, std::move(mask));
}

Var GcnForward(Tape& tape, const ModelConfig& config, const BoundParams& bound, Var features,
               const SparseMatrix& normalized_adjacency, Rng* rng) {
  if (config.kind != EncoderKind::kGcn) Fail(ErrorKind::kConfig, "GcnForward on a non-GCN model");
  if (bound.encoder.size() != config.depth) {
    Fail(ErrorKind::kStructural, "GCN expects one weight per layer");
  }
  Var h = features;
  for (std::size_t layer = 0; layer < config.depth; ++layer) {
    h = MaybeDropout(tape, h, config.dropout, rng);
    h = tape.Relu(tape.SpMM(normalized_adjacency, tape.MatMul(h, bound.encoder[layer])));
  }
  return h;
}

Var SageForward(Tape& tape, const ModelConfig& config, const BoundParams& bound, Var features,
                const SparseMatrix& mean_aggregation, Rng* rng) {
  if (config.kind != EncoderKind::kSage) Fail(ErrorKind::kConfig, "SageForward on a non-SAGE model");
  if (bound.encoder.size() != 2 * config.depth) {
    Fail(ErrorKind::kStructural, "SAGE expects two weights per layer");
  }
  Var h = features;
  for (std::size_t layer = 0; layer < config.depth; ++layer) {
    h = MaybeDropout(tape, h, config.dropout, rng);
    Var self = tape.MatMul(h, bound.encoder[2 * layer]);
    Var neigh = tape.MatMul(tape.SpMM(mean_aggregation, h), bound.encoder[2 * layer + 1]);
    h = tape.Relu(tape.Add(self, neigh));
  }
  return h;
}

Var EncoderForward(Tape& tape, const ModelConfig& config, const BoundParams& bound,
                   const GraphInputs& inputs, Rng* rng) {
  Var x = tape.Constant(inputs.features);
  if (config.kind == EncoderKind::kGcn) {
    return GcnForward(tape, config, bound, x, inputs.normalized.matrix, rng);
  }
  return SageForward(tape, config, bound, x, inputs.mean_aggregation, rng);
}

Var Classify(Tape& tape, Var embeddings, const BoundParams& bound) {
  return tape.Sigmoid(tape.Add(tape.MatMul(embeddings, bound.classifier), bound.bias));
}

Eigen::VectorXd PredictProbabilities(const ModelParams& params, const GraphInputs& inputs) {
  CheckShapes(params);
  if (static_cast<std::size_t>(inputs.features.cols()) != params.config.input_dim) {
    Fail(ErrorKind::kStructural, "feature dimension does not match the model input dimension");
  }
  Tape tape;
  BoundParams bound = BindParameters(tape, params);
  Var h = EncoderForward(tape, params.config, bound, inputs, nullptr);
  return tape.value(Classify(tape, h, bound)).col(0);
}

std::vector<int> PredictLabels(const Eigen::VectorXd& probabilities, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) Fail(ErrorKind::kDomain, "threshold must lie in (0, 1)");
  std::vector<int> labels(static_cast<std::size_t>(probabilities.size()));
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    labels[static_cast<std::size_t>(i)] = probabilities[i] > threshold ? 1 : 0;
  }
  return labels;
}

std::string CheckpointToJson(const ModelParams& params) {
  json doc;
  doc["format"] = "fairgnn-checkpoint";
  doc["version"] = 1;
  doc["encoder"] = ToString(params.config.kind);
  doc["input_dim"] = params.config.input_dim;
  doc["hidden"] = params.config.hidden;
  doc["depth"] = params.config.depth;
  doc["dropout"] = params.config.dropout;
  doc["self_loops"] = params.config.self_loops;
  doc["seed"] = params.seed;
  json tensors = json::array();
  for (const Matrix& m : params.tensors) {
    json t;
    t["rows"] = m.rows();
    t["cols"] = m.cols();
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    }
    t["data"] = std::move(data);
    tensors.push_back(std::move(t));
  }
  doc["tensors"] = std::move(tensors);
  return doc.dump();
}

ModelParams CheckpointFromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorKind::kIo, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "fairgnn-checkpoint") {
      Fail(ErrorKind::kIo, "not a fairgnn checkpoint");
    }
    ModelParams params;
    params.config.kind = ParseEncoderKind(doc.at("encoder").get<std::string>());
    params.config.input_dim = doc.at("input_dim").get<std::size_t>();
    params.config.hidden = doc.at("hidden").get<std::size_t>();
    params.config.depth = doc.at("depth").get<std::size_t>();
    params.config.dropout = doc.at("dropout").get<double>();
    params.config.self_loops = doc.value("self_loops", true);
    params.seed = doc.at("seed").get<std::uint64_t>();
    for (const json& t : doc.at("tensors")) {
      const auto rows = t.at("rows").get<Eigen::Index>();
      const auto cols = t.at("cols").get<Eigen::Index>();
      const auto& data = t.at("data");
      if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
        Fail(ErrorKind::kIo, "checkpoint tensor data does not match its shape");
      }
      Matrix m(rows, cols);
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
      }
      params.tensors.push_back(std::move(m));
    }
    CheckShapes(params);
    return params;
  } catch (const json::exception& e) {
    Fail(ErrorKind::kIo, std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const ModelParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorKind::kIo, "cannot write checkpoint " + path);
  out << CheckpointToJson(params) << '\n';
  if (!out) Fail(ErrorKind::kIo, "failed writing checkpoint " + path);
}

ModelParams LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot open checkpoint " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return CheckpointFromJson(buffer.str());
}

}  // namespace fairgnn
