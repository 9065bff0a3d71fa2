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

#include "fairgnn/trainer.hpp"

#include <cmath>
#include <sstream>

#include "fairgnn/error.hpp"
#include "fairgnn/log.hpp"
#include "internal/json_convert.hpp"

namespace fairgnn {
namespace {

double GroupMeanGap(const Eigen::VectorXd& p, const IndexSet& first, const IndexSet& second) {
  if (first.empty() || second.empty()) return 0.0;
  auto mean = [&p](const IndexSet& set) {
    double total = 0.0;
    for (std::size_t i : set) total += p[static_cast<Eigen::Index>(i)];
    return total / static_cast<double>(set.size());
  };
  return std::abs(mean(first) - mean(second));
}

// Mixes the run seed into a separate stream for dropout masks.
constexpr std::uint64_t kDropoutStream = 0x9e3779b97f4a7c15ULL;

}  // namespace

void AdamStep(std::vector<Matrix>& params, const std::vector<Matrix>& grads, AdamState& state,
              double lr, const AdamHyper& hyper) {
  if (params.size() != grads.size()) Fail(ErrorKind::kStructural, "adam: parameter/gradient count mismatch");
  if (state.step == 0) {
    state.first_moment.clear();
    state.second_moment.clear();
    for (const Matrix& p : params) {
      state.first_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
      state.second_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (grads[k].rows() != params[k].rows() || grads[k].cols() != params[k].cols()) {
      Fail(ErrorKind::kStructural, "adam: gradient shape does not match parameter");
    }
    if (!grads[k].allFinite()) Fail(ErrorKind::kNumeric, "adam: non-finite gradient");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(hyper.beta1, t);
  const double correction2 = 1.0 - std::pow(hyper.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix g = grads[k];
    if (hyper.weight_decay != 0.0) g += hyper.weight_decay * params[k];
    Matrix& m = state.first_moment[k];
    Matrix& v = state.second_moment[k];
    m = hyper.beta1 * m + (1.0 - hyper.beta1) * g;
    v = hyper.beta2 * v + (1.0 - hyper.beta2) * g.cwiseProduct(g);
    const Eigen::ArrayXXd m_hat = m.array() / correction1;
    const Eigen::ArrayXXd v_hat = v.array() / correction2;
    params[k].array() -= lr * m_hat / (v_hat.sqrt() + hyper.eps);
  }
}

std::size_t SelectBestIndex(const std::vector<double>& scores) {
  if (scores.empty()) Fail(ErrorKind::kContract, "no scores to select from");
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

TrainResult Train(const Dataset& dataset, const GraphInputs& inputs, const Splits& splits,
                  ModelParams init, const TrainConfig& config) {
  if (config.epochs < 1) Fail(ErrorKind::kConfig, "epochs must be at least 1");
  if (!(config.lr > 0.0)) Fail(ErrorKind::kConfig, "learning rate must be positive");
  ValidateFairnessConfig(config.fairness);
  CheckShapes(init);
  if (splits.train.empty()) Fail(ErrorKind::kConfig, "training split is empty");

  const GroupIndexSets groups = ResolveGroups(dataset.labels(), dataset.sensitive(), splits.train);
  FairnessConfig fairness = config.fairness;
  // Empty groups are reported once per run rather than once per epoch.
  if (fairness.beta > 0.0 && (groups.d0.empty() || groups.d1.empty())) {
    if (fairness.empty_group_policy == EmptyGroupPolicy::kError) {
      Fail(ErrorKind::kConfig, "statistical parity loss: a sensitive group is empty in the training split");
    }
    Warn("statistical parity loss: a sensitive group is empty in the training split; term contributes 0");
    fairness.beta = 0.0;
  }
  if (fairness.alpha > 0.0 && (groups.p0.empty() || groups.p1.empty())) {
    if (fairness.empty_group_policy == EmptyGroupPolicy::kError) {
      Fail(ErrorKind::kConfig, "equal opportunity loss: a group has no positive training nodes");
    }
    Warn("equal opportunity loss: a group has no positive training nodes; term contributes 0");
    fairness.alpha = 0.0;
  }

  Rng dropout_rng(config.seed ^ kDropoutStream);
  ModelParams current = std::move(init);
  ModelParams best = current;
  AdamState adam;
  TrainHistory history;
  double best_score = -std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    Tape tape;
    BoundParams bound = BindParameters(tape, current);
    Var h = EncoderForward(tape, current.config, bound, inputs, &dropout_rng);
    Var p = Classify(tape, h, bound);
    Var pred = PredictionLoss(tape, p, dataset.labels(), splits.train);
    Var total = TotalLoss(tape, pred, p, groups, fairness);

    EpochRecord record;
    record.epoch = epoch;
    record.total_loss = tape.scalar(total);
    record.pred_loss = tape.scalar(pred);
    const Eigen::VectorXd probs = tape.value(p).col(0);
    record.sp_loss = GroupMeanGap(probs, groups.d1, groups.d0);
    record.eo_loss = GroupMeanGap(probs, groups.p1, groups.p0);
    if (!std::isfinite(record.total_loss)) {
      Fail(ErrorKind::kNumeric, "training diverged: non-finite loss at epoch " + std::to_string(epoch));
    }

    Grad grad = tape.Backward(total);
    try {
      AdamStep(current.tensors, grad.values(), adam, config.lr, config.adam);
    } catch (const Error& e) {
      Fail(e.kind(), std::string(e.what()) + " at epoch " + std::to_string(epoch));
    }

    record.validation = Evaluate(current, dataset, inputs, splits.val, config.threshold);
    record.hybrid_score = record.validation.hybrid_score();
    if (record.hybrid_score > best_score) {
      best_score = record.hybrid_score;
      best = current;
      history.best_epoch = epoch;
    }
    history.epochs.push_back(std::move(record));
  }
  return TrainResult{std::move(best), std::move(history)};
}

MetricsReport Evaluate(const ModelParams& model, const Dataset& dataset, const GraphInputs& inputs,
                       const IndexSet& idx, double threshold) {
  const Eigen::VectorXd probs = PredictProbabilities(model, inputs);
  const std::vector<int> predictions = PredictLabels(probs, threshold);
  return ComputeMetrics(probs, predictions, dataset.labels(), dataset.sensitive(), idx);
}

std::string HistoryToJsonLines(const TrainHistory& history) {
  std::ostringstream os;
  for (const EpochRecord& r : history.epochs) {
    nlohmann::json j;
    j["epoch"] = r.epoch;
    j["total_loss"] = r.total_loss;
    j["pred_loss"] = r.pred_loss;
    j["sp_loss"] = r.sp_loss;
    j["eo_loss"] = r.eo_loss;
    j["hybrid_score"] = r.hybrid_score;
    j["best"] = r.epoch == history.best_epoch;
    j["validation"] = internal::MetricsJson(r.validation);
    os << j.dump() << '\n';
  }
  return os.str();
}

TrainHistory HistoryFromJsonLines(const std::string& text) {
  TrainHistory history;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EpochRecord r;
      r.epoch = j.at("epoch").get<std::size_t>();
      r.total_loss = j.at("total_loss").get<double>();
      r.pred_loss = j.at("pred_loss").get<double>();
      r.sp_loss = j.at("sp_loss").get<double>();
      r.eo_loss = j.at("eo_loss").get<double>();
      r.hybrid_score = j.at("hybrid_score").get<double>();
      r.validation = internal::MetricsFrom(j.at("validation"));
      if (j.value("best", false)) history.best_epoch = r.epoch;
      history.epochs.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorKind::kIo, "history line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return history;
}

}  // namespace fairgnn
