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
#include <functional>
#include <limits>
#include <vector>

#include "fairgnn/graph.hpp"

namespace fairgnn {

// Handle to a node recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

enum class OpKind {
  kParameter,
  kConstant,
  kMatMul,
  kSpMM,
  kAdd,
  kSub,
  kScale,
  kRelu,
  kSigmoid,
  kMeanOver,
  kAbs,
  kNegLog,
  kMaskApply,
  kSum,
};

// Gradients of a scalar with respect to each parameter, in the order the
// parameters were registered on the tape.
class Grad {
 public:
  Grad() = default;
  explicit Grad(std::vector<Matrix> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  const Matrix& operator[](std::size_t k) const { return values_[k]; }
  const std::vector<Matrix>& values() const { return values_; }

 private:
  std::vector<Matrix> values_;
};

// Append-only reverse-mode tape over dense double matrices. Forward values
// are computed eagerly when an operation is recorded.
//
// Broadcasting is limited to what the models need: Add and Sub accept
// operands of equal shape, a 1x1 operand on either side, or a 1xc row on the
// right that is added to every row of the left.
class Tape {
 public:
  Var Parameter(Matrix value);
  Var Constant(Matrix value);
  Var Constant(double value);

  Var MatMul(Var a, Var b);
  // `s` must outlive the tape.
  Var SpMM(const SparseMatrix& s, Var b);
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Scale(Var a, double factor);
  Var Relu(Var a);
  // Output clamped to [DBL_MIN, 1 - 2^-53] so probabilities stay strictly
  // inside (0, 1) even when the logit saturates in double precision.
  Var Sigmoid(Var a);
  // Mean of the selected rows of an n x 1 column; throws kConfig on an empty
  // index set.
  Var MeanOver(Var column, const IndexSet& rows);
  Var Abs(Var a);
  // -log(clamp(a, lo, hi)) elementwise; the derivative is zero where the
  // clamp is active.
  Var NegLog(Var a, double lo = 0.0, double hi = std::numeric_limits<double>::infinity());
  // Elementwise product with a fixed mask (dropout).
  Var MaskApply(Var a, Matrix mask);
  Var Sum(Var a);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  double scalar(Var v) const;
  OpKind kind(Var v) const { return nodes_[v.id].kind; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t num_parameters() const { return parameters_.size(); }

  // Exact reverse-mode partials of a 1x1 output. Subgradient 0 is used at
  // the kinks of relu and abs. Parameters not reached get zero matrices.
  Grad Backward(Var output) const;

 private:
  struct Node {
    explicit Node(OpKind k, std::size_t l = 0, std::size_t r = 0) : kind(k), lhs(l), rhs(r) {}
    OpKind kind;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    Matrix value;
    Matrix aux;  // mask for kMaskApply
    double factor = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    const SparseMatrix* sparse = nullptr;
    IndexSet rows;
  };

  Var Push(Node node);
  void Check(Var v) const;

  std::vector<Node> nodes_;
  std::vector<std::size_t> parameters_;
};

using LossFunction = std::function<double(const std::vector<Matrix>&)>;

// Central differences (f(t + eps e_k) - f(t - eps e_k)) / (2 eps) for every
// coordinate of every parameter matrix. Test oracle for Tape::Backward.
std::vector<Matrix> FiniteDifferenceGradient(const LossFunction& loss,
                                             const std::vector<Matrix>& params, double eps);

}  // namespace fairgnn
