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

#include "fairgnn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairgnn/error.hpp"

namespace fairgnn {
namespace {

enum class Broadcast { kNone, kScalarLeft, kScalarRight, kRowRight };

bool IsScalar(const Matrix& m) { return m.rows() == 1 && m.cols() == 1; }

std::string Shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

Broadcast ResolveBroadcast(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() == b.rows() && a.cols() == b.cols()) return Broadcast::kNone;
  if (IsScalar(b)) return Broadcast::kScalarRight;
  if (IsScalar(a)) return Broadcast::kScalarLeft;
  if (b.rows() == 1 && b.cols() == a.cols()) return Broadcast::kRowRight;
  Fail(ErrorKind::kStructural,
       std::string(op) + ": incompatible shapes " + Shape(a) + " and " + Shape(b));
}

Matrix Combine(const Matrix& a, const Matrix& b, double sign, Broadcast mode) {
  switch (mode) {
    case Broadcast::kNone:
      return a + sign * b;
    case Broadcast::kScalarRight:
      return (a.array() + sign * b(0, 0)).matrix();
    case Broadcast::kScalarLeft:
      return (a(0, 0) + sign * b.array()).matrix();
    case Broadcast::kRowRight:
      return a + sign * b.replicate(a.rows(), 1);
  }
  return {};
}

// Reduces an adjoint of the broadcast result back to an operand's shape.
Matrix Reduce(const Matrix& grad, const Matrix& operand) {
  if (grad.rows() == operand.rows() && grad.cols() == operand.cols()) return grad;
  if (IsScalar(operand)) return Matrix::Constant(1, 1, grad.sum());
  return grad.colwise().sum();
}

void Accumulate(Matrix& slot, const Matrix& contribution) {
  if (slot.size() == 0) {
    slot = contribution;
  } else {
    slot += contribution;
  }
}

constexpr double kSigmoidHigh = 1.0 - 0x1.0p-53;

double StableSigmoid(double x) {
  double p;
  if (x >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    p = e / (1.0 + e);
  }
  return std::clamp(p, std::numeric_limits<double>::min(), kSigmoidHigh);
}

}  // namespace

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

void Tape::Check(Var v) const {
  if (v.id >= nodes_.size()) Fail(ErrorKind::kContract, "variable does not belong to this tape");
}

Var Tape::Parameter(Matrix value) {
  Node n(OpKind::kParameter);
  n.value = std::move(value);
  Var v = Push(std::move(n));
  parameters_.push_back(v.id);
  return v;
}

Var Tape::Constant(Matrix value) {
  Node n(OpKind::kConstant);
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Tape::Constant(double value) { return Constant(Matrix::Constant(1, 1, value)); }

Var Tape::MatMul(Var a, Var b) {
  Check(a);
  Check(b);
  const Matrix& x = nodes_[a.id].value;
  const Matrix& y = nodes_[b.id].value;
  if (x.cols() != y.rows()) {
    Fail(ErrorKind::kStructural, "matmul: incompatible shapes " + Shape(x) + " and " + Shape(y));
  }
  Node n(OpKind::kMatMul, a.id, b.id);
  n.value = x * y;
  return Push(std::move(n));
}

Var Tape::SpMM(const SparseMatrix& s, Var b) {
  Check(b);
  const Matrix& y = nodes_[b.id].value;
  if (s.cols() != y.rows()) Fail(ErrorKind::kStructural, "spmm: incompatible shapes");
  Node n(OpKind::kSpMM, b.id);
  n.sparse = &s;
  n.value = s * y;
  return Push(std::move(n));
}

Var Tape::Add(Var a, Var b) {
  Check(a);
  Check(b);
  const Matrix& x = nodes_[a.id].value;
  const Matrix& y = nodes_[b.id].value;
  Node n(OpKind::kAdd, a.id, b.id);
  n.value = Combine(x, y, 1.0, ResolveBroadcast(x, y, "add"));
  return Push(std::move(n));
}

Var Tape::Sub(Var a, Var b) {
  Check(a);
  Check(b);
  const Matrix& x = nodes_[a.id].value;
  const Matrix& y = nodes_[b.id].value;
  Node n(OpKind::kSub, a.id, b.id);
  n.value = Combine(x, y, -1.0, ResolveBroadcast(x, y, "sub"));
  return Push(std::move(n));
}

Var Tape::Scale(Var a, double factor) {
  Check(a);
  Node n(OpKind::kScale, a.id);
  n.factor = factor;
  n.value = factor * nodes_[a.id].value;
  return Push(std::move(n));
}

Var Tape::Relu(Var a) {
  Check(a);
  Node n(OpKind::kRelu, a.id);
  n.value = nodes_[a.id].value.cwiseMax(0.0);
  return Push(std::move(n));
}

Var Tape::Sigmoid(Var a) {
  Check(a);
  Node n(OpKind::kSigmoid, a.id);
  n.value = nodes_[a.id].value.unaryExpr(&StableSigmoid);
  return Push(std::move(n));
}

Var Tape::MeanOver(Var column, const IndexSet& rows) {
  Check(column);
  const Matrix& x = nodes_[column.id].value;
  if (x.cols() != 1) Fail(ErrorKind::kStructural, "mean-over: input must be a column, got " + Shape(x));
  if (rows.empty()) Fail(ErrorKind::kConfig, "mean-over: empty index set");
  double total = 0.0;
  for (std::size_t r : rows) {
    if (r >= static_cast<std::size_t>(x.rows())) {
      Fail(ErrorKind::kStructural, "mean-over: row index out of range");
    }
    total += x(static_cast<Eigen::Index>(r), 0);
  }
  Node n(OpKind::kMeanOver, column.id);
  n.rows = rows;
  n.value = Matrix::Constant(1, 1, total / static_cast<double>(rows.size()));
  return Push(std::move(n));
}

Var Tape::Abs(Var a) {
  Check(a);
  Node n(OpKind::kAbs, a.id);
  n.value = nodes_[a.id].value.cwiseAbs();
  return Push(std::move(n));
}

Var Tape::NegLog(Var a, double lo, double hi) {
  Check(a);
  Node n(OpKind::kNegLog, a.id);
  n.lo = lo;
  n.hi = hi;
  n.value = nodes_[a.id].value.unaryExpr(
      [lo, hi](double x) { return -std::log(std::clamp(x, lo, hi)); });
  return Push(std::move(n));
}

Var Tape::MaskApply(Var a, Matrix mask) {
  Check(a);
  const Matrix& x = nodes_[a.id].value;
  if (mask.rows() != x.rows() || mask.cols() != x.cols()) {
    Fail(ErrorKind::kStructural, "mask-apply: mask " + Shape(mask) + " vs input " + Shape(x));
  }
  Node n(OpKind::kMaskApply, a.id);
  n.value = x.cwiseProduct(mask);
  n.aux = std::move(mask);
  return Push(std::move(n));
}

Var Tape::Sum(Var a) {
  Check(a);
  Node n(OpKind::kSum, a.id);
  n.value = Matrix::Constant(1, 1, nodes_[a.id].value.sum());
  return Push(std::move(n));
}

double Tape::scalar(Var v) const {
  Check(v);
  const Matrix& m = nodes_[v.id].value;
  if (!IsScalar(m)) Fail(ErrorKind::kContract, "scalar(): node is " + Shape(m));
  return m(0, 0);
}

Grad Tape::Backward(Var output) const {
  Check(output);
  if (!IsScalar(nodes_[output.id].value)) {
    Fail(ErrorKind::kContract, "backward requires a scalar output, got " +
                                   Shape(nodes_[output.id].value));
  }
  std::vector<Matrix> adj(nodes_.size());
  adj[output.id] = Matrix::Ones(1, 1);

  for (std::size_t k = output.id + 1; k-- > 0;) {
    const Node& node = nodes_[k];
    if (adj[k].size() == 0) continue;
    const Matrix& g = adj[k];
    switch (node.kind) {
      case OpKind::kParameter:
      case OpKind::kConstant:
        break;
      case OpKind::kMatMul:
        Accumulate(adj[node.lhs], g * nodes_[node.rhs].value.transpose());
        Accumulate(adj[node.rhs], nodes_[node.lhs].value.transpose() * g);
        break;
      case OpKind::kSpMM:
        Accumulate(adj[node.lhs], node.sparse->transpose() * g);
        break;
      case OpKind::kAdd:
        Accumulate(adj[node.lhs], Reduce(g, nodes_[node.lhs].value));
        Accumulate(adj[node.rhs], Reduce(g, nodes_[node.rhs].value));
        break;
      case OpKind::kSub:
        Accumulate(adj[node.lhs], Reduce(g, nodes_[node.lhs].value));
        Accumulate(adj[node.rhs], Reduce(-g, nodes_[node.rhs].value));
        break;
      case OpKind::kScale:
        Accumulate(adj[node.lhs], node.factor * g);
        break;
      case OpKind::kRelu: {
        const Matrix& x = nodes_[node.lhs].value;
        Accumulate(adj[node.lhs], g.cwiseProduct(
                                      x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; })));
        break;
      }
      case OpKind::kSigmoid: {
        const Matrix& p = node.value;
        Accumulate(adj[node.lhs], g.cwiseProduct(p.cwiseProduct((1.0 - p.array()).matrix())));
        break;
      }
      case OpKind::kMeanOver: {
        Matrix local = Matrix::Zero(nodes_[node.lhs].value.rows(), 1);
        const double share = g(0, 0) / static_cast<double>(node.rows.size());
        for (std::size_t r : node.rows) local(static_cast<Eigen::Index>(r), 0) += share;
        Accumulate(adj[node.lhs], local);
        break;
      }
      case OpKind::kAbs: {
        const Matrix& x = nodes_[node.lhs].value;
        Accumulate(adj[node.lhs],
                   g.cwiseProduct(x.unaryExpr([](double v) {
                     return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
                   })));
        break;
      }
      case OpKind::kNegLog: {
        const Matrix& x = nodes_[node.lhs].value;
        const double lo = node.lo;
        const double hi = node.hi;
        Accumulate(adj[node.lhs], g.cwiseProduct(x.unaryExpr([lo, hi](double v) {
          return (v < lo || v > hi) ? 0.0 : -1.0 / v;
        })));
        break;
      }
      case OpKind::kMaskApply:
        Accumulate(adj[node.lhs], g.cwiseProduct(node.aux));
        break;
      case OpKind::kSum:
        Accumulate(adj[node.lhs],
                   Matrix::Constant(nodes_[node.lhs].value.rows(), nodes_[node.lhs].value.cols(),
                                    g(0, 0)));
        break;
    }
  }

  std::vector<Matrix> grads;
  grads.reserve(parameters_.size());
  for (std::size_t id : parameters_) {
    if (adj[id].size() == 0) {
      grads.push_back(Matrix::Zero(nodes_[id].value.rows(), nodes_[id].value.cols()));
    } else {
      grads.push_back(std::move(adj[id]));
    }
  }
  return Grad(std::move(grads));
}

std::vector<Matrix> FiniteDifferenceGradient(const LossFunction& loss,
                                             const std::vector<Matrix>& params, double eps) {
  if (!(eps > 0.0)) Fail(ErrorKind::kDomain, "finite differences need eps > 0");
  std::vector<Matrix> work = params;
  std::vector<Matrix> grads;
  grads.reserve(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix g(params[k].rows(), params[k].cols());
    for (Eigen::Index i = 0; i < params[k].size(); ++i) {
      const double original = work[k](i);
      work[k](i) = original + eps;
      const double up = loss(work);
      work[k](i) = original - eps;
      const double down = loss(work);
      work[k](i) = original;
      g(i) = (up - down) / (2.0 * eps);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

}  // namespace fairgnn
