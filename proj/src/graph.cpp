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

#include "fairgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairgnn/error.hpp"
#include "fairgnn/random.hpp"

namespace fairgnn {
namespace {

IndexSet Complement(std::size_t n, const IndexSet& set) {
  std::vector<bool> in(n, false);
  for (std::size_t i : set) {
    if (i < n) in[i] = true;
  }
  IndexSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

IndexSet ObservedNodes(const std::vector<Observation>& labels,
                       const std::vector<Observation>& sensitive) {
  IndexSet out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].has_value() && sensitive[i].has_value()) out.push_back(i);
  }
  return out;
}

double Entry(const SparseMatrix& m, Eigen::Index r, Eigen::Index c) {
  return m.coeff(r, c);
}

}  // namespace

Dataset::Dataset(Matrix features, SparseMatrix adjacency, std::vector<Observation> labels,
                 std::vector<Observation> sensitive)
    : Dataset(features, adjacency, labels, sensitive, ObservedNodes(labels, sensitive)) {}

Dataset::Dataset(Matrix features, SparseMatrix adjacency, std::vector<Observation> labels,
                 std::vector<Observation> sensitive, IndexSet labeled)
    : features_(std::move(features)),
      adjacency_(std::move(adjacency)),
      labels_(std::move(labels)),
      sensitive_(std::move(sensitive)),
      labeled_(std::move(labeled)) {
  const auto n = static_cast<Eigen::Index>(features_.rows());
  if (adjacency_.rows() != n || adjacency_.cols() != n) {
    Fail(ErrorKind::kStructural, "adjacency must be n x n with n = feature rows");
  }
  if (labels_.size() != static_cast<std::size_t>(n) ||
      sensitive_.size() != static_cast<std::size_t>(n)) {
    Fail(ErrorKind::kStructural, "labels and sensitive attributes must have one entry per node");
  }
  adjacency_.makeCompressed();
  std::sort(labeled_.begin(), labeled_.end());
  labeled_.erase(std::unique(labeled_.begin(), labeled_.end()), labeled_.end());
  unlabeled_ = Complement(static_cast<std::size_t>(n), labeled_);
}

std::size_t Dataset::num_edges() const {
  std::size_t count = 0;
  for (Eigen::Index r = 0; r < adjacency_.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(adjacency_, r); it; ++it) {
      if (it.col() > r && it.value() != 0.0) ++count;
    }
  }
  return count;
}

std::size_t ValidationReport::count(Violation::Kind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

NormalizedAdjacency NormalizeAdjacency(const SparseMatrix& adjacency, bool self_loops) {
  const Eigen::Index n = adjacency.rows();
  if (adjacency.cols() != n) Fail(ErrorKind::kStructural, "adjacency must be square");

  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < adjacency.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(adjacency, r); it; ++it) {
      const double v = it.value();
      if (v < 0.0) {
        std::ostringstream os;
        os << "negative adjacency entry at (" << r << ", " << it.col() << ")";
        Fail(ErrorKind::kStructural, os.str());
      }
      if (v != 0.0 && v != 1.0) Fail(ErrorKind::kStructural, "adjacency must be binary");
      if (v != 0.0 && it.col() == r) {
        Fail(ErrorKind::kStructural, "adjacency must have a zero diagonal");
      }
      if (Entry(adjacency, it.col(), r) != v) {
        std::ostringstream os;
        os << "adjacency is not symmetric at (" << r << ", " << it.col() << ")";
        Fail(ErrorKind::kStructural, os.str());
      }
      degree[r] += v;
    }
  }
  if (self_loops) degree.array() += 1.0;

  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inv_sqrt[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(adjacency.nonZeros() + (self_loops ? n : 0)));
  for (Eigen::Index r = 0; r < adjacency.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(adjacency, r); it; ++it) {
      if (it.value() != 0.0) {
        triplets.emplace_back(r, it.col(), inv_sqrt[r] * inv_sqrt[it.col()]);
      }
    }
    if (self_loops) triplets.emplace_back(r, r, inv_sqrt[r] * inv_sqrt[r]);
  }
  NormalizedAdjacency out;
  out.self_loops = self_loops;
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

SparseMatrix MeanAggregationMatrix(const SparseMatrix& adjacency) {
  const Eigen::Index n = adjacency.rows();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(adjacency.nonZeros()));
  for (Eigen::Index r = 0; r < adjacency.outerSize(); ++r) {
    double degree = 0.0;
    for (SparseMatrix::InnerIterator it(adjacency, r); it; ++it) degree += it.value();
    if (degree == 0.0) continue;
    for (SparseMatrix::InnerIterator it(adjacency, r); it; ++it) {
      if (it.value() != 0.0) triplets.emplace_back(r, it.col(), it.value() / degree);
    }
  }
  SparseMatrix out(n, adjacency.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

Splits MakeSplits(const Dataset& dataset, std::size_t labeled_count, std::uint64_t seed) {
  const std::size_t n = dataset.num_nodes();
  const std::size_t holdout = n / 4;
  if (labeled_count == 0) Fail(ErrorKind::kConfig, "labeled_count must be positive");
  if (labeled_count + 2 * holdout > n) {
    std::ostringstream os;
    os << "labeled_count " << labeled_count << " exceeds capacity n - 2*floor(n/4) = "
       << n - 2 * holdout;
    Fail(ErrorKind::kConfig, os.str());
  }
  IndexSet pool = dataset.labeled();
  if (labeled_count + 2 * holdout > pool.size()) {
    std::ostringstream os;
    os << "only " << pool.size() << " nodes carry both label and attribute; need "
       << labeled_count + 2 * holdout;
    Fail(ErrorKind::kConfig, os.str());
  }
  Rng rng(seed);
  rng.Shuffle(pool);

  Splits splits;
  splits.seed = seed;
  auto take = [&pool](std::size_t from, std::size_t count) {
    IndexSet part(pool.begin() + static_cast<std::ptrdiff_t>(from),
                  pool.begin() + static_cast<std::ptrdiff_t>(from + count));
    std::sort(part.begin(), part.end());
    return part;
  };
  splits.val = take(0, holdout);
  splits.test = take(holdout, holdout);
  splits.train = take(2 * holdout, labeled_count);
  return splits;
}

ValidationReport ValidateDataset(const Dataset& dataset) {
  ValidationReport report;
  auto add = [&report](Violation::Kind kind, const std::string& msg) {
    report.violations.push_back({kind, msg});
  };
  const SparseMatrix& a = dataset.adjacency();
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      const double v = it.value();
      if (v == 0.0) continue;
      std::ostringstream where;
      where << "(" << r << ", " << it.col() << ")";
      if (v != 1.0) add(Violation::Kind::kNonBinaryEdge, "non-binary edge weight at " + where.str());
      if (it.col() == r) add(Violation::Kind::kSelfLoop, "self-loop at " + where.str());
      if (Entry(a, it.col(), r) != v) {
        add(Violation::Kind::kAsymmetry, "asymmetric entry at " + where.str());
      }
    }
  }

  const Matrix& x = dataset.features();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (!x.row(i).allFinite()) {
      add(Violation::Kind::kNonFiniteFeature, "non-finite feature on node " + std::to_string(i));
    }
  }

  const auto& y = dataset.labels();
  const auto& s = dataset.sensitive();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] && *y[i] != 0 && *y[i] != 1) {
      add(Violation::Kind::kNonBinaryValue, "non-binary label on node " + std::to_string(i));
    }
    if (s[i] && *s[i] != 0 && *s[i] != 1) {
      add(Violation::Kind::kNonBinaryValue,
          "non-binary sensitive attribute on node " + std::to_string(i));
    }
  }
  for (std::size_t i : dataset.labeled()) {
    if (i >= dataset.num_nodes()) {
      add(Violation::Kind::kPartition, "labeled index " + std::to_string(i) + " out of range");
      continue;
    }
    if (!y[i]) add(Violation::Kind::kMissingObservation, "labeled node " + std::to_string(i) + " has no label");
    if (!s[i]) {
      add(Violation::Kind::kMissingObservation,
          "labeled node " + std::to_string(i) + " has no sensitive attribute");
    }
  }
  if (dataset.labeled().size() + dataset.unlabeled().size() != dataset.num_nodes()) {
    add(Violation::Kind::kPartition, "labeled and unlabeled sets do not partition the nodes");
  }
  return report;
}

SparseMatrix AdjacencyFromEdges(std::size_t num_nodes,
                                const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                std::size_t* dropped_self_edges) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges.size() * 2);
  std::size_t dropped = 0;
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      Fail(ErrorKind::kStructural, "edge endpoint out of range: " + std::to_string(std::max(u, v)));
    }
    if (u == v) {
      ++dropped;
      continue;
    }
    triplets.emplace_back(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v), 1.0);
    triplets.emplace_back(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u), 1.0);
  }
  const auto n = static_cast<Eigen::Index>(num_nodes);
  SparseMatrix a(n, n);
  // Duplicates collapse to weight 1.
  a.setFromTriplets(triplets.begin(), triplets.end(), [](double, double) { return 1.0; });
  a.makeCompressed();
  if (dropped_self_edges) *dropped_self_edges = dropped;
  return a;
}

}  // namespace fairgnn
