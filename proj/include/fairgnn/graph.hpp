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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace fairgnn {

using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using IndexSet = std::vector<std::size_t>;

// Per-node binary observation (label or sensitive attribute); nullopt when
// the value was not observed.
using Observation = std::optional<int>;

// Immutable attributed graph. `labeled` holds the nodes whose label and
// sensitive attribute are both observed; `unlabeled` is its complement.
class Dataset {
 public:
  // Derives the labeled set from the observations.
  Dataset(Matrix features, SparseMatrix adjacency, std::vector<Observation> labels,
          std::vector<Observation> sensitive);
  // Uses an explicit labeled set. No invariant checking beyond dimensions;
  // run ValidateDataset for a full report.
  Dataset(Matrix features, SparseMatrix adjacency, std::vector<Observation> labels,
          std::vector<Observation> sensitive, IndexSet labeled);

  std::size_t num_nodes() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t num_features() const { return static_cast<std::size_t>(features_.cols()); }
  std::size_t num_edges() const;  // undirected, counted once

  const Matrix& features() const { return features_; }
  const SparseMatrix& adjacency() const { return adjacency_; }
  const std::vector<Observation>& labels() const { return labels_; }
  const std::vector<Observation>& sensitive() const { return sensitive_; }
  const IndexSet& labeled() const { return labeled_; }
  const IndexSet& unlabeled() const { return unlabeled_; }

 private:
  Matrix features_;
  SparseMatrix adjacency_;
  std::vector<Observation> labels_;
  std::vector<Observation> sensitive_;
  IndexSet labeled_;
  IndexSet unlabeled_;
};

struct NormalizedAdjacency {
  SparseMatrix matrix;
  bool self_loops = true;
};

struct Splits {
  IndexSet train;
  IndexSet val;
  IndexSet test;
  std::uint64_t seed = 0;
};

struct Violation {
  enum class Kind {
    kAsymmetry,
    kSelfLoop,
    kNonBinaryEdge,
    kNonFiniteFeature,
    kMissingObservation,
    kNonBinaryValue,
    kPartition,
  };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t count(Violation::Kind kind) const;
};

// D^{-1/2} (A + self_loops * I) D^{-1/2}. Rows of zero-degree nodes are zero.
// Throws kStructural on asymmetric, negative, non-binary, or self-looped input.
NormalizedAdjacency NormalizeAdjacency(const SparseMatrix& adjacency, bool self_loops);

// Row-normalized adjacency D^{-1} A used for neighbor-mean aggregation.
SparseMatrix MeanAggregationMatrix(const SparseMatrix& adjacency);

// Validation and test each take floor(n/4) nodes, train takes labeled_count;
// all three are drawn without overlap from the nodes with observed label and
// attribute. Depends only on the seed.
Splits MakeSplits(const Dataset& dataset, std::size_t labeled_count, std::uint64_t seed);

ValidationReport ValidateDataset(const Dataset& dataset);

// Builds a binary symmetric adjacency from undirected edge pairs. Duplicates
// collapse; self-edges are skipped and counted in *dropped_self_edges.
SparseMatrix AdjacencyFromEdges(std::size_t num_nodes,
                                const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                std::size_t* dropped_self_edges = nullptr);

}  // namespace fairgnn
