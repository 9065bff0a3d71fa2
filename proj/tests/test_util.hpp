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


// Shared builders and independent oracles for the unit tests.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairgnn/graph.hpp"
#include "fairgnn/log.hpp"
#include "fairgnn/random.hpp"

namespace fairgnn::testing {

inline SparseMatrix DenseToSparse(const Matrix& dense) {
  return dense.sparseView();
}

inline SparseMatrix PathGraph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return AdjacencyFromEdges(n, edges);
}

inline SparseMatrix RandomGraph(std::size_t n, double p, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.Uniform() < p) edges.emplace_back(i, j);
    }
  }
  return AdjacencyFromEdges(n, edges);
}

// Random fully labeled dataset with both groups and both classes present.
inline Dataset RandomDataset(std::size_t n, std::size_t d, Rng& rng, double edge_p = 0.3) {
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.Uniform(-1.0, 1.0);
  }
  std::vector<Observation> y(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Cycle through the four (y, s) cells first so none is empty.
    y[i] = i < 4 ? static_cast<int>(i % 2) : static_cast<int>(rng.Index(2));
    s[i] = i < 4 ? static_cast<int>(i / 2) : static_cast<int>(rng.Index(2));
  }
  return Dataset(std::move(x), RandomGraph(n, edge_p, rng), std::move(y), std::move(s));
}

inline IndexSet Iota(std::size_t n) {
  IndexSet idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

inline std::vector<Observation> Obs(const std::vector<int>& values) {
  return {values.begin(), values.end()};
}

// Collects warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture() {
    SetWarningSink([this](const std::string& m) { messages.push_back(m); });
  }
  ~WarningCapture() { SetWarningSink({}); }
  std::vector<std::string> messages;
};

}  // namespace fairgnn::testing
