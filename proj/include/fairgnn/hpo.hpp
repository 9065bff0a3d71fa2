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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fairgnn/metrics.hpp"
#include "fairgnn/random.hpp"

namespace fairgnn {

// {0.01, 0.02, ..., 0.1, 0.2, ..., 1, 2, 5}
std::vector<double> DefaultFairnessGrid();

struct GridPoint {
  double alpha = 0.0;
  double beta = 0.0;
  auto operator<=>(const GridPoint&) const = default;
};

struct SearchSpace {
  std::vector<double> grid = DefaultFairnessGrid();  // shared by alpha and beta
  std::size_t trials = 15;
  std::uint64_t seed = 0;
  std::size_t batch = 1;  // suggestions generated per synchronization round

  std::size_t num_points() const { return grid.size() * grid.size(); }
};

// Throws kConfig unless the grid is strictly positive and strictly
// increasing, 1 <= trials <= |grid|^2 and batch >= 1.
void ValidateSearchSpace(const SearchSpace& space);

struct TrialOutcome {
  double score = 0.0;
  MetricsReport validation;
};

struct TrialRecord {
  std::size_t index = 0;
  GridPoint point;
  bool failed = false;
  std::string error;
  double score = 0.0;
  MetricsReport validation;
  double wall_seconds = 0.0;
};

// Evaluated once per trial. Must be deterministic and safe to call
// concurrently. A thrown exception or a non-finite score fails the trial.
using TrialObjective = std::function<TrialOutcome(const GridPoint& point, std::size_t trial_index)>;

struct SearchResult {
  GridPoint best;
  double best_score = 0.0;
  std::vector<TrialRecord> trials;
  std::vector<double> best_so_far;  // per trial; NaN until the first success
};

// Number of initial suggestions drawn at random before the density-ratio
// model takes over: max(4, trials / 4).
std::size_t StartupTrials(const SearchSpace& space);

// Next unvisited grid point. `pending` lists points already suggested in the
// current batch. Random during start-up; afterwards the maximizer of l(x)/g(x),
// where l and g are Gaussian kernel densities over (log10 alpha, log10 beta)
// fitted to the better and worse halves of the successful trials. Ties go to
// the lexicographically smaller point. Throws kSearch when the grid is
// exhausted.
GridPoint SuggestNext(const std::vector<TrialRecord>& history, const std::vector<GridPoint>& pending,
                      const SearchSpace& space, Rng& rng);

// Runs exactly space.trials evaluations without repeating a grid point and
// returns the best-scoring one (ties: lexicographically smaller). Trials in a
// batch run on up to `jobs` threads; results merge in trial order. Throws
// kSearch if every trial failed.
SearchResult Search(const SearchSpace& space, const TrialObjective& objective, std::size_t jobs = 1);

// Trial log without wall-times (one JSON object per line) and the summary
// document with the best point and the best-so-far curve.
std::string TrialLogJsonLines(const SearchResult& result);
std::string SearchSummaryJson(const SearchResult& result);

}  // namespace fairgnn
