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

#include "fairgnn/hpo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <set>
#include <thread>

#include "fairgnn/error.hpp"
#include "internal/json_convert.hpp"

namespace fairgnn {
namespace {

// Kernel bandwidth in decades of (alpha, beta).
constexpr double kBandwidth = 0.35;
// Pseudo-count mass of a flat prior mixed into both densities.
constexpr double kPriorWeight = 0.05;

double KernelSum(const std::vector<GridPoint>& centers, double u, double v) {
  double total = 0.0;
  for (const GridPoint& c : centers) {
    const double du = u - std::log10(c.alpha);
    const double dv = v - std::log10(c.beta);
    total += std::exp(-(du * du + dv * dv) / (2.0 * kBandwidth * kBandwidth));
  }
  return total;
}

std::vector<GridPoint> Unvisited(const std::vector<TrialRecord>& history,
                                 const std::vector<GridPoint>& pending, const SearchSpace& space) {
  std::set<GridPoint> taken(pending.begin(), pending.end());
  for (const TrialRecord& t : history) taken.insert(t.point);
  std::vector<GridPoint> free;
  for (double a : space.grid) {
    for (double b : space.grid) {
      GridPoint p{a, b};
      if (!taken.count(p)) free.push_back(p);
    }
  }
  return free;
}

nlohmann::json TrialJson(const TrialRecord& t) {
  nlohmann::json j;
  j["trial"] = t.index;
  j["alpha"] = t.point.alpha;
  j["beta"] = t.point.beta;
  j["failed"] = t.failed;
  if (t.failed) {
    j["error"] = t.error;
    j["score"] = nullptr;
  } else {
    j["score"] = t.score;
  }
  j["validation"] = internal::MetricsJson(t.validation);
  return j;
}

}  // namespace

std::vector<double> DefaultFairnessGrid() {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(k / 100.0);
  for (int k = 2; k <= 10; ++k) grid.push_back(k / 10.0);
  grid.push_back(2.0);
  grid.push_back(5.0);
  return grid;
}

void ValidateSearchSpace(const SearchSpace& space) {
  if (space.grid.empty()) Fail(ErrorKind::kConfig, "search grid is empty");
  for (std::size_t k = 0; k < space.grid.size(); ++k) {
    if (!(space.grid[k] > 0.0) || !std::isfinite(space.grid[k])) {
      Fail(ErrorKind::kConfig, "search grid values must be finite and positive");
    }
    if (k > 0 && !(space.grid[k] > space.grid[k - 1])) {
      Fail(ErrorKind::kConfig, "search grid must be strictly increasing");
    }
  }
  if (space.trials < 1 || space.trials > space.num_points()) {
    Fail(ErrorKind::kConfig, "trials must lie in [1, " + std::to_string(space.num_points()) + "]");
  }
  if (space.batch < 1) Fail(ErrorKind::kConfig, "batch size must be at least 1");
}

std::size_t StartupTrials(const SearchSpace& space) { return std::max<std::size_t>(4, space.trials / 4); }

GridPoint SuggestNext(const std::vector<TrialRecord>& history, const std::vector<GridPoint>& pending,
                      const SearchSpace& space, Rng& rng) {
  const std::vector<GridPoint> free = Unvisited(history, pending, space);
  if (free.empty()) Fail(ErrorKind::kSearch, "search grid exhausted");
  if (free.size() == 1) return free.front();

  std::vector<const TrialRecord*> ok;
  for (const TrialRecord& t : history) {
    if (!t.failed) ok.push_back(&t);
  }
  if (history.size() + pending.size() < StartupTrials(space) || ok.size() < 2) {
    return free[rng.Index(free.size())];
  }

  std::stable_sort(ok.begin(), ok.end(),
                   [](const TrialRecord* a, const TrialRecord* b) { return a->score > b->score; });
  const std::size_t n_good = (ok.size() + 1) / 2;
  std::vector<GridPoint> good;
  std::vector<GridPoint> bad;
  for (std::size_t k = 0; k < ok.size(); ++k) (k < n_good ? good : bad).push_back(ok[k]->point);
  for (const TrialRecord& t : history) {
    if (t.failed) bad.push_back(t.point);
  }

  const double good_norm = static_cast<double>(good.size()) + kPriorWeight;
  const double bad_norm = static_cast<double>(bad.size()) + kPriorWeight;
  double best_ratio = -std::numeric_limits<double>::infinity();
  GridPoint best = free.front();
  // `free` is in lexicographic order, so strict improvement keeps the
  // smallest point among ties.
  for (const GridPoint& p : free) {
    const double u = std::log10(p.alpha);
    const double v = std::log10(p.beta);
    const double l = (KernelSum(good, u, v) + kPriorWeight) / good_norm;
    const double g = (KernelSum(bad, u, v) + kPriorWeight) / bad_norm;
    const double ratio = l / g;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = p;
    }
  }
  return best;
}

SearchResult Search(const SearchSpace& space, const TrialObjective& objective, std::size_t jobs) {
  ValidateSearchSpace(space);
  jobs = std::max<std::size_t>(1, jobs);
  Rng rng(space.seed);
  SearchResult result;

  while (result.trials.size() < space.trials) {
    const std::size_t round = std::min(space.batch, space.trials - result.trials.size());
    std::vector<GridPoint> batch;
    for (std::size_t k = 0; k < round; ++k) batch.push_back(SuggestNext(result.trials, batch, space, rng));

    std::vector<TrialRecord> records(round);
    auto run = [&](std::size_t k) {
      TrialRecord& rec = records[k];
      rec.index = result.trials.size() + k;
      rec.point = batch[k];
      const auto start = std::chrono::steady_clock::now();
      try {
        TrialOutcome outcome = objective(rec.point, rec.index);
        rec.score = outcome.score;
        rec.validation = outcome.validation;
        if (!std::isfinite(rec.score)) {
          rec.failed = true;
          rec.error = "non-finite score";
        }
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    if (jobs == 1 || round == 1) {
      for (std::size_t k = 0; k < round; ++k) run(k);
    } else {
      for (std::size_t first = 0; first < round; first += jobs) {
        std::vector<std::jthread> workers;
        for (std::size_t k = first; k < std::min(round, first + jobs); ++k) workers.emplace_back(run, k);
      }
    }
    for (TrialRecord& rec : records) result.trials.push_back(std::move(rec));
  }

  bool found = false;
  double running = std::numeric_limits<double>::quiet_NaN();
  for (const TrialRecord& t : result.trials) {
    if (!t.failed) {
      const bool better = !found || t.score > result.best_score ||
                          (t.score == result.best_score && t.point < result.best);
      if (better) {
        result.best = t.point;
        result.best_score = t.score;
        found = true;
      }
      running = result.best_score;
    }
    result.best_so_far.push_back(running);
  }
  if (!found) Fail(ErrorKind::kSearch, "every search trial failed");
  return result;
}

std::string TrialLogJsonLines(const SearchResult& result) {
  std::string out;
  for (const TrialRecord& t : result.trials) out += TrialJson(t).dump() + "\n";
  return out;
}

std::string SearchSummaryJson(const SearchResult& result) {
  nlohmann::json j;
  j["best"] = {{"alpha", result.best.alpha}, {"beta", result.best.beta}};
  j["best_score"] = result.best_score;
  j["trials"] = result.trials.size();
  nlohmann::json curve = nlohmann::json::array();
  for (std::size_t k = 0; k < result.best_so_far.size(); ++k) {
    const double v = result.best_so_far[k];
    curve.push_back({{"trial", k + 1},
                     {"best_score", std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v)}});
  }
  j["convergence"] = std::move(curve);
  return j.dump(2) + "\n";
}

}  // namespace fairgnn
