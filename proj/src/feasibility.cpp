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

#include "fairgnn/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>
#include <vector>

#include "fairgnn/error.hpp"

namespace fairgnn {
namespace {

// Slack for floating-point noise at the boundary of the bounding box.
constexpr double kBoxTolerance = 1e-12;

double CellCentre(std::size_t k, std::size_t resolution, double extent) {
  return (static_cast<double>(k) + 0.5) / static_cast<double>(resolution) * extent;
}

bool Feasible(const BaseRates& r, double tp_b, double fp_b) {
  const bool ratio = (r.y - r.x) * tp_b <= (1.0 - r.y) * fp_b;
  const bool capacity = fp_b + (r.x - r.y) / (1.0 - r.y) * tp_b <= r.x;
  return ratio && capacity;
}

}  // namespace

void ValidateBaseRates(const BaseRates& rates) {
  if (!(rates.x > 0.0 && rates.x < 1.0) || !(rates.y > 0.0 && rates.y < 1.0)) {
    std::ostringstream os;
    os << "base rates must lie in the open unit square, got x=" << rates.x << ", y=" << rates.y;
    Fail(ErrorKind::kDomain, os.str());
  }
}

bool CheckFeasible(const BaseRates& rates, double tp_b, double fp_b) {
  ValidateBaseRates(rates);
  if (!(tp_b >= -kBoxTolerance && tp_b <= 1.0 - rates.y + kBoxTolerance) ||
      !(fp_b >= -kBoxTolerance && fp_b <= rates.y + kBoxTolerance)) {
    std::ostringstream os;
    os << "(tp_b, fp_b) = (" << tp_b << ", " << fp_b << ") outside [0, " << 1.0 - rates.y
       << "] x [0, " << rates.y << "]";
    Fail(ErrorKind::kDomain, os.str());
  }
  return Feasible(rates, tp_b, fp_b);
}

std::pair<GroupConfusion, GroupConfusion> CompleteMatrices(const BaseRates& rates, double tp_b,
                                                           double fp_b) {
  if (!CheckFeasible(rates, tp_b, fp_b)) {
    std::ostringstream os;
    os << "no EO+SP completion for x=" << rates.x << ", y=" << rates.y << ", tp_b=" << tp_b
       << ", fp_b=" << fp_b;
    Fail(ErrorKind::kConstraint, os.str());
  }
  const double x = rates.x;
  const double y = rates.y;
  GroupConfusion a;
  GroupConfusion b;
  a.tp = (1.0 - x) / (1.0 - y) * tp_b;
  a.fp = (x - y) / (1.0 - y) * tp_b + fp_b;
  a.fn = 1.0 - x - a.tp;
  a.tn = x - a.fp;
  b.tp = tp_b;
  b.fp = fp_b;
  b.fn = 1.0 - y - tp_b;
  b.tn = y - fp_b;
  return {a, b};
}

double RegionMeasure(const BaseRates& rates, std::size_t resolution, std::size_t threads) {
  ValidateBaseRates(rates);
  if (resolution < 10) Fail(ErrorKind::kConfig, "resolution must be at least 10");
  threads = std::clamp<std::size_t>(threads, 1, resolution);

  std::vector<std::size_t> counts(threads, 0);
  auto work = [&](std::size_t worker) {
    std::size_t count = 0;
    for (std::size_t i = worker; i < resolution; i += threads) {
      const double tp_b = CellCentre(i, resolution, 1.0 - rates.y);
      for (std::size_t j = 0; j < resolution; ++j) {
        if (Feasible(rates, tp_b, CellCentre(j, resolution, rates.y))) ++count;
      }
    }
    counts[worker] = count;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  std::size_t feasible = 0;
  for (std::size_t c : counts) feasible += c;
  return static_cast<double>(feasible) / static_cast<double>(resolution * resolution);
}

void WriteRegionCsv(const BaseRates& rates, std::size_t resolution, std::ostream& out) {
  ValidateBaseRates(rates);
  if (resolution < 10) Fail(ErrorKind::kConfig, "resolution must be at least 10");
  out << "tp_b,fp_b,feasible\n";
  char line[96];
  for (std::size_t i = 0; i < resolution; ++i) {
    const double tp_b = CellCentre(i, resolution, 1.0 - rates.y);
    for (std::size_t j = 0; j < resolution; ++j) {
      const double fp_b = CellCentre(j, resolution, rates.y);
      std::snprintf(line, sizeof(line), "%.10g,%.10g,%d\n", tp_b, fp_b,
                    Feasible(rates, tp_b, fp_b) ? 1 : 0);
      out << line;
    }
  }
}

FairnessGaps VerifyFairnessOfCompletion(const GroupConfusion& a, const GroupConfusion& b) {
  FairnessGaps gaps;
  const double pos_a = a.tp + a.fn;
  const double pos_b = b.tp + b.fn;
  if (pos_a > 0.0 && pos_b > 0.0) gaps.eo_gap = std::abs(a.tp / pos_a - b.tp / pos_b);
  gaps.sp_gap = std::abs((a.tp + a.fp) - (b.tp + b.fp));
  return gaps;
}

}  // namespace fairgnn
