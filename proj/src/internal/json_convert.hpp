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

// JSON conversions shared by the serializers. Not part of the public API.

#include "json.hpp"

#include "fairgnn/metrics.hpp"

namespace fairgnn::internal {

inline nlohmann::json PercentageJson(const Percentage& p) {
  return p ? nlohmann::json(*p) : nlohmann::json(nullptr);
}

inline Percentage PercentageFrom(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

nlohmann::json MetricsJson(const MetricsReport& report);
MetricsReport MetricsFrom(const nlohmann::json& j);

}  // namespace fairgnn::internal
