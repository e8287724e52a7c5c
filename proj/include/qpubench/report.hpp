// Copyright 2026 qpubench contributors
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

#include <nlohmann/json.hpp>

#include <string>

#include "qpubench/common.hpp"

namespace qpubench {

/// Serialized record of one benchmark run. Everything outside `meta` is
/// deterministic for a fixed seed; timestamps and wall-clock timings live
/// only in `meta` so determinism checks can exclude them.
struct BenchmarkReport {
  std::string benchmark;
  nlohmann::json spec = nlohmann::json::object();
  nlohmann::json data = nlohmann::json::object();
  nlohmann::json fits = nlohmann::json::object();
  nlohmann::json derived = nlohmann::json::object();
  nlohmann::json verdicts = nlohmann::json::object();
  std::uint64_t seed = 0;
  nlohmann::json meta = nlohmann::json::object();

  /// Deterministic portion (everything but meta).
  nlohmann::json payload() const;
  nlohmann::json to_json() const;
  static BenchmarkReport from_json(const nlohmann::json& j);
};

}  // namespace qpubench
