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
#include <vector>

#include "qpubench/common.hpp"

namespace qpubench {

/// Append-only newline-delimited JSON log with per-line checksums.
/// Each line is {"id": n, "checksum": "<16 hex>", "record": {...}}.
class RunStore {
 public:
  explicit RunStore(std::string path);

  /// Appends one record and returns its id (1-based, monotonically rising).
  std::uint64_t append(const nlohmann::json& record);
  /// Reads every record back, verifying checksums; throws IoError on
  /// corruption.
  std::vector<nlohmann::json> read_all() const;

  const std::string& path() const { return path_; }

  static std::string checksum_hex(const std::string& payload);

 private:
  std::string path_;
};

}  // namespace qpubench
