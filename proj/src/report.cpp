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

#include "qpubench/report.hpp"

namespace qpubench {

nlohmann::json BenchmarkReport::payload() const {
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"benchmark", benchmark},
                        {"spec", spec},
                        {"data", data},
                        {"fits", fits},
                        {"derived", derived},
                        {"verdicts", verdicts},
                        {"seed", seed}};
}

nlohmann::json BenchmarkReport::to_json() const {
  nlohmann::json j = payload();
  j["meta"] = meta;
  return j;
}

BenchmarkReport BenchmarkReport::from_json(const nlohmann::json& j) {
  BenchmarkReport r;
  r.benchmark = j.at("benchmark").get<std::string>();
  r.spec = j.value("spec", nlohmann::json::object());
  r.data = j.value("data", nlohmann::json::object());
  r.fits = j.value("fits", nlohmann::json::object());
  r.derived = j.value("derived", nlohmann::json::object());
  r.verdicts = j.value("verdicts", nlohmann::json::object());
  r.seed = j.value("seed", std::uint64_t{0});
  r.meta = j.value("meta", nlohmann::json::object());
  return r;
}

}  // namespace qpubench
