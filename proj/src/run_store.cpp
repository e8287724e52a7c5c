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

#include "qpubench/run_store.hpp"

#include <cstdio>
#include <fstream>

namespace qpubench {

RunStore::RunStore(std::string path) : path_(std::move(path)) {}

std::string RunStore::checksum_hex(const std::string& payload) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char ch : payload) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t RunStore::append(const nlohmann::json& record) {
  std::uint64_t next_id = 1;
  {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) ++next_id;
  }
  std::string payload = record.dump();
  nlohmann::json entry{{"id", next_id}, {"checksum", checksum_hex(payload)}, {"record", record}};
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("run store is not writable: " + path_);
  out << entry.dump() << "\n";
  if (!out) throw IoError("failed to append to run store: " + path_);
  return next_id;
}

std::vector<nlohmann::json> RunStore::read_all() const {
  std::ifstream in(path_);
  std::vector<nlohmann::json> records;
  if (!in) return records;  // absent store reads as empty
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json entry;
    try {
      entry = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw IoError("run store line " + std::to_string(line_no) + " is not valid JSON");
    }
    std::string payload = entry.at("record").dump();
    if (checksum_hex(payload) != entry.at("checksum").get<std::string>())
      throw IoError("run store line " + std::to_string(line_no) + " failed its checksum");
    records.push_back(entry.at("record"));
  }
  return records;
}

}  // namespace qpubench
