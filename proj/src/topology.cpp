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

#include "qpubench/topology.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <set>

#ifndef QPUBENCH_DATA_DIR
#define QPUBENCH_DATA_DIR "data"
#endif

namespace qpubench {

std::string data_dir() {
  if (const char* env = std::getenv("QPUBENCH_DATA_DIR")) return env;
  return QPUBENCH_DATA_DIR;
}

bool Topology::has_coupler(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(couplers.begin(), couplers.end(), std::make_pair(a, b));
}

const std::vector<int>& Topology::neighbors(int q) const {
  if (q < 0 || q >= static_cast<int>(adjacency_.size()))
    throw InvalidArgument("qubit id out of range: " + std::to_string(q));
  return adjacency_[q];
}

void Topology::finalize() {
  std::sort(couplers.begin(), couplers.end());
  adjacency_.assign(qubits.size(), {});
  for (auto& [a, b] : couplers) {
    if (a >= 0 && a < num_qubits() && b >= 0 && b < num_qubits()) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

int Topology::distance(int a, int b) const {
  if (a == b) return 0;
  std::vector<int> dist(qubits.size(), -1);
  std::deque<int> frontier{a};
  dist[a] = 0;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop_front();
    for (int v : adjacency_[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        if (v == b) return dist[v];
        frontier.push_back(v);
      }
    }
  }
  return -1;
}

int Topology::set_distance(const std::vector<int>& xs, const std::vector<int>& ys) const {
  int best = -1;
  for (int x : xs)
    for (int y : ys) {
      int d = distance(x, y);
      if (d >= 0 && (best < 0 || d < best)) best = d;
    }
  return best;
}

bool Topology::is_connected() const {
  if (qubits.empty()) return false;
  std::vector<char> seen(qubits.size(), 0);
  std::deque<int> frontier{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop_front();
    for (int v : adjacency_[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        frontier.push_back(v);
      }
  }
  return count == qubits.size();
}

bool Topology::is_bipartite() const {
  std::vector<int> color(qubits.size(), -1);
  for (int start = 0; start < num_qubits(); ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    std::deque<int> frontier{start};
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop_front();
      for (int v : adjacency_[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          frontier.push_back(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

void Topology::validate() const {
  const int n = num_qubits();
  if (n == 0) throw InvalidArgument("topology has no qubits");
  for (int i = 0; i < n; ++i)
    if (qubits[i] != i) throw InvalidArgument("qubit ids must be 0..n-1 in order");
  if (coords.size() != qubits.size())
    throw InvalidArgument("coords size does not match qubit count");
  std::set<std::pair<int, int>> seen;
  for (auto& [a, b] : couplers) {
    if (a == b) throw InvalidArgument("coupler endpoints must be distinct");
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw InvalidArgument("coupler endpoint out of range");
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) throw InvalidArgument("duplicate coupler");
  }
  if (!is_connected()) throw InvalidArgument("topology graph is not connected");
  if (!is_bipartite()) throw InvalidArgument("topology graph is not bipartite");
  if (n > 1) {
    for (int q = 0; q < n; ++q) {
      int d = degree(q);
      if (d < 1 || d > 4)
        throw InvalidArgument("qubit " + std::to_string(q) + " has degree " + std::to_string(d));
    }
  }
}

Topology build_crystal_topology(const std::vector<int>& column_heights) {
  if (column_heights.empty()) throw InvalidArgument("empty column-height list");
  for (int h : column_heights)
    if (h < 1) throw InvalidArgument("column heights must be >= 1");

  const int max_h = *std::max_element(column_heights.begin(), column_heights.end());
  Topology topo;
  std::map<std::pair<int, int>, int> by_coord;
  for (int c = 0; c < static_cast<int>(column_heights.size()); ++c) {
    // Center each column on the tallest one; odd height differences shift up.
    int offset = (max_h - column_heights[c]) / 2;
    for (int r = offset; r < offset + column_heights[c]; ++r) {
      int id = static_cast<int>(topo.qubits.size());
      topo.qubits.push_back(id);
      topo.coords.emplace_back(r, c);
      by_coord[{r, c}] = id;
    }
  }
  for (auto& [rc, id] : by_coord) {
    auto [r, c] = rc;
    if (auto it = by_coord.find({r + 1, c}); it != by_coord.end())
      topo.couplers.emplace_back(std::min(id, it->second), std::max(id, it->second));
    if (auto it = by_coord.find({r, c + 1}); it != by_coord.end())
      topo.couplers.emplace_back(std::min(id, it->second), std::max(id, it->second));
  }
  topo.finalize();
  return topo;
}

std::vector<std::string> known_topology_presets() {
  return {"spark-5", "garnet-20", "emerald-54", "crystal-150"};
}

Topology build_crystal_topology(const std::string& preset) {
  auto known = known_topology_presets();
  if (std::find(known.begin(), known.end(), preset) == known.end())
    throw InvalidArgument("unknown topology preset: " + preset);
  std::string path = data_dir() + "/topologies/" + preset + ".json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topology data file: " + path);
  nlohmann::json j;
  in >> j;
  Topology topo = j.get<Topology>();
  topo.validate();
  return topo;
}

void to_json(nlohmann::json& j, const Topology& t) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"qubits", t.qubits},
                     {"couplers", t.couplers},
                     {"coords", t.coords}};
}

void from_json(const nlohmann::json& j, Topology& t) {
  j.at("qubits").get_to(t.qubits);
  t.couplers.clear();
  for (auto& c : j.at("couplers"))
    t.couplers.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
  t.coords.clear();
  for (auto& c : j.at("coords"))
    t.coords.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
  t.finalize();
}

}  // namespace qpubench
