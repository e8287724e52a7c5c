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

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <utility>
#include <vector>

#include "qpubench/common.hpp"

namespace qpubench {

/// Qubit-coupler connectivity graph of a crystal QPU. Qubits live on a
/// 45-degree rotated square lattice; couplers are the lattice edges.
/// Immutable once built.
struct Topology {
  std::vector<int> qubits;                       // ids, 0..n-1
  std::vector<std::pair<int, int>> couplers;     // unordered pairs, stored a < b
  std::vector<std::pair<int, int>> coords;       // (row, col) per qubit

  int num_qubits() const { return static_cast<int>(qubits.size()); }
  int num_couplers() const { return static_cast<int>(couplers.size()); }

  bool has_coupler(int a, int b) const;
  const std::vector<int>& neighbors(int q) const;
  int degree(int q) const { return static_cast<int>(neighbors(q).size()); }

  /// BFS distance between qubits; -1 when disconnected.
  int distance(int a, int b) const;
  /// Min pairwise distance between two vertex sets.
  int set_distance(const std::vector<int>& xs, const std::vector<int>& ys) const;

  bool is_connected() const;
  bool is_bipartite() const;

  /// Throws InvalidArgument when any structural invariant is violated:
  /// distinct existing endpoints, no duplicate couplers, connected,
  /// bipartite, degrees in [1, 4].
  void validate() const;

  /// Rebuilds the adjacency cache; call after mutating the public fields.
  void finalize();

 private:
  std::vector<std::vector<int>> adjacency_;
};

/// Builds the diagonal-square-lattice graph for a column-height profile.
/// Column c holds heights[c] vertically consecutive qubits, centered on the
/// tallest column; adjacency is |dr| + |dc| == 1 in lattice coordinates.
Topology build_crystal_topology(const std::vector<int>& column_heights);

/// Loads a named preset (spark-5, garnet-20, emerald-54, crystal-150) from
/// the versioned data files. Throws InvalidArgument for unknown names.
Topology build_crystal_topology(const std::string& preset);

std::vector<std::string> known_topology_presets();

/// Directory holding topology/device data files. Compiled-in default,
/// overridable with QPUBENCH_DATA_DIR.
std::string data_dir();

void to_json(nlohmann::json& j, const Topology& t);
void from_json(const nlohmann::json& j, Topology& t);

}  // namespace qpubench
