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

#include "qpubench/circuit.hpp"
#include "qpubench/device.hpp"
#include "qpubench/sim.hpp"

namespace qpubench {

/// Logical-to-physical embedding chosen by the noise-score search.
struct Layout {
  std::vector<int> initial;  // logical qubit -> physical qubit at t = 0
  std::vector<int> final;    // logical qubit -> physical qubit at measurement
  double noise_score = 0.0;  // sum of -ln(1 - eps) over the routed circuit
};

struct RoutedCircuit {
  Circuit circuit;                   // native, over device qubits
  Layout layout;
  std::vector<int> measured_logical;  // logical qubits with MEASURE, ascending
};

struct RoutingOptions {
  /// Leave readout error terms out of the noise score (set when readout
  /// error mitigation will absorb them).
  bool exclude_readout = false;
  int max_candidates = 10000;
  /// Connected-subgraph search is exhaustive up to this logical width,
  /// greedy-seeded beyond it.
  int exhaustive_max_logical = 12;
  /// When set, skip the layout search and route on this logical->physical
  /// assignment as-is.
  std::vector<int> fixed_layout;
};

/// Embeds and routes a circuit onto the device: enumerates candidate
/// connected subgraphs, inserts SWAPs along shortest paths for non-adjacent
/// CZs, scores each candidate and returns the minimum-score result.
RoutedCircuit route_and_embed(const Circuit& logical, const DeviceModel& device,
                              const RoutingOptions& opts = {});

/// Maps physical-qubit counts back to logical-qubit counts through the
/// final layout permutation.
Counts unpermute_counts(const Counts& physical, const RoutedCircuit& routed);

}  // namespace qpubench
