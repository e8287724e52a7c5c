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

#include "qpubench/analysis.hpp"
#include "qpubench/execution.hpp"
#include "qpubench/report.hpp"
#include "qpubench/routing.hpp"

namespace qpubench {

struct QvCircuit {
  Circuit circuit;                        // square model circuit with SU(4) blocks
  std::vector<std::uint64_t> heavy_set;   // sorted basis states above the median
  double heavy_mass = 0.0;                // ideal probability of the heavy set
  int width = 0;
};

/// Square model circuit: `n` layers of a random qubit permutation with
/// floor(n/2) Haar-random SU(4) blocks (Ginibre + orthonormalization).
/// Heavy outputs come from exact simulation.
QvCircuit gen_qv_circuit(int n, std::uint64_t seed);

struct QvWidthResult {
  int width = 0;
  std::vector<double> hops;  // per circuit
  HeavyOutputResult verdict;
};

struct QvOptions {
  int n_circuits = 100;
  std::uint64_t shots = 1024;
  std::uint64_t seed = 0;
  RoutingOptions routing;
};

struct QvResult {
  std::vector<QvWidthResult> widths;
  int quantum_volume = 1;  // 2^(largest passing width)
  BenchmarkReport report;
};

QvResult run_qv(Backend& backend, const std::vector<int>& widths, const QvOptions& opts = {});

// ---------------------------------------------------------------------------

struct VolumetricSpec {
  std::vector<int> widths;
  std::vector<int> depths;   // even mirror depths
  int n_circuits = 40;
  double cz_density = 0.25;  // xi
  std::uint64_t shots = 256;
  std::uint64_t seed = 0;
  /// Cells with depth <= limit are measured; deeper cells are extrapolated
  /// from the per-width exponential fit. 0 measures everything.
  int measured_depth_limit = 0;
};

struct VolumetricCell {
  int width = 0;
  int depth = 0;
  double fidelity = 0.0;  // mean mirror polarization
  bool measured = false;
};

struct VolumetricResult {
  std::vector<VolumetricCell> cells;
  BenchmarkReport report;
};

VolumetricResult run_volumetric(Backend& backend, const VolumetricSpec& spec);

// ---------------------------------------------------------------------------

struct ClopsParams {
  int templates = 100;        // M
  int updates = 10;           // K
  int shots = 100;            // S
  int layers = 0;             // D = log2(QV)
  double elapsed_seconds = 0;  // T
};

/// CLOPS = M*K*S*D / T.
double clops_value(const ClopsParams& p);

struct ClopsResult {
  ClopsParams params;
  double clops = 0.0;
  BenchmarkReport report;
};

/// Parameterized-template throughput benchmark: K serial rounds binding
/// fresh random angles into M routed QV-shaped templates, S shots each.
ClopsResult run_clops(Backend& backend, int quantum_volume, int templates = 100,
                      int updates = 10, int shots = 100, std::uint64_t seed = 0);

}  // namespace qpubench
