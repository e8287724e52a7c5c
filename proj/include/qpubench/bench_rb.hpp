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
#include "qpubench/clifford.hpp"
#include "qpubench/execution.hpp"
#include "qpubench/report.hpp"

namespace qpubench {

/// One benchmarked element: a single qubit or a coupler pair (device ids).
struct RbElement {
  std::vector<int> qubits;
  std::string label() const;
};

struct RbSpec {
  std::vector<RbElement> targets;
  std::vector<int> depths = {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  int circuits_per_depth = 30;
  bool interleave_cz = false;  // adds the interleaved runs for 2q targets
  /// Simultaneous groups as index lists into `targets`; empty runs each
  /// element on its own.
  std::vector<std::vector<int>> groups;
  std::uint64_t shots = 1024;
  std::uint64_t seed = 0;
  bool with_bootstrap = false;

  void validate(const Topology& topo) const;
};

struct RbGeneratedCircuit {
  Circuit circuit;      // native, over device qubits
  int depth = 0;
  int sample = 0;
  int group = 0;        // index into effective groups
  bool interleaved = false;
};

/// Uniform random Clifford sequences with the exact inversion element
/// appended; interleaved variants insert CZ after every Clifford.
/// Elements of one group share circuits with barrier-aligned slots.
std::vector<RbGeneratedCircuit> gen_rb_sequences(const RbSpec& spec, const DeviceModel& device);

/// Greedy deterministic partition such that any two elements in a group are
/// separated by graph distance >= 2 (two idle couplers, one idle qubit).
std::vector<std::vector<int>> partition_distance_groups(const std::vector<RbElement>& targets,
                                                        const Topology& topo);

struct RbElementResult {
  RbElement element;
  std::vector<DecayPoint> points;
  std::vector<DecayPoint> points_interleaved;  // IRB only
  DecayFit fit;
  DecayFit fit_interleaved;
  ErrorEstimate error;   // per-Clifford (rb) or interleaved-gate (irb)
  double metric = 0.0;   // headline number: r_native (1q), r_cz (irb), r (2q rb)
  Ci95 ci{};
};

struct RbSuiteResult {
  std::vector<RbElementResult> elements;
  MetricSummary summary;  // CDF over element metrics
  double gbar_1q = 0.0;
  double gbar_cz = 1.5;
  double mean_prx_per_2q_clifford = 0.0;
  BenchmarkReport report;
};

RbSuiteResult run_rb_suite(Backend& backend, const RbSpec& spec);

// ---------------------------------------------------------------------------
// mirror RB

struct MrbSpec {
  std::vector<std::vector<int>> subsets;  // connected physical qubit subsets
  std::vector<int> depths = {2, 4, 8, 16, 32, 64};  // even layer counts
  int samples_per_depth = 30;
  double cz_density = 0.5;  // xi
  std::uint64_t shots = 1024;
  std::uint64_t seed = 0;

  void validate(const Topology& topo) const;
};

struct MrbCircuit {
  Circuit circuit;       // native, over device qubits
  std::string target;    // expected bitstring over the subset, ascending ids
  int subset_index = 0;
  int depth = 0;
  int sample = 0;
  int cz_count = 0;
};

/// Mirror circuits: d/2 random layers and their inverses, uniformly random
/// 1q-Clifford layers, CZ layers from thinned random maximal matchings,
/// Pauli frame randomization compiled into the layers, random cap layers.
std::vector<MrbCircuit> gen_mrb_circuits(const MrbSpec& spec, const Topology& topo);

struct MrbSubsetResult {
  std::vector<int> qubits;
  std::vector<DecayPoint> points;  // mean polarization per depth
  DecayFit fit;                    // fix_B = 0
  double r_omega = 0.0;
  double r_per_qubit = 0.0;
};

struct MrbResult {
  std::vector<MrbSubsetResult> subsets;
  BenchmarkReport report;
};

MrbResult run_mrb(Backend& backend, const MrbSpec& spec);

// ---------------------------------------------------------------------------
// drive crosstalk estimation

struct CrosstalkOptions {
  int pulse_train = 50;       // repeated pulses amplifying the spectator
  int amplitudes = 9;         // sweep points in (0, max_amplitude]
  double max_amplitude = 2.7;  // radians of nominal target rotation
  std::uint64_t shots = 20000;
  std::uint64_t seed = 0;
};

struct CrosstalkEstimate {
  double db = 0.0;
  bool at_floor = false;
  double target_slope = 0.0;
  double spectator_slope = 0.0;
};

/// Amplitude-Rabi estimate of the drive crosstalk ratio between a driven
/// qubit and a spectator, in dB. Unresolvable spectators report the
/// -80 dB floor.
CrosstalkEstimate estimate_drive_crosstalk(Backend& backend, int target_j, int spectator_i,
                                           const CrosstalkOptions& opts = {});

}  // namespace qpubench
