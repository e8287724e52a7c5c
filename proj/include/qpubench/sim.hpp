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

#include <cstdint>
#include <map>
#include <string>

#include "qpubench/circuit.hpp"
#include "qpubench/device.hpp"

namespace qpubench {

/// Channel switches of the digital twin. The seed fully determines all
/// sampling; disabling every flag yields the ideal simulator.
struct NoiseConfig {
  bool gate_depolarizing = true;
  bool idle_decoherence = true;
  bool readout_flip = true;
  bool drive_crosstalk = false;  // also enables the flux-crosstalk CZ phases
  std::uint64_t seed = 0;
  int workers = 1;  // shot partitioning; results are worker-count independent

  static NoiseConfig ideal(std::uint64_t seed = 0) {
    return {false, false, false, false, seed, 1};
  }
  static NoiseConfig twin(std::uint64_t seed = 0) {
    return {true, true, true, false, seed, 1};
  }
  bool any_stochastic() const { return gate_depolarizing || idle_decoherence; }
};

/// Bitstring counts; character k is the k-th measured qubit in ascending
/// id order (equal to qubit k when all qubits are measured).
using Counts = std::map<std::string, std::uint64_t>;

/// Full-depolarization probability lambda with average gate infidelity
/// exactly r for Hilbert dimension d: lambda = r * d / (d - 1).
double error_to_depolarizing(double r, int d);

/// Executes a native circuit on the digital twin via per-shot Monte-Carlo
/// Pauli trajectories. Circuit qubit ids index device qubits; CZs must sit
/// on couplers. Counts sum to `shots`.
Counts run_noisy(const Circuit& circuit, const DeviceModel& device, const NoiseConfig& noise,
                 std::uint64_t shots);

}  // namespace qpubench
