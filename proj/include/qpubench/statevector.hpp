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

#include <vector>

#include "qpubench/circuit.hpp"
#include "qpubench/gates.hpp"

namespace qpubench {

/// Dense little-endian statevector over an explicit qubit count.
class Statevector {
 public:
  explicit Statevector(int num_qubits);

  int num_qubits() const { return n_; }
  std::size_t size() const { return amps_.size(); }
  c64* data() { return amps_.data(); }
  const c64* data() const { return amps_.data(); }
  std::vector<c64>& amplitudes() { return amps_; }
  const std::vector<c64>& amplitudes() const { return amps_; }

  void reset_to_zero_state();
  void set_basis_state(std::uint64_t k);

  void apply_1q(int q, const Mat2& m);
  void apply_rz(int q, double theta);
  void apply_cz(int a, int b);
  void apply_2q(int a, int b, const Mat4& m);  // operand a = low bit
  /// Applies any unitary instruction (gate kinds only).
  void apply(const Instruction& ins);

  double norm_sq() const;
  std::vector<double> probabilities() const;
  /// Probability of one basis state.
  double probability(std::uint64_t k) const;

 private:
  int n_;
  std::vector<c64> amps_;
};

inline constexpr int kMaxSimQubits = 24;      // memory guard for the twin
inline constexpr int kMaxUnitaryQubits = 12;  // guard for dense unitaries

/// Final state of a measurement-free circuit from |0...0>.
Statevector simulate_statevector(const Circuit& c);

/// Exact 2^n x 2^n unitary (row-major, little-endian), global phase as built.
/// Requires n <= kMaxUnitaryQubits and no MEASURE.
std::vector<c64> circuit_unitary(const Circuit& c);

/// Max |a - e^{ip} b| over entries, minimized over global phase.
double unitary_distance_up_to_phase(const std::vector<c64>& a, const std::vector<c64>& b);

}  // namespace qpubench
