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

#include <array>
#include <string>
#include <vector>

#include "qpubench/common.hpp"

namespace qpubench {

/// Native kinds are PRX/RZ/CZ/MEASURE/BARRIER. The extended kinds exist only
/// as compiler input and are lowered by decompose_to_native.
enum class OpKind {
  PRX,      // params [theta, phase]: rotation by theta about the XY-plane axis at `phase`
  RZ,       // params [theta]: virtual Z rotation, zero duration
  CZ,
  MEASURE,
  BARRIER,  // synchronizes its operands (all qubits when operand list empty)
  // extended input set
  H,
  X,
  CNOT,     // operands [control, target]
  SWAP,
  U1Q,      // params: 2x2 row-major matrix as [re, im] x 4
  U2Q,      // params: 4x4 row-major matrix as [re, im] x 16; operand 0 = low bit
};

const char* op_kind_name(OpKind k);
OpKind op_kind_from_name(const std::string& name);
bool op_kind_is_native(OpKind k);

struct Instruction {
  OpKind kind;
  std::vector<int> operands;
  std::vector<double> params;

  double theta() const { return params.at(0); }
  double phase() const { return params.at(1); }
  std::array<c64, 4> matrix_1q() const;    // for U1Q
  std::array<c64, 16> matrix_2q() const;   // for U2Q
};

struct Circuit {
  int num_qubits = 0;
  std::string name;
  std::vector<Instruction> instructions;

  Circuit() = default;
  explicit Circuit(int n, std::string name_ = "") : num_qubits(n), name(std::move(name_)) {}

  Circuit& prx(int q, double theta, double phase);
  Circuit& rz(int q, double theta);
  Circuit& cz(int a, int b);
  Circuit& measure(int q);
  Circuit& measure_all();
  Circuit& barrier(std::vector<int> qs = {});
  Circuit& h(int q);
  Circuit& x(int q);
  Circuit& cnot(int control, int target);
  Circuit& swap_gate(int a, int b);
  Circuit& u1q(int q, const std::array<c64, 4>& m);
  Circuit& u2q(int a, int b, const std::array<c64, 16>& m);

  bool is_native() const;
  bool has_measurement() const;
  /// Qubits touched by gate operations (not MEASURE/BARRIER), ascending.
  std::vector<int> gate_support() const;
  /// Qubits with a MEASURE, ascending; bitstring character order.
  std::vector<int> measured_qubits() const;

  /// Structural invariants: operand ranges, operand counts per kind, finite
  /// parameters, at most one MEASURE per qubit with no later gates on it.
  void validate() const;
};

void to_json(nlohmann::json& j, const Instruction& i);
void from_json(const nlohmann::json& j, Instruction& i);
void to_json(nlohmann::json& j, const Circuit& c);
void from_json(const nlohmann::json& j, Circuit& c);

}  // namespace qpubench
