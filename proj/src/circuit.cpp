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

#include "qpubench/circuit.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace qpubench {

namespace {
struct KindName {
  OpKind kind;
  const char* name;
};
constexpr KindName kKindNames[] = {
    {OpKind::PRX, "prx"},   {OpKind::RZ, "rz"},     {OpKind::CZ, "cz"},
    {OpKind::MEASURE, "measure"}, {OpKind::BARRIER, "barrier"}, {OpKind::H, "h"},
    {OpKind::X, "x"},       {OpKind::CNOT, "cnot"}, {OpKind::SWAP, "swap"},
    {OpKind::U1Q, "u1q"},   {OpKind::U2Q, "u2q"},
};
}  // namespace

const char* op_kind_name(OpKind k) {
  for (auto& kn : kKindNames)
    if (kn.kind == k) return kn.name;
  return "?";
}

OpKind op_kind_from_name(const std::string& name) {
  for (auto& kn : kKindNames)
    if (name == kn.name) return kn.kind;
  throw InvalidArgument("unknown instruction kind: " + name);
}

bool op_kind_is_native(OpKind k) {
  switch (k) {
    case OpKind::PRX:
    case OpKind::RZ:
    case OpKind::CZ:
    case OpKind::MEASURE:
    case OpKind::BARRIER:
      return true;
    default:
      return false;
  }
}

std::array<c64, 4> Instruction::matrix_1q() const {
  std::array<c64, 4> m;
  for (int i = 0; i < 4; ++i) m[i] = c64(params.at(2 * i), params.at(2 * i + 1));
  return m;
}

std::array<c64, 16> Instruction::matrix_2q() const {
  std::array<c64, 16> m;
  for (int i = 0; i < 16; ++i) m[i] = c64(params.at(2 * i), params.at(2 * i + 1));
  return m;
}

Circuit& Circuit::prx(int q, double theta, double phase) {
  instructions.push_back({OpKind::PRX, {q}, {theta, phase}});
  return *this;
}
Circuit& Circuit::rz(int q, double theta) {
  instructions.push_back({OpKind::RZ, {q}, {theta}});
  return *this;
}
Circuit& Circuit::cz(int a, int b) {
  instructions.push_back({OpKind::CZ, {a, b}, {}});
  return *this;
}
Circuit& Circuit::measure(int q) {
  instructions.push_back({OpKind::MEASURE, {q}, {}});
  return *this;
}
Circuit& Circuit::measure_all() {
  for (int q = 0; q < num_qubits; ++q) measure(q);
  return *this;
}
Circuit& Circuit::barrier(std::vector<int> qs) {
  instructions.push_back({OpKind::BARRIER, std::move(qs), {}});
  return *this;
}
Circuit& Circuit::h(int q) {
  instructions.push_back({OpKind::H, {q}, {}});
  return *this;
}
Circuit& Circuit::x(int q) {
  instructions.push_back({OpKind::X, {q}, {}});
  return *this;
}
Circuit& Circuit::cnot(int control, int target) {
  instructions.push_back({OpKind::CNOT, {control, target}, {}});
  return *this;
}
Circuit& Circuit::swap_gate(int a, int b) {
  instructions.push_back({OpKind::SWAP, {a, b}, {}});
  return *this;
}
Circuit& Circuit::u1q(int q, const std::array<c64, 4>& m) {
  std::vector<double> params;
  params.reserve(8);
  for (auto z : m) {
    params.push_back(z.real());
    params.push_back(z.imag());
  }
  instructions.push_back({OpKind::U1Q, {q}, std::move(params)});
  return *this;
}
Circuit& Circuit::u2q(int a, int b, const std::array<c64, 16>& m) {
  std::vector<double> params;
  params.reserve(32);
  for (auto z : m) {
    params.push_back(z.real());
    params.push_back(z.imag());
  }
  instructions.push_back({OpKind::U2Q, {a, b}, std::move(params)});
  return *this;
}

bool Circuit::is_native() const {
  return std::all_of(instructions.begin(), instructions.end(),
                     [](const Instruction& i) { return op_kind_is_native(i.kind); });
}

bool Circuit::has_measurement() const {
  return std::any_of(instructions.begin(), instructions.end(),
                     [](const Instruction& i) { return i.kind == OpKind::MEASURE; });
}

std::vector<int> Circuit::gate_support() const {
  std::set<int> qs;
  for (auto& i : instructions) {
    if (i.kind == OpKind::MEASURE || i.kind == OpKind::BARRIER) continue;
    qs.insert(i.operands.begin(), i.operands.end());
  }
  return {qs.begin(), qs.end()};
}

std::vector<int> Circuit::measured_qubits() const {
  std::set<int> qs;
  for (auto& i : instructions)
    if (i.kind == OpKind::MEASURE) qs.insert(i.operands.begin(), i.operands.end());
  return {qs.begin(), qs.end()};
}

void Circuit::validate() const {
  std::vector<char> measured(num_qubits, 0);
  for (auto& ins : instructions) {
    for (int q : ins.operands)
      if (q < 0 || q >= num_qubits)
        throw InvalidArgument("operand " + std::to_string(q) + " out of range in circuit '" +
                              name + "'");
    for (double p : ins.params)
      if (!std::isfinite(p)) throw InvalidArgument("non-finite instruction parameter");
    std::size_t want_operands = 0, want_params = 0;
    switch (ins.kind) {
      case OpKind::PRX: want_operands = 1; want_params = 2; break;
      case OpKind::RZ: want_operands = 1; want_params = 1; break;
      case OpKind::CZ: case OpKind::CNOT: case OpKind::SWAP: want_operands = 2; break;
      case OpKind::MEASURE: case OpKind::H: case OpKind::X: want_operands = 1; break;
      case OpKind::U1Q: want_operands = 1; want_params = 8; break;
      case OpKind::U2Q: want_operands = 2; want_params = 32; break;
      case OpKind::BARRIER: want_operands = ins.operands.size(); break;
    }
    if (ins.operands.size() != want_operands || ins.params.size() != want_params)
      throw InvalidArgument(std::string("malformed ") + op_kind_name(ins.kind) + " instruction");
    if (want_operands == 2 && ins.operands[0] == ins.operands[1])
      throw InvalidArgument("two-qubit gate operands must be distinct");
    if (ins.kind == OpKind::MEASURE) {
      if (measured[ins.operands[0]]) throw InvalidArgument("qubit measured twice");
      measured[ins.operands[0]] = 1;
    } else if (ins.kind != OpKind::BARRIER) {
      for (int q : ins.operands)
        if (measured[q]) throw InvalidArgument("gate after MEASURE on qubit " + std::to_string(q));
    }
  }
}

void to_json(nlohmann::json& j, const Instruction& i) {
  j = nlohmann::json{{"kind", op_kind_name(i.kind)}, {"operands", i.operands}};
  if (!i.params.empty()) j["params"] = i.params;
}

void from_json(const nlohmann::json& j, Instruction& i) {
  i.kind = op_kind_from_name(j.at("kind").get<std::string>());
  j.at("operands").get_to(i.operands);
  i.params.clear();
  if (j.contains("params")) j.at("params").get_to(i.params);
}

void to_json(nlohmann::json& j, const Circuit& c) {
  j = nlohmann::json{{"name", c.name},
                     {"num_qubits", c.num_qubits},
                     {"instructions", c.instructions}};
}

void from_json(const nlohmann::json& j, Circuit& c) {
  c.name = j.value("name", "");
  c.num_qubits = j.at("num_qubits").get<int>();
  j.at("instructions").get_to(c.instructions);
}

}  // namespace qpubench
