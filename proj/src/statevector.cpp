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

#include "qpubench/statevector.hpp"

#include <algorithm>
#include <cmath>

#include "qpubench/kernels.hpp"

namespace qpubench {

Statevector::Statevector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxSimQubits)
    throw InvalidArgument("statevector qubit count out of range: " + std::to_string(num_qubits));
  amps_.assign(std::size_t{1} << n_, c64(0));
  amps_[0] = 1.0;
}

void Statevector::reset_to_zero_state() {
  std::fill(amps_.begin(), amps_.end(), c64(0));
  amps_[0] = 1.0;
}

void Statevector::set_basis_state(std::uint64_t k) {
  std::fill(amps_.begin(), amps_.end(), c64(0));
  amps_.at(k) = 1.0;
}

void Statevector::apply_1q(int q, const Mat2& m) {
  kernels::active_ops().apply_matrix_1q(amps_.data(), amps_.size(), static_cast<unsigned>(q),
                                        m.data());
}

void Statevector::apply_rz(int q, double theta) {
  kernels::active_ops().apply_diag_1q(amps_.data(), amps_.size(), static_cast<unsigned>(q),
                                      std::exp(c64(0, -theta / 2)), std::exp(c64(0, theta / 2)));
}

void Statevector::apply_cz(int a, int b) {
  kernels::active_ops().apply_cz(amps_.data(), amps_.size(), static_cast<unsigned>(a),
                                 static_cast<unsigned>(b));
}

void Statevector::apply_2q(int a, int b, const Mat4& m) {
  kernels::active_ops().apply_matrix_2q(amps_.data(), amps_.size(), static_cast<unsigned>(a),
                                        static_cast<unsigned>(b), m.data());
}

void Statevector::apply(const Instruction& ins) {
  switch (ins.kind) {
    case OpKind::PRX:
      apply_1q(ins.operands[0], prx_matrix(ins.params[0], ins.params[1]));
      break;
    case OpKind::RZ:
      apply_rz(ins.operands[0], ins.params[0]);
      break;
    case OpKind::CZ:
      apply_cz(ins.operands[0], ins.operands[1]);
      break;
    case OpKind::H:
      apply_1q(ins.operands[0], h_matrix());
      break;
    case OpKind::X:
      apply_1q(ins.operands[0], x_matrix());
      break;
    case OpKind::U1Q:
      apply_1q(ins.operands[0], ins.matrix_1q());
      break;
    case OpKind::CNOT:
      apply_2q(ins.operands[0], ins.operands[1], cnot_matrix());
      break;
    case OpKind::SWAP:
      apply_2q(ins.operands[0], ins.operands[1], swap_matrix());
      break;
    case OpKind::U2Q:
      apply_2q(ins.operands[0], ins.operands[1], ins.matrix_2q());
      break;
    case OpKind::BARRIER:
      break;
    case OpKind::MEASURE:
      throw InvalidArgument("cannot apply MEASURE as a unitary");
  }
}

double Statevector::norm_sq() const {
  return kernels::active_ops().norm_sq(amps_.data(), amps_.size());
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  kernels::active_ops().abs_sq(amps_.data(), p.data(), amps_.size());
  return p;
}

double Statevector::probability(std::uint64_t k) const {
  return std::norm(amps_.at(k));
}

Statevector simulate_statevector(const Circuit& c) {
  c.validate();
  if (c.has_measurement())
    throw InvalidArgument("simulate_statevector: circuit contains MEASURE");
  Statevector sv(c.num_qubits);
  for (const auto& ins : c.instructions) sv.apply(ins);
  return sv;
}

std::vector<c64> circuit_unitary(const Circuit& c) {
  c.validate();
  if (c.num_qubits > kMaxUnitaryQubits)
    throw InvalidArgument("circuit_unitary: too many qubits");
  if (c.has_measurement()) throw InvalidArgument("circuit_unitary: circuit contains MEASURE");
  const std::size_t dim = std::size_t{1} << c.num_qubits;
  std::vector<c64> u(dim * dim);
  Statevector sv(c.num_qubits);
  for (std::size_t col = 0; col < dim; ++col) {
    sv.set_basis_state(col);
    for (const auto& ins : c.instructions) sv.apply(ins);
    for (std::size_t row = 0; row < dim; ++row) u[row * dim + col] = sv.amplitudes()[row];
  }
  return u;
}

double unitary_distance_up_to_phase(const std::vector<c64>& a, const std::vector<c64>& b) {
  if (a.size() != b.size()) return 1.0;
  c64 inner = 0;
  for (std::size_t i = 0; i < a.size(); ++i) inner += std::conj(b[i]) * a[i];
  c64 phase = std::abs(inner) > 1e-12 ? inner / std::abs(inner) : c64(1);
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - phase * b[i]));
  return worst;
}

}  // namespace qpubench
