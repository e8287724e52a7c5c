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

#include <array>
#include <cstdint>

#include "qpubench/circuit.hpp"
#include "qpubench/gates.hpp"

namespace qpubench {

/// Two-qubit Pauli in XZ form: i^phase * X0^x0 Z0^z0 X1^x1 Z1^z1.
/// bits: bit0=x0, bit1=z0, bit2=x1, bit3=z1.
struct Pauli2 {
  unsigned bits = 0;
  unsigned phase = 0;  // power of i, mod 4
};

Pauli2 pauli_mul(const Pauli2& p, const Pauli2& q);

/// Conjugation action of a two-qubit Clifford on Pauli generators
/// (global phase dropped). Uniquely labels each of the 11520 elements.
struct Tableau2q {
  std::array<Pauli2, 4> img;  // images of X0, Z0, X1, Z1

  static Tableau2q identity();
  Pauli2 apply(const Pauli2& p) const;
  /// Composition: first `this`, then `next`.
  Tableau2q then(const Tableau2q& next) const;
  Tableau2q inverse() const;
  std::uint32_t key() const;  // 20 bits: (bits | sign << 4) per generator
};

/// Single-qubit Clifford group (24 elements).
class Clifford1qTable {
 public:
  static const Clifford1qTable& instance();

  struct Element {
    Mat2 matrix;
    Native1q native;   // <= 1 PRX + RZ
    int prx_count;
    // conjugation on (x, z) bit pairs, GF(2); sign bits for +-
    std::uint8_t img_x_bits, img_z_bits;
    std::uint8_t img_x_sign, img_z_sign;
  };

  int size() const { return 24; }
  const Element& operator[](int i) const { return elements_[i]; }
  int compose(int a, int b) const { return compose_[a][b]; }  // index of A*B
  int inverse(int i) const { return inverse_[i]; }
  int identity_index() const { return identity_; }
  /// Group index of a Pauli (0=I, 1=X, 2=Y, 3=Z).
  int pauli_index(int p) const { return pauli_[p]; }
  int index_of_matrix(const Mat2& m) const;  // up to global phase; -1 if absent
  /// Mean native PRX pulses per element (gbar for RB normalization).
  double mean_prx_per_clifford() const;

 private:
  Clifford1qTable();
  std::array<Element, 24> elements_;
  std::array<std::array<std::uint8_t, 24>, 24> compose_;
  std::array<std::uint8_t, 24> inverse_;
  std::array<std::uint8_t, 4> pauli_;
  int identity_ = 0;
};

/// Two-qubit Clifford group (11520 elements) in the canonical class
/// decomposition over the CZ entangler:
///   class 0: (A x B)                             576
///   class 1: (A x B) CZ (Sa x Sb)               5184
///   class 2: (A x B) CZ (W x W) CZ (Sa x Sb)    5184
///   class 3: (A x B) SWAP                        576
/// where S = {I, E, E^2} is the axis-cycling rotation about (1,1,1) and
/// W is a Y rotation by pi/2. Mean CZ count is exactly 1.5.
class Clifford2qTable {
 public:
  static const Clifford2qTable& instance();

  struct Element {
    std::uint8_t cls, a, b, sa, sb;
  };

  std::size_t size() const { return 11520; }
  const Element& element(std::size_t idx) const { return elements_[idx]; }
  const Tableau2q& tableau(std::size_t idx) const { return tableaus_[idx]; }
  std::size_t index_from_key(std::uint32_t key) const;
  int cz_count(std::size_t idx) const;
  double mean_cz_per_clifford() const;
  double mean_prx_per_clifford() const;
  /// Appends the element's native gates acting on (qa, qb).
  void append_native(Circuit& c, std::size_t idx, int qa, int qb) const;
  Mat4 matrix(std::size_t idx) const;

 private:
  Clifford2qTable();
  std::vector<Element> elements_;
  std::vector<Tableau2q> tableaus_;
  std::vector<std::uint32_t> key_to_index_;  // 2^20 entries
  int w_index_;                              // W in the 1q table
  std::array<int, 3> s3_;                    // {I, E, E^2} as 1q indices
  mutable double mean_prx_ = -1.0;
};

/// Tableau of (A x B) from single-qubit table entries.
Tableau2q tensor_tableau(int a_idx, int b_idx);
/// Fixed tableaus of the entanglers.
Tableau2q cz_tableau();
Tableau2q swap_tableau();

/// Tableau extracted from an explicit 4x4 unitary (test oracle path).
Tableau2q tableau_from_matrix(const Mat4& u);

}  // namespace qpubench
