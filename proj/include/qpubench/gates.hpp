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

#include "qpubench/circuit.hpp"

namespace qpubench {

using Mat2 = std::array<c64, 4>;    // row-major 2x2
using Mat4 = std::array<c64, 16>;   // row-major 4x4

Mat2 mat2_mul(const Mat2& a, const Mat2& b);
Mat4 mat4_mul(const Mat4& a, const Mat4& b);
Mat2 mat2_dagger(const Mat2& a);
Mat4 mat4_dagger(const Mat4& a);
/// kron in little-endian operand order: lo varies fastest, index = lo + 2*hi.
Mat4 kron_le(const Mat2& lo, const Mat2& hi);
Mat2 mat2_identity();
Mat4 mat4_identity();

/// Largest-entry distance |a - e^{ip} b| minimized over global phase p.
double mat2_distance_up_to_phase(const Mat2& a, const Mat2& b);
double mat4_distance_up_to_phase(const Mat4& a, const Mat4& b);

Mat2 prx_matrix(double theta, double phase);
Mat2 rz_matrix(double theta);
Mat2 h_matrix();
Mat2 x_matrix();
Mat2 y_matrix();
Mat2 z_matrix();
Mat2 s_matrix();
Mat4 cz_matrix();
/// operands [control, target], control on the low bit.
Mat4 cnot_matrix();
Mat4 swap_matrix();

/// One native PRX plus a virtual RZ realizing a 2x2 unitary up to global
/// phase. theta == 0 means the PRX is omitted; rz == 0 omits the RZ.
struct Native1q {
  double theta = 0.0;
  double phase = 0.0;
  double rz = 0.0;
};

/// Decompose an arbitrary 2x2 unitary as PRX(theta, phase) . RZ(rz), global
/// phase dropped. (Circuit order: RZ first, then PRX.)
Native1q decompose_1q(const Mat2& u);

void append_native_1q(Circuit& c, int q, const Native1q& n);

/// Lower extended gates (H/X/CNOT/SWAP/U1Q/U2Q) to the native set, merging
/// adjacent virtual RZs and dropping identity rotations. Unitary is
/// preserved up to global phase.
Circuit decompose_to_native(const Circuit& in);

/// Append a native realization of an arbitrary two-qubit unitary (KAK-style
/// canonical decomposition; CZ count <= 4, 3 for generic interaction).
void append_native_2q(Circuit& c, int a, int b, const Mat4& u);

/// Canonical interaction coefficients of exp(i(ax XX + ay YY + az ZZ)).
struct KakCoefficients {
  double ax = 0, ay = 0, az = 0;
};

/// Exposed for tests: decompose u = (l0 x l1) . exp(i(ax XX + ay YY + az ZZ))
/// . (r0 x r1) up to global phase.
struct KakDecomposition {
  Mat2 l0, l1, r0, r1;
  KakCoefficients k;
};
KakDecomposition kak_decompose(const Mat4& u);

/// exp(i(ax XX + ay YY + az ZZ)) as a matrix.
Mat4 canonical_gate_matrix(const KakCoefficients& k);

/// Factor a (phase x) tensor-product unitary into its 2x2 factors.
/// Throws InvalidArgument when u is not a tensor product.
std::pair<Mat2, Mat2> factor_tensor_product(const Mat4& u);

/// Collapse runs of single-qubit native gates into at most RZ + PRX each,
/// dropping phase-only runs ahead of measurements. Input must be native.
Circuit collapse_1q_runs(const Circuit& in);

}  // namespace qpubench
