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

#include <cstddef>
#include <string>

#include "qpubench/common.hpp"

namespace qpubench::kernels {

/// Statevector inner-loop kernels. One table per backend; scalar is the
/// reference implementation, SIMD variants must agree with it (equivalence
/// is property-tested).
///
/// Conventions: amplitudes are little-endian (qubit q's bit is (k >> q) & 1),
/// 2x2 / 4x4 gate matrices are row-major, and for two-qubit kernels the
/// first operand holds the low-order bit of the 4-dim basis index.
struct Ops {
  const char* name;
  void (*apply_matrix_1q)(c64* state, std::size_t n_amps, unsigned target, const c64* m);
  void (*apply_diag_1q)(c64* state, std::size_t n_amps, unsigned target, c64 d0, c64 d1);
  void (*apply_cz)(c64* state, std::size_t n_amps, unsigned qa, unsigned qb);
  void (*apply_matrix_2q)(c64* state, std::size_t n_amps, unsigned qa, unsigned qb, const c64* m);
  double (*norm_sq)(const c64* state, std::size_t n_amps);
  void (*abs_sq)(const c64* state, double* out, std::size_t n_amps);
  void (*phase_mul)(c64* state, const c64* phases, std::size_t n_amps);
  double (*weighted_prob_sum)(const c64* state, const double* w, std::size_t n_amps);
};

const Ops& scalar_ops();

/// AVX2 table, or nullptr when not compiled in / not supported by this CPU.
const Ops* avx2_ops();

/// Active table: QPUBENCH_SIMD=scalar|avx2 overrides, otherwise the best
/// backend the CPU supports.
const Ops& active_ops();

/// Test hook: force a backend by name ("scalar", "avx2", "" to reset).
void force_backend(const std::string& name);

}  // namespace qpubench::kernels
