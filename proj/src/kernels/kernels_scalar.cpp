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

#include "qpubench/kernels.hpp"

namespace qpubench::kernels {
namespace {

void s_apply_matrix_1q(c64* s, std::size_t n, unsigned t, const c64* m) {
  const std::size_t mask = std::size_t{1} << t;
  const std::size_t lo = mask - 1;
  const std::size_t hi = ~lo;
  for (std::size_t i = 0; i < n / 2; ++i) {
    std::size_t i0 = ((i & hi) << 1) | (i & lo);
    std::size_t i1 = i0 | mask;
    c64 a0 = s[i0], a1 = s[i1];
    s[i0] = m[0] * a0 + m[1] * a1;
    s[i1] = m[2] * a0 + m[3] * a1;
  }
}

void s_apply_diag_1q(c64* s, std::size_t n, unsigned t, c64 d0, c64 d1) {
  const std::size_t mask = std::size_t{1} << t;
  for (std::size_t k = 0; k < n; ++k) s[k] *= (k & mask) ? d1 : d0;
}

void s_apply_cz(c64* s, std::size_t n, unsigned qa, unsigned qb) {
  const std::size_t ma = std::size_t{1} << qa;
  const std::size_t mb = std::size_t{1} << qb;
  const std::size_t both = ma | mb;
  for (std::size_t k = 0; k < n; ++k)
    if ((k & both) == both) s[k] = -s[k];
}

void s_apply_matrix_2q(c64* s, std::size_t n, unsigned qa, unsigned qb, const c64* m) {
  const std::size_t ma = std::size_t{1} << qa;
  const std::size_t mb = std::size_t{1} << qb;
  for (std::size_t k = 0; k < n; ++k) {
    if (k & (ma | mb)) continue;  // visit each quadruple at its base index
    c64 a0 = s[k], a1 = s[k | ma], a2 = s[k | mb], a3 = s[k | ma | mb];
    s[k] = m[0] * a0 + m[1] * a1 + m[2] * a2 + m[3] * a3;
    s[k | ma] = m[4] * a0 + m[5] * a1 + m[6] * a2 + m[7] * a3;
    s[k | mb] = m[8] * a0 + m[9] * a1 + m[10] * a2 + m[11] * a3;
    s[k | ma | mb] = m[12] * a0 + m[13] * a1 + m[14] * a2 + m[15] * a3;
  }
}

double s_norm_sq(const c64* s, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += s[k].real() * s[k].real() + s[k].imag() * s[k].imag();
  return acc;
}

void s_abs_sq(const c64* s, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k)
    out[k] = s[k].real() * s[k].real() + s[k].imag() * s[k].imag();
}

void s_phase_mul(c64* s, const c64* p, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) s[k] *= p[k];
}

double s_weighted_prob_sum(const c64* s, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    acc += w[k] * (s[k].real() * s[k].real() + s[k].imag() * s[k].imag());
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", s_apply_matrix_1q, s_apply_diag_1q,  s_apply_cz,
                       s_apply_matrix_2q, s_norm_sq, s_abs_sq, s_phase_mul,
                       s_weighted_prob_sum};
  return ops;
}

}  // namespace qpubench::kernels
