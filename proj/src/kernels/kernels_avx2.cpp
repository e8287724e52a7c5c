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

#ifdef QPB_HAVE_AVX2_BUILD

#include <immintrin.h>

namespace qpubench::kernels {
namespace {

// A __m256d holds two complex doubles: [re0, im0, re1, im1].

// (re + i*im) * v, with the scalar broadcast across both complex lanes.
inline __m256d cmul_const(__m256d v, __m256d re, __m256d im) {
  __m256d sw = _mm256_permute_pd(v, 0x5);  // [im0, re0, im1, re1]
  return _mm256_addsub_pd(_mm256_mul_pd(v, re), _mm256_mul_pd(sw, im));
}

// Full elementwise complex multiply x*y.
inline __m256d cmul(__m256d x, __m256d y) {
  __m256d xr = _mm256_movedup_pd(x);          // [xr0, xr0, xr1, xr1]
  __m256d xi = _mm256_permute_pd(x, 0xF);     // [xi0, xi0, xi1, xi1]
  __m256d ysw = _mm256_permute_pd(y, 0x5);    // [yi0, yr0, yi1, yr1]
  return _mm256_addsub_pd(_mm256_mul_pd(xr, y), _mm256_mul_pd(xi, ysw));
}

inline __m256d broadcast_c(c64 z) {
  return _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag());
}

void a_apply_matrix_1q(c64* s, std::size_t n, unsigned t, const c64* m) {
  double* p = reinterpret_cast<double*>(s);
  const __m256d m00r = _mm256_set1_pd(m[0].real()), m00i = _mm256_set1_pd(m[0].imag());
  const __m256d m01r = _mm256_set1_pd(m[1].real()), m01i = _mm256_set1_pd(m[1].imag());
  const __m256d m10r = _mm256_set1_pd(m[2].real()), m10i = _mm256_set1_pd(m[2].imag());
  const __m256d m11r = _mm256_set1_pd(m[3].real()), m11i = _mm256_set1_pd(m[3].imag());

  if (t == 0) {
    // Pairs are interleaved; one vector holds a full (a0, a1) pair.
    const __m256d col0 = _mm256_setr_pd(m[0].real(), m[0].imag(), m[2].real(), m[2].imag());
    const __m256d col1 = _mm256_setr_pd(m[1].real(), m[1].imag(), m[3].real(), m[3].imag());
    for (std::size_t k = 0; k < n; k += 2) {
      __m256d v = _mm256_loadu_pd(p + 2 * k);
      __m256d a0 = _mm256_permute2f128_pd(v, v, 0x00);
      __m256d a1 = _mm256_permute2f128_pd(v, v, 0x11);
      __m256d r = _mm256_add_pd(cmul(a0, col0), cmul(a1, col1));
      _mm256_storeu_pd(p + 2 * k, r);
    }
    return;
  }

  const std::size_t stride = std::size_t{1} << t;  // in amplitudes
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    double* p0 = p + 2 * base;
    double* p1 = p + 2 * (base + stride);
    for (std::size_t k = 0; k < stride; k += 2) {
      __m256d v0 = _mm256_loadu_pd(p0 + 2 * k);
      __m256d v1 = _mm256_loadu_pd(p1 + 2 * k);
      __m256d r0 = _mm256_add_pd(cmul_const(v0, m00r, m00i), cmul_const(v1, m01r, m01i));
      __m256d r1 = _mm256_add_pd(cmul_const(v0, m10r, m10i), cmul_const(v1, m11r, m11i));
      _mm256_storeu_pd(p0 + 2 * k, r0);
      _mm256_storeu_pd(p1 + 2 * k, r1);
    }
  }
}

void a_apply_diag_1q(c64* s, std::size_t n, unsigned t, c64 d0, c64 d1) {
  double* p = reinterpret_cast<double*>(s);
  if (t == 0) {
    const __m256d pat = _mm256_setr_pd(d0.real(), d0.imag(), d1.real(), d1.imag());
    for (std::size_t k = 0; k < n; k += 2) {
      __m256d v = _mm256_loadu_pd(p + 2 * k);
      _mm256_storeu_pd(p + 2 * k, cmul(pat, v));
    }
    return;
  }
  const __m256d v0 = broadcast_c(d0), v1 = broadcast_c(d1);
  const std::size_t stride = std::size_t{1} << t;
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t k = 0; k < stride; k += 2) {
      double* q0 = p + 2 * (base + k);
      double* q1 = p + 2 * (base + stride + k);
      _mm256_storeu_pd(q0, cmul(v0, _mm256_loadu_pd(q0)));
      _mm256_storeu_pd(q1, cmul(v1, _mm256_loadu_pd(q1)));
    }
  }
}

void a_apply_cz(c64* s, std::size_t n, unsigned qa, unsigned qb) {
  double* p = reinterpret_cast<double*>(s);
  const unsigned lo = qa < qb ? qa : qb;
  const unsigned hi = qa < qb ? qb : qa;
  const std::size_t mlo = std::size_t{1} << lo;
  const std::size_t mhi = std::size_t{1} << hi;
  const __m256d negall = _mm256_set1_pd(-0.0);
  if (lo == 0) {
    // Negate odd amplitudes inside every hi-bit block.
    const __m256d negodd = _mm256_setr_pd(0.0, 0.0, -0.0, -0.0);
    for (std::size_t base = mhi; base < n; base += 2 * mhi)
      for (std::size_t k = 0; k < mhi; k += 2) {
        double* q = p + 2 * (base + k);
        _mm256_storeu_pd(q, _mm256_xor_pd(_mm256_loadu_pd(q), negodd));
      }
    return;
  }
  // Runs where both bits are set are contiguous with length 2^lo >= 2.
  for (std::size_t bh = mhi; bh < n; bh += 2 * mhi)
    for (std::size_t bl = mlo; bl < mhi; bl += 2 * mlo)
      for (std::size_t k = 0; k < mlo; k += 2) {
        double* q = p + 2 * (bh + bl + k);
        _mm256_storeu_pd(q, _mm256_xor_pd(_mm256_loadu_pd(q), negall));
      }
}

double a_norm_sq(const c64* s, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(s);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d v = _mm256_loadu_pd(p + 2 * k);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double total = buf[0] + buf[1] + buf[2] + buf[3];
  for (; k < n; ++k) total += s[k].real() * s[k].real() + s[k].imag() * s[k].imag();
  return total;
}

void a_abs_sq(const c64* s, double* out, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(s);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d v0 = _mm256_loadu_pd(p + 2 * k);
    __m256d v1 = _mm256_loadu_pd(p + 2 * k + 4);
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    // hadd interleaves 128-bit lanes; restore ascending order.
    _mm256_storeu_pd(out + k, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; k < n; ++k) out[k] = s[k].real() * s[k].real() + s[k].imag() * s[k].imag();
}

void a_phase_mul(c64* s, const c64* ph, std::size_t n) {
  double* p = reinterpret_cast<double*>(s);
  const double* q = reinterpret_cast<const double*>(ph);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d v = _mm256_loadu_pd(p + 2 * k);
    __m256d w = _mm256_loadu_pd(q + 2 * k);
    _mm256_storeu_pd(p + 2 * k, cmul(w, v));
  }
  for (; k < n; ++k) s[k] *= ph[k];
}

double a_weighted_prob_sum(const c64* s, const double* w, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(s);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d v0 = _mm256_loadu_pd(p + 2 * k);
    __m256d v1 = _mm256_loadu_pd(p + 2 * k + 4);
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    __m256d probs = _mm256_permute4x64_pd(h, 0xD8);
    acc = _mm256_fmadd_pd(probs, _mm256_loadu_pd(w + k), acc);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double total = buf[0] + buf[1] + buf[2] + buf[3];
  for (; k < n; ++k)
    total += w[k] * (s[k].real() * s[k].real() + s[k].imag() * s[k].imag());
  return total;
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{"avx2",
                       a_apply_matrix_1q,
                       a_apply_diag_1q,
                       a_apply_cz,
                       scalar_ops().apply_matrix_2q,  // cold path, scalar shared
                       a_norm_sq,
                       a_abs_sq,
                       a_phase_mul,
                       a_weighted_prob_sum};
  return &ops;
}

}  // namespace qpubench::kernels

#endif  // QPB_HAVE_AVX2_BUILD
