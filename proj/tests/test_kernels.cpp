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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qpubench/kernels.hpp"
#include "testutil.hpp"

using namespace qpubench;
using kernels::Ops;

namespace {

std::vector<c64> random_state(int n_qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<c64> s(std::size_t{1} << n_qubits);
  double norm = 0;
  for (auto& z : s) {
    z = c64(g(rng), g(rng));
    norm += std::norm(z);
  }
  norm = std::sqrt(norm);
  for (auto& z : s) z /= norm;
  return s;
}

double max_abs_diff(const std::vector<c64>& a, const std::vector<c64>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("scalar kernels match the naive oracle") {
  std::mt19937_64 rng(1);
  const Ops& ops = kernels::scalar_ops();
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      auto s = random_state(n, rng());
      auto oracle = s;
      Mat2 u = testing::random_su2(rng);
      int t = static_cast<int>(rng() % n);
      ops.apply_matrix_1q(s.data(), s.size(), t, u.data());
      testing::naive_apply(oracle, {t}, {u.begin(), u.end()});
      CHECK(max_abs_diff(s, oracle) < 1e-13);

      if (n >= 2) {
        int a = static_cast<int>(rng() % n);
        int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
        ops.apply_cz(s.data(), s.size(), a, b);
        Mat4 czm = cz_matrix();
        testing::naive_apply(oracle, {a, b}, {czm.begin(), czm.end()});
        CHECK(max_abs_diff(s, oracle) < 1e-13);

        Mat4 u4 = testing::random_su4(rng);
        ops.apply_matrix_2q(s.data(), s.size(), a, b, u4.data());
        testing::naive_apply(oracle, {a, b}, {u4.begin(), u4.end()});
        CHECK(max_abs_diff(s, oracle) < 1e-12);
      }
    }
  }
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const Ops* avx = kernels::avx2_ops();
  if (!avx) {
    MESSAGE("AVX2 unavailable; skipping equivalence checks");
    return;
  }
  const Ops& ref = kernels::scalar_ops();
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 8; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      auto s1 = random_state(n, 1000 * n + rep);
      auto s2 = s1;

      Mat2 u = testing::random_su2(rng);
      int t = static_cast<int>(rng() % n);
      ref.apply_matrix_1q(s1.data(), s1.size(), t, u.data());
      avx->apply_matrix_1q(s2.data(), s2.size(), t, u.data());
      CHECK(max_abs_diff(s1, s2) < 1e-14);

      c64 d0 = std::exp(c64(0, 0.3 * rep)), d1 = std::exp(c64(0, -1.1 * rep));
      int t2 = static_cast<int>(rng() % n);
      ref.apply_diag_1q(s1.data(), s1.size(), t2, d0, d1);
      avx->apply_diag_1q(s2.data(), s2.size(), t2, d0, d1);
      CHECK(max_abs_diff(s1, s2) < 1e-14);

      if (n >= 2) {
        int a = static_cast<int>(rng() % n);
        int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
        ref.apply_cz(s1.data(), s1.size(), a, b);
        avx->apply_cz(s2.data(), s2.size(), a, b);
        // Sign flips are exact in both backends.
        CHECK(max_abs_diff(s1, s2) == 0.0);
      }

      CHECK(ref.norm_sq(s1.data(), s1.size()) ==
            doctest::Approx(avx->norm_sq(s2.data(), s2.size())).epsilon(1e-13));

      std::vector<double> p1(s1.size()), p2(s2.size());
      ref.abs_sq(s1.data(), p1.data(), s1.size());
      avx->abs_sq(s2.data(), p2.data(), s2.size());
      for (std::size_t i = 0; i < p1.size(); ++i)
        CHECK(p1[i] == doctest::Approx(p2[i]).epsilon(1e-13));

      auto ph = random_state(n, 77 * n + rep);
      auto s1b = s1;
      auto s2b = s2;
      ref.phase_mul(s1b.data(), ph.data(), s1b.size());
      avx->phase_mul(s2b.data(), ph.data(), s2b.size());
      CHECK(max_abs_diff(s1b, s2b) < 1e-14);

      std::vector<double> w(s1.size());
      std::mt19937_64 wr(rep);
      std::uniform_real_distribution<double> uw(0.0, 3.0);
      for (auto& x : w) x = uw(wr);
      CHECK(ref.weighted_prob_sum(s1.data(), w.data(), s1.size()) ==
            doctest::Approx(avx->weighted_prob_sum(s2.data(), w.data(), s2.size()))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("backend forcing hooks work") {
  kernels::force_backend("scalar");
  CHECK(std::string(kernels::active_ops().name) == "scalar");
  kernels::force_backend("");
  if (kernels::avx2_ops()) {
    kernels::force_backend("avx2");
    CHECK(std::string(kernels::active_ops().name) == "avx2");
    kernels::force_backend("");
  }
  CHECK_THROWS_AS(kernels::force_backend("avx512"), InvalidArgument);
}
