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

#include <nlohmann/json.hpp>

#include "qpubench/device.hpp"
#include "qpubench/gates.hpp"
#include "qpubench/schedule.hpp"
#include "qpubench/statevector.hpp"
#include "testutil.hpp"

using namespace qpubench;

namespace {

// Unitary of `c` computed entirely with the naive oracle evolver.
std::vector<c64> oracle_unitary(const Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.num_qubits;
  std::vector<c64> u(dim * dim);
  for (std::size_t col = 0; col < dim; ++col) {
    testing::State s(dim, c64(0));
    s[col] = 1.0;
    for (auto& ins : c.instructions)
      if (ins.kind != OpKind::MEASURE) testing::naive_apply_instruction(s, ins);
    for (std::size_t row = 0; row < dim; ++row) u[row * dim + col] = s[row];
  }
  return u;
}

}  // namespace

TEST_CASE("circuit validation catches malformed programs") {
  Circuit c(2);
  c.prx(0, 1.0, 0.5).cz(0, 1).measure(0);
  CHECK_NOTHROW(c.validate());
  Circuit bad1(2);
  bad1.cz(0, 0);
  CHECK_THROWS_AS(bad1.validate(), InvalidArgument);
  Circuit bad2(2);
  bad2.measure(0).prx(0, 1.0, 0.0);
  CHECK_THROWS_AS(bad2.validate(), InvalidArgument);
  Circuit bad3(1);
  bad3.prx(0, std::nan(""), 0.0);
  CHECK_THROWS_AS(bad3.validate(), InvalidArgument);
  Circuit bad4(1);
  bad4.cz(0, 1);
  CHECK_THROWS_AS(bad4.validate(), InvalidArgument);
}

TEST_CASE("circuit JSON round-trips") {
  Circuit c(3, "demo");
  c.prx(0, 0.3, 1.2).rz(1, -0.7).cz(0, 2).barrier().measure_all();
  nlohmann::json j = c;
  auto c2 = j.get<Circuit>();
  CHECK(c2.name == "demo");
  CHECK(c2.num_qubits == 3);
  REQUIRE(c2.instructions.size() == c.instructions.size());
  CHECK(c2.instructions[0].params == c.instructions[0].params);
  CHECK(c2.instructions[2].operands == c.instructions[2].operands);
}

TEST_CASE("PRX matrix special cases") {
  // PRX(pi, 0) is X up to global phase.
  CHECK(mat2_distance_up_to_phase(prx_matrix(M_PI, 0.0), x_matrix()) < 1e-12);
  // PRX(pi/2, pi/2) is a Y rotation by pi/2.
  Mat2 ry = prx_matrix(M_PI / 2, M_PI / 2);
  CHECK(std::abs(ry[0] - c64(std::cos(M_PI / 4))) < 1e-12);
  CHECK(std::abs(ry[1] - c64(-std::sin(M_PI / 4))) < 1e-12);
}

TEST_CASE("1q decomposition reproduces random unitaries") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    Mat2 u = testing::random_su2(rng);
    Native1q n = decompose_1q(u);
    Mat2 rebuilt = mat2_mul(prx_matrix(n.theta, n.phase), rz_matrix(n.rz));
    CHECK(mat2_distance_up_to_phase(rebuilt, u) < 1e-12);
  }
  // identity -> empty sequence
  Native1q id = decompose_1q(mat2_identity());
  CHECK(id.theta == 0.0);
  CHECK(id.rz == 0.0);
  // diagonal -> pure rz
  Native1q dz = decompose_1q(rz_matrix(1.234));
  CHECK(dz.theta == 0.0);
  CHECK(dz.rz == doctest::Approx(1.234));
  // theta == pi branch
  Native1q nx = decompose_1q(x_matrix());
  CHECK(nx.theta == doctest::Approx(M_PI));
  Mat2 rebuilt = mat2_mul(prx_matrix(nx.theta, nx.phase), rz_matrix(nx.rz));
  CHECK(mat2_distance_up_to_phase(rebuilt, x_matrix()) < 1e-12);
}

TEST_CASE("decompose_to_native lowers the extended set faithfully") {
  std::mt19937_64 rng(6);
  SUBCASE("single-qubit unitaries become at most one PRX") {
    for (int rep = 0; rep < 100; ++rep) {
      Circuit c(1);
      c.u1q(0, testing::random_su2(rng));
      Circuit nat = decompose_to_native(c);
      CHECK(nat.is_native());
      int prx_count = 0;
      for (auto& ins : nat.instructions)
        if (ins.kind == OpKind::PRX) ++prx_count;
      CHECK(prx_count <= 1);
      CHECK(unitary_distance_up_to_phase(oracle_unitary(nat), oracle_unitary(c)) < 1e-12);
    }
  }
  SUBCASE("RZ stays virtual and identity vanishes") {
    Circuit c(1);
    c.rz(0, 0.77);
    Circuit nat = decompose_to_native(c);
    for (auto& ins : nat.instructions) CHECK(ins.kind == OpKind::RZ);
    Circuit ident(1);
    ident.u1q(0, mat2_identity());
    CHECK(decompose_to_native(ident).instructions.empty());
  }
  SUBCASE("CNOT becomes PRX-CZ-PRX") {
    Circuit c(2);
    c.cnot(0, 1);
    Circuit nat = decompose_to_native(c);
    int czs = 0, prxs = 0;
    for (auto& ins : nat.instructions) {
      if (ins.kind == OpKind::CZ) ++czs;
      if (ins.kind == OpKind::PRX) ++prxs;
    }
    CHECK(czs == 1);
    CHECK(prxs == 2);
    CHECK(unitary_distance_up_to_phase(oracle_unitary(nat), oracle_unitary(c)) < 1e-12);
  }
  SUBCASE("H, X, SWAP and mixed circuits") {
    Circuit c(3);
    c.h(0).x(1).swap_gate(0, 2).cnot(2, 1).h(2);
    Circuit nat = decompose_to_native(c);
    CHECK(nat.is_native());
    CHECK(unitary_distance_up_to_phase(oracle_unitary(nat), oracle_unitary(c)) < 1e-12);
  }
}

TEST_CASE("kak decomposition round-trips Haar SU(4)") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    Mat4 u = testing::random_su4(rng);
    KakDecomposition kd = kak_decompose(u);
    Mat4 mid = canonical_gate_matrix(kd.k);
    Mat4 rebuilt = mat4_mul(kron_le(kd.l0, kd.l1), mat4_mul(mid, kron_le(kd.r0, kd.r1)));
    CHECK(mat4_distance_up_to_phase(rebuilt, u) < 1e-9);
  }
}

TEST_CASE("kak handles Clifford corner cases") {
  for (const Mat4& u : {cz_matrix(), cnot_matrix(), swap_matrix(), mat4_identity(),
                        kron_le(h_matrix(), s_matrix())}) {
    KakDecomposition kd = kak_decompose(u);
    Mat4 mid = canonical_gate_matrix(kd.k);
    Mat4 rebuilt = mat4_mul(kron_le(kd.l0, kd.l1), mat4_mul(mid, kron_le(kd.r0, kd.r1)));
    CHECK(mat4_distance_up_to_phase(rebuilt, u) < 1e-9);
  }
}

TEST_CASE("two-qubit synthesis emits native circuits matching the unitary") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    Mat4 u = testing::random_su4(rng);
    Circuit c(2);
    c.u2q(0, 1, u);
    Circuit nat = decompose_to_native(c);
    CHECK(nat.is_native());
    CHECK(unitary_distance_up_to_phase(oracle_unitary(nat), oracle_unitary(c)) < 1e-9);
    int czs = 0;
    for (auto& ins : nat.instructions)
      if (ins.kind == OpKind::CZ) ++czs;
    CHECK(czs <= 4);
  }
  // reversed operand order exercises the (hi, lo) path
  Mat4 u = testing::random_su4(rng);
  Circuit c(3);
  c.u2q(2, 0, u);
  Circuit nat = decompose_to_native(c);
  CHECK(unitary_distance_up_to_phase(oracle_unitary(nat), oracle_unitary(c)) < 1e-9);
}

TEST_CASE("circuit_unitary matches definitions") {
  Circuit empty(2);
  auto u = circuit_unitary(empty);
  for (int r = 0; r < 4; ++r)
    for (int cidx = 0; cidx < 4; ++cidx)
      CHECK(std::abs(u[r * 4 + cidx] - (r == cidx ? c64(1) : c64(0))) < 1e-15);

  Circuit czc(2);
  czc.cz(0, 1);
  auto ucz = circuit_unitary(czc);
  CHECK(std::abs(ucz[0] - c64(1)) < 1e-15);
  CHECK(std::abs(ucz[5] - c64(1)) < 1e-15);
  CHECK(std::abs(ucz[10] - c64(1)) < 1e-15);
  CHECK(std::abs(ucz[15] - c64(-1)) < 1e-15);

  Circuit px(1);
  px.prx(0, M_PI, 0.0);
  CHECK(unitary_distance_up_to_phase(circuit_unitary(px),
                                     {0, 1, 1, 0}) < 1e-12);

  Circuit meas(1);
  meas.measure(0);
  CHECK_THROWS_AS(circuit_unitary(meas), InvalidArgument);
  Circuit big(13);
  CHECK_THROWS_AS(circuit_unitary(big), InvalidArgument);
}

TEST_CASE("circuit_unitary agrees with the naive oracle on random native circuits") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int rep = 0; rep < 25; ++rep) {
    int n = 2 + static_cast<int>(rng() % 3);
    Circuit c(n);
    for (int g = 0; g < 12; ++g) {
      switch (rng() % 3) {
        case 0:
          c.prx(static_cast<int>(rng() % n), ang(rng), ang(rng));
          break;
        case 1:
          c.rz(static_cast<int>(rng() % n), ang(rng));
          break;
        default: {
          int a = static_cast<int>(rng() % n);
          int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
          c.cz(a, b);
        }
      }
    }
    CHECK(unitary_distance_up_to_phase(circuit_unitary(c), oracle_unitary(c)) < 1e-11);
  }
}

TEST_CASE("collapse_1q_runs compresses runs without changing the unitary") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int rep = 0; rep < 20; ++rep) {
    Circuit c(2);
    for (int g = 0; g < 10; ++g) {
      c.prx(0, ang(rng), ang(rng));
      c.rz(1, ang(rng));
      c.prx(1, ang(rng), ang(rng));
    }
    c.cz(0, 1);
    c.prx(0, ang(rng), ang(rng));
    Circuit out = collapse_1q_runs(c);
    // per qubit, before the CZ: at most RZ+PRX
    int count_before_cz = 0;
    for (auto& ins : out.instructions) {
      if (ins.kind == OpKind::CZ) break;
      ++count_before_cz;
    }
    CHECK(count_before_cz <= 4);
    CHECK(unitary_distance_up_to_phase(oracle_unitary(out), oracle_unitary(c)) < 1e-11);
  }
}

TEST_CASE("schedule_asap start times and idle windows") {
  DeviceModel d = garnet_median_device();
  SUBCASE("single PRX starts at 0") {
    Circuit c(20);
    c.prx(0, 1.0, 0.0);
    auto s = schedule_asap(c, d);
    CHECK(s.start_times[0] == 0.0);
  }
  SUBCASE("sequential PRX on one qubit stack at dur_prx") {
    Circuit c(20);
    c.prx(0, 1.0, 0.0).prx(0, 1.0, 0.0);
    auto s = schedule_asap(c, d);
    CHECK(s.start_times[1] == doctest::Approx(20e-9));
    CHECK(s.idle_windows.empty());
  }
  SUBCASE("disjoint PRX run in parallel") {
    Circuit c(20);
    c.prx(0, 1.0, 0.0).prx(1, 1.0, 0.0);
    auto s = schedule_asap(c, d);
    CHECK(s.start_times[0] == 0.0);
    CHECK(s.start_times[1] == 0.0);
  }
  SUBCASE("CZ waits for both operands and opens an idle window") {
    Circuit c(20);
    c.prx(0, 1.0, 0.0).prx(0, 1.0, 0.0).prx(1, 1.0, 0.0).cz(0, 1);
    auto s = schedule_asap(c, d);
    CHECK(s.start_times[3] == doctest::Approx(40e-9));
    REQUIRE(s.idle_windows.size() == 1);
    CHECK(s.idle_windows[0].qubit == 1);
    CHECK(s.idle_windows[0].duration == doctest::Approx(20e-9));
  }
  SUBCASE("RZ is free") {
    Circuit c(20);
    c.prx(0, 1.0, 0.0).rz(0, 0.3).prx(0, 1.0, 0.0);
    auto s = schedule_asap(c, d);
    CHECK(s.start_times[2] == doctest::Approx(20e-9));
  }
  SUBCASE("barrier synchronizes") {
    Circuit c(20);
    c.prx(0, 1.0, 0.0).barrier({0, 1}).prx(1, 1.0, 0.0);
    auto s = schedule_asap(c, d);
    CHECK(s.start_times[2] == doctest::Approx(20e-9));
    REQUIRE(s.idle_windows.size() == 0);  // leading idleness is not a window
  }
  SUBCASE("non-native circuits are rejected") {
    Circuit c(2);
    c.h(0);
    CHECK_THROWS_AS(schedule_asap(c, d), InvalidArgument);
  }
}
