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

#include <cmath>

#include "qpubench/gates.hpp"
#include "qpubench/sim.hpp"
#include "qpubench/statevector.hpp"
#include "testutil.hpp"

using namespace qpubench;

namespace {

DeviceModel line_device(int n, double e1 = 0.0, double e2 = 0.0, double ro = 0.0) {
  return homogeneous_device(build_crystal_topology(std::vector<int>(n, 1)), e1, e2, ro, "line");
}

Circuit ghz_native(int n) {
  Circuit c(n, "ghz");
  c.prx(0, M_PI / 2, M_PI / 2);
  for (int q = 1; q < n; ++q) c.cnot(q - 1, q);
  c.measure_all();
  return decompose_to_native(c);
}

}  // namespace

TEST_CASE("error_to_depolarizing pins the conversion") {
  CHECK(error_to_depolarizing(9e-4, 2) == doctest::Approx(1.8e-3).epsilon(1e-12));
  CHECK(error_to_depolarizing(0.0, 2) == 0.0);
  CHECK(error_to_depolarizing(5e-3, 4) == doctest::Approx(6.6667e-3).epsilon(1e-4));
  CHECK_THROWS_AS(error_to_depolarizing(0.6, 2), InvalidArgument);
  CHECK_THROWS_AS(error_to_depolarizing(-0.1, 2), InvalidArgument);
  CHECK_THROWS_AS(error_to_depolarizing(0.1, 3), InvalidArgument);
}

TEST_CASE("noiseless bit flip is deterministic") {
  DeviceModel dev = line_device(2);
  Circuit c(2);
  c.prx(0, M_PI, 0.0).measure(0).measure(1);
  Counts counts = run_noisy(c, dev, NoiseConfig::ideal(1), 1000);
  REQUIRE(counts.size() == 1);
  CHECK(counts.at("10") == 1000);
}

TEST_CASE("noiseless GHZ sampling matches the statevector oracle") {
  DeviceModel dev = line_device(3);
  Circuit c = ghz_native(3);
  const std::uint64_t shots = 100000;
  Counts counts = run_noisy(c, dev, NoiseConfig::ideal(7), shots);
  std::uint64_t total = 0;
  for (auto& [k, v] : counts) {
    total += v;
    CHECK((k == "000" || k == "111"));
  }
  CHECK(total == shots);
  // binomial 5 sigma around 1/2
  double p = static_cast<double>(counts["000"]) / shots;
  double sigma = std::sqrt(0.25 / shots);
  CHECK(std::abs(p - 0.5) < 5 * sigma);
}

TEST_CASE("readout flips alone reproduce the injected rate") {
  DeviceModel dev = line_device(1, 0, 0, 0.03);
  Circuit c(1);
  c.measure(0);
  NoiseConfig noise;
  noise.gate_depolarizing = false;
  noise.idle_decoherence = false;
  noise.readout_flip = true;
  noise.seed = 11;
  const std::uint64_t shots = 200000;
  Counts counts = run_noisy(c, dev, noise, shots);
  double p1 = static_cast<double>(counts["1"]) / shots;
  double sigma = std::sqrt(0.03 * 0.97 / shots);
  CHECK(std::abs(p1 - 0.03) < 3 * sigma);
}

TEST_CASE("fixed seed gives bit-identical counts across runs and worker counts") {
  DeviceModel dev = line_device(5, 9e-4, 5e-3, 0.03);
  Circuit c = ghz_native(5);
  NoiseConfig noise = NoiseConfig::twin(42);
  Counts a = run_noisy(c, dev, noise, 2048);
  Counts b = run_noisy(c, dev, noise, 2048);
  CHECK(a == b);
  noise.workers = 2;
  Counts c2 = run_noisy(c, dev, noise, 2048);
  CHECK(a == c2);
  noise.workers = 7;
  Counts c7 = run_noisy(c, dev, noise, 2048);
  CHECK(a == c7);
}

TEST_CASE("depolarizing-only PRX chain decays as (1-lambda)^m") {
  // Echo pairs: PRX(pi) twice returns to |0>; depolarizing events knock the
  // trajectory off the ideal path, surviving with prob (1-lambda)^m overall
  // (up to events that happen to recombine).
  const double r = 0.02;
  DeviceModel dev = line_device(1, r, 0, 0);
  const double lam = error_to_depolarizing(r, 2);
  for (int m : {4, 16, 48}) {
    Circuit c(1);
    for (int k = 0; k < m; ++k) c.prx(0, M_PI, 0.0);
    c.measure(0);
    NoiseConfig noise;
    noise.idle_decoherence = false;
    noise.readout_flip = false;
    noise.seed = 1000 + m;
    const std::uint64_t shots = 40000;
    Counts counts = run_noisy(c, dev, noise, shots);
    double survive = static_cast<double>(counts["0"]) / shots;
    // Survival = (1-lam)^m + residual recombination mass that itself decays;
    // dominant behaviour per trajectory count: P(no event) + P(events land
    // as Z or recombine). For a Pauli channel on basis states the exact
    // survival is 1/2 + 1/2*(1 - 2*lam/2)^m (X/Y flip the bit, Z/I do not).
    double expect = 0.5 + 0.5 * std::pow(1.0 - lam, m);
    double sigma = std::sqrt(expect * (1 - expect) / shots) + 1e-9;
    CHECK(std::abs(survive - expect) < 5 * sigma);
  }
}

TEST_CASE("idle decoherence twirl matches the analytic flip probability") {
  // One PRX(pi) on q0 and a CZ forces q1 to wait; but simplest: two PRX on
  // q0 and one on q1 with a barrier alignment creates a known idle window.
  DeviceModel dev = line_device(2);
  dev.t1.assign(2, 1e-6);
  dev.t2.assign(2, 1e-6);
  Circuit c(2);
  c.prx(0, M_PI, 0.0).prx(0, M_PI, 0.0).prx(1, M_PI, 0.0).cz(0, 1);
  c.measure_all();
  // q1 idles for dur_prx = 20 ns before the CZ.
  NoiseConfig noise;
  noise.gate_depolarizing = false;
  noise.readout_flip = false;
  noise.idle_decoherence = true;
  noise.seed = 5;
  const std::uint64_t shots = 300000;
  Counts counts = run_noisy(c, dev, noise, shots);
  // q1 was flipped to |1> by PRX(pi); idle X/Y events flip it back.
  double t = 20e-9;
  double px_py = (1 - std::exp(-t / 1e-6)) / 2.0;  // p_x + p_y
  std::uint64_t q1_zero = 0;
  for (auto& [k, v] : counts)
    if (k[1] == '0') q1_zero += v;
  double p = static_cast<double>(q1_zero) / shots;
  double sigma = std::sqrt(px_py * (1 - px_py) / shots);
  CHECK(std::abs(p - px_py) < 5 * sigma);
}

TEST_CASE("drive crosstalk rotates spectators deterministically") {
  DeviceModel dev = line_device(2);
  double ratio = 0.05;
  dev.drive_xtalk(1, 0) = ratio;
  Circuit c(2);
  c.prx(0, M_PI, 0.0);
  c.measure_all();
  NoiseConfig noise;
  noise.gate_depolarizing = false;
  noise.idle_decoherence = false;
  noise.readout_flip = false;
  noise.drive_crosstalk = true;
  noise.seed = 3;
  const std::uint64_t shots = 400000;
  Counts counts = run_noisy(c, dev, noise, shots);
  std::uint64_t q1_one = 0;
  for (auto& [k, v] : counts)
    if (k[1] == '1') q1_one += v;
  double expected = std::pow(std::sin(ratio * M_PI / 2), 2);
  double p = static_cast<double>(q1_one) / shots;
  double sigma = std::sqrt(expected * (1 - expected) / shots);
  CHECK(std::abs(p - expected) < 5 * sigma);
}

TEST_CASE("statevector norm is preserved along noisy trajectories") {
  // run_noisy asserts norm preservation internally; exercise a busy circuit.
  DeviceModel dev = line_device(4, 9e-4, 5e-3, 0.03);
  Circuit c = ghz_native(4);
  NoiseConfig noise = NoiseConfig::twin(9);
  CHECK_NOTHROW(run_noisy(c, dev, noise, 512));
}

TEST_CASE("guards reject oversized and non-native circuits") {
  DeviceModel dev = garnet_median_device();
  Circuit big(21);
  CHECK_THROWS_AS(run_noisy(big, dev, NoiseConfig::ideal(), 1), InvalidArgument);
  Circuit nonnative(2);
  nonnative.h(0);
  CHECK_THROWS_AS(run_noisy(nonnative, dev, NoiseConfig::ideal(), 1), InvalidArgument);
  Circuit offcoupler(20);
  offcoupler.cz(0, 19);
  CHECK_THROWS_AS(run_noisy(offcoupler, dev, NoiseConfig::ideal(), 1), InvalidArgument);
  Circuit fine(2);
  fine.measure(0);
  CHECK_THROWS_AS(run_noisy(fine, dev, NoiseConfig::ideal(), 0), InvalidArgument);
}

TEST_CASE("counts cover only measured qubits in ascending order") {
  DeviceModel dev = garnet_median_device();
  Circuit c(20);
  c.prx(7, M_PI, 0.0);
  c.measure(7).measure(3);
  Counts counts = run_noisy(c, dev, NoiseConfig::ideal(1), 100);
  REQUIRE(counts.size() == 1);
  // ascending order: qubit 3 first, qubit 7 second
  CHECK(counts.begin()->first == "01");
}
