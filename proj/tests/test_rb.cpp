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

#include <numeric>

#include "qpubench/bench_rb.hpp"
#include "qpubench/statevector.hpp"
#include "testutil.hpp"

using namespace qpubench;

namespace {

DeviceModel line_device(int n, double e1 = 0.0, double e2 = 0.0, double ro = 0.0) {
  return homogeneous_device(build_crystal_topology(std::vector<int>(n, 1)), e1, e2, ro, "line");
}

// Restrict a device-sized circuit to the given qubits for unitary checks.
Circuit restrict_to(const Circuit& c, const std::vector<int>& qubits) {
  std::vector<int> pos(c.num_qubits, -1);
  for (std::size_t k = 0; k < qubits.size(); ++k) pos[qubits[k]] = static_cast<int>(k);
  Circuit out(static_cast<int>(qubits.size()), c.name);
  for (auto& ins : c.instructions) {
    if (ins.kind == OpKind::MEASURE || ins.kind == OpKind::BARRIER) continue;
    Instruction copy = ins;
    for (auto& q : copy.operands) q = pos[q];
    out.instructions.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

TEST_CASE("1q RB sequences invert exactly") {
  DeviceModel dev = line_device(2);
  RbSpec spec;
  spec.targets = {{{0}}};
  spec.depths = {2, 4, 8};
  spec.circuits_per_depth = 10;
  spec.seed = 5;
  auto circuits = gen_rb_sequences(spec, dev);
  CHECK(circuits.size() == 30);
  for (auto& g : circuits) {
    Circuit local = restrict_to(g.circuit, {0});
    auto u = circuit_unitary(local);
    std::vector<c64> eye = {1, 0, 0, 1};
    CHECK(unitary_distance_up_to_phase(u, eye) < 1e-10);
  }
}

TEST_CASE("2q RB sequences invert exactly and interleaving counts CZs") {
  DeviceModel dev = line_device(2);
  RbSpec spec;
  spec.targets = {{{0, 1}}};
  spec.depths = {2, 4, 6};
  spec.circuits_per_depth = 10;
  spec.interleave_cz = true;
  spec.seed = 7;
  auto circuits = gen_rb_sequences(spec, dev);
  // both variants generated
  int plain = 0, inter = 0;
  std::vector<c64> eye4(16, 0);
  for (int i = 0; i < 4; ++i) eye4[i * 4 + i] = 1;
  for (auto& g : circuits) {
    Circuit local = restrict_to(g.circuit, {0, 1});
    CHECK(unitary_distance_up_to_phase(circuit_unitary(local), eye4) < 1e-9);
    g.interleaved ? ++inter : ++plain;
  }
  CHECK(plain == 30);
  CHECK(inter == 30);

  // the interleaved variant adds exactly `depth` CZs over the reference
  auto count_cz = [](const Circuit& c) {
    int n = 0;
    for (auto& i : c.instructions)
      if (i.kind == OpKind::CZ) ++n;
    return n;
  };
  for (auto& g : circuits) {
    if (!g.interleaved) continue;
    for (auto& ref : circuits) {
      if (ref.interleaved || ref.depth != g.depth || ref.sample != g.sample) continue;
      // same random Cliffords, so the recovery may differ in CZ count by
      // at most the 3 CZs of one Clifford
      int delta = count_cz(g.circuit) - count_cz(ref.circuit);
      CHECK(delta >= g.depth - 3);
      CHECK(delta <= g.depth + 3);
    }
  }
}

TEST_CASE("distance-two partitioning") {
  Topology path7 = build_crystal_topology(std::vector<int>(7, 1));
  SUBCASE("adjacent couplers split") {
    std::vector<RbElement> targets = {{{0, 1}}, {{1, 2}}};
    auto groups = partition_distance_groups(targets, path7);
    CHECK(groups.size() == 2);
  }
  SUBCASE("distance-two couplers also split") {
    std::vector<RbElement> targets = {{{2, 3}}, {{4, 5}}};
    auto groups = partition_distance_groups(targets, path7);
    CHECK(groups.size() == 2);  // only one idle coupler between 3 and 4
  }
  SUBCASE("pairs separated by two couplers share a group") {
    std::vector<RbElement> targets = {{{0, 1}}, {{4, 5}}};
    auto groups = partition_distance_groups(targets, path7);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].size() == 2);
  }
  SUBCASE("single pair forms one group") {
    std::vector<RbElement> targets = {{{3, 4}}};
    CHECK(partition_distance_groups(targets, path7).size() == 1);
  }
  SUBCASE("group members cover all targets") {
    std::vector<RbElement> targets;
    for (int q = 0; q < 7; ++q) targets.push_back({{q}});
    auto groups = partition_distance_groups(targets, path7);
    std::set<int> covered;
    for (auto& g : groups)
      for (int t : g) covered.insert(t);
    CHECK(covered.size() == targets.size());
    for (auto& g : groups)
      for (int a : g)
        for (int b : g)
          if (a != b) CHECK(path7.set_distance(targets[a].qubits, targets[b].qubits) >= 2);
  }
}

TEST_CASE("MRB circuits hit their targets on the ideal simulator") {
  DeviceModel dev = line_device(4);
  MrbSpec spec;
  spec.subsets = {{0, 1, 2, 3}};
  spec.depths = {0, 2, 4};
  spec.samples_per_depth = 6;
  spec.seed = 11;
  spec.shots = 256;
  auto circuits = gen_mrb_circuits(spec, dev.topology);
  CHECK(circuits.size() == 18);
  for (auto& mc : circuits) {
    Counts counts = run_noisy(mc.circuit, dev, NoiseConfig::ideal(3), 64);
    REQUIRE(counts.size() == 1);
    CHECK(counts.begin()->first == mc.target);
    CHECK(polarization_from_counts(counts, mc.target, 4) == doctest::Approx(1.0));
  }
}

TEST_CASE("MRB d=0 gives caps only with polarization 1") {
  DeviceModel dev = line_device(2);
  MrbSpec spec;
  spec.subsets = {{0, 1}};
  spec.depths = {0};
  spec.samples_per_depth = 4;
  spec.seed = 3;
  auto circuits = gen_mrb_circuits(spec, dev.topology);
  for (auto& mc : circuits) {
    CHECK(mc.cz_count == 0);
    Counts counts = run_noisy(mc.circuit, dev, NoiseConfig::ideal(1), 32);
    CHECK(counts.begin()->first == mc.target);
  }
}

TEST_CASE("MRB CZ-layer density tracks xi times the maximal matching size") {
  // path of 8 qubits: alternating maximal matchings; compare against the
  // unthinned sampler statistics
  Topology topo = build_crystal_topology(std::vector<int>(8, 1));
  MrbSpec spec;
  spec.subsets = {{0, 1, 2, 3, 4, 5, 6, 7}};
  spec.depths = {64};
  spec.samples_per_depth = 8;
  spec.cz_density = 0.5;
  spec.seed = 17;
  auto circuits = gen_mrb_circuits(spec, topo);
  double mean_cz_per_layer = 0;
  for (auto& mc : circuits) mean_cz_per_layer += static_cast<double>(mc.cz_count) / 64.0;
  mean_cz_per_layer /= circuits.size();

  // unthinned estimate of the mean maximal matching size on the same graph
  MrbSpec full = spec;
  full.cz_density = 1.0;
  full.seed = 18;
  auto full_circuits = gen_mrb_circuits(full, topo);
  double mean_matching = 0;
  for (auto& mc : full_circuits) mean_matching += static_cast<double>(mc.cz_count) / 64.0;
  mean_matching /= full_circuits.size();

  CHECK(std::abs(mean_cz_per_layer - 0.5 * mean_matching) / (0.5 * mean_matching) < 0.1);
}

TEST_CASE("ideal-simulator RB suite reports p = 1 and errors near 0") {
  auto dev = line_device(3);
  LocalBackend backend(dev, NoiseConfig::ideal(0));
  RbSpec spec;
  spec.targets = {{{0}}, {{1}}, {{2}}};
  spec.depths = {2, 8, 32};
  spec.circuits_per_depth = 10;
  spec.shots = 256;
  spec.seed = 23;
  RbSuiteResult res = run_rb_suite(backend, spec);
  REQUIRE(res.elements.size() == 3);
  for (auto& e : res.elements) {
    CHECK(e.fit.p > 1.0 - 3 * std::max(e.fit.stderr_p, 1e-6));
    CHECK(std::abs(e.metric) < 1e-3);
  }
  CHECK(res.gbar_1q == doctest::Approx(20.0 / 24.0));
  CHECK(res.report.benchmark == "rb");
}

TEST_CASE("closed-loop 1q RB recovers the injected error on one qubit") {
  // inflated rate keeps the fast unit check well above shot noise;
  // the production-rate loop lives in the acceptance suite
  auto dev = line_device(2, 5e-3, 0.0, 0.0);
  LocalBackend backend(dev, NoiseConfig::twin(0));
  RbSpec spec;
  spec.targets = {{{0}}};
  spec.depths = {2, 8, 32, 64, 128};
  spec.circuits_per_depth = 12;
  spec.shots = 512;
  spec.seed = 31;
  RbSuiteResult res = run_rb_suite(backend, spec);
  double r_native = res.elements[0].metric;
  CHECK(std::abs(r_native - 5e-3) / 5e-3 < 0.2);
}

TEST_CASE("simultaneous groups produce the same statistics as separate runs") {
  auto dev = line_device(7, 2e-3, 0.0, 0.0);
  LocalBackend backend(dev, NoiseConfig::twin(0));
  RbSpec spec;
  spec.targets = {{{0}}, {{4}}};
  spec.groups = {{0, 1}};  // distance >= 2 on the path
  spec.depths = {2, 8, 32};
  spec.circuits_per_depth = 10;
  spec.shots = 512;
  spec.seed = 37;
  RbSuiteResult grouped = run_rb_suite(backend, spec);
  REQUIRE(grouped.elements.size() == 2);
  for (auto& e : grouped.elements) CHECK(std::abs(e.metric - 2e-3) / 2e-3 < 0.5);
}

TEST_CASE("crosstalk estimator trivial cases") {
  auto dev = line_device(2);
  LocalBackend backend(dev, NoiseConfig::ideal(0));
  CrosstalkOptions opts;
  opts.shots = 2000;
  SUBCASE("i == j gives 0 dB") {
    auto est = estimate_drive_crosstalk(backend, 0, 0, opts);
    CHECK(est.db == 0.0);
  }
  SUBCASE("zero ratio hits the floor") {
    auto est = estimate_drive_crosstalk(backend, 0, 1, opts);
    CHECK(est.at_floor);
    CHECK(est.db == kCrosstalkFloorDb);
  }
}

TEST_CASE("crosstalk estimator recovers a configured ratio") {
  auto dev = line_device(2);
  dev.drive_xtalk(1, 0) = std::pow(10.0, -48.0 / 20.0);
  NoiseConfig noise = NoiseConfig::ideal(0);
  noise.drive_crosstalk = true;
  LocalBackend backend(dev, noise);
  CrosstalkOptions opts;
  opts.shots = 20000;
  opts.seed = 3;
  auto est = estimate_drive_crosstalk(backend, 0, 1, opts);
  CHECK(!est.at_floor);
  CHECK(std::abs(est.db - (-48.0)) < 0.5);
}
