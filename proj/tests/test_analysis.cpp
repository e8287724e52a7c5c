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
#include <random>

#include "qpubench/analysis.hpp"

using namespace qpubench;

namespace {

// Full 2^n x 2^n confusion-matrix application, the oracle REM inverts against.
std::vector<double> apply_full_confusion(const ConfusionModel& model,
                                         const std::vector<double>& ideal, int n) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> out(dim, 0.0);
  for (std::size_t read = 0; read < dim; ++read)
    for (std::size_t prep = 0; prep < dim; ++prep) {
      double v = 1.0;
      for (int q = 0; q < n; ++q) v *= model.p(q, (read >> q) & 1, (prep >> q) & 1);
      out[read] += v * ideal[prep];
    }
  return out;
}

std::string bits_of(std::size_t k, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q)
    if (k >> q & 1) s[q] = '1';
  return s;
}

}  // namespace

TEST_CASE("exact decay data is recovered to high precision") {
  std::vector<DecayPoint> pts;
  for (double d : {1, 2, 4, 8, 16, 32, 64, 128}) pts.push_back({d, 0.9 * std::pow(0.98, d) + 0.5});
  DecayFit fit = fit_exponential_decay(pts);
  CHECK(fit.converged);
  CHECK(fit.A == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(fit.p == doctest::Approx(0.98).epsilon(1e-9));
  CHECK(fit.B == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("constant data with pinned floor fits p = 1") {
  std::vector<DecayPoint> pts;
  for (double d : {1, 2, 4, 8}) pts.push_back({d, 1.0});
  DecayFit fit = fit_exponential_decay(pts, 0.0);
  CHECK(fit.p == doctest::Approx(1.0));
  CHECK(fit.A == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(!fit.unphysical);
}

TEST_CASE("noisy synthetic decays land within 2 stderr") {
  std::mt19937_64 rng(31);
  const double true_p = 0.95, true_a = 0.5, true_b = 0.5;
  const int shots = 1024, circuits = 30;
  int hits = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    std::vector<DecayPoint> pts;
    for (double d : {1, 2, 4, 8, 16, 32, 64}) {
      double mean_true = true_a * std::pow(true_p, d) + true_b;
      double acc = 0;
      for (int c = 0; c < circuits; ++c) {
        std::binomial_distribution<int> bin(shots, mean_true);
        acc += static_cast<double>(bin(rng)) / shots;
      }
      double mean = acc / circuits;
      double sigma = std::sqrt(mean_true * (1 - mean_true) / (shots * circuits));
      pts.push_back({d, mean, sigma});
    }
    DecayFit fit = fit_exponential_decay(pts, 0.5);
    if (std::abs(fit.p - true_p) <= 2.0 * fit.stderr_p) ++hits;
  }
  // ~95% coverage per trial; 20 trials should rarely miss more than 4
  CHECK(hits >= 16);
}

TEST_CASE("error conversions match their closed forms") {
  DecayFit fit;
  fit.p = 0.9982;
  ErrorEstimate rb = decay_to_errors(fit, 1, ErrorMode::Rb);
  CHECK(rb.r == doctest::Approx(9.0e-4).epsilon(1e-10));

  ErrorExtras extras;
  extras.native_gates_per_clifford = 5.0 / 6.0;
  ErrorEstimate rbn = decay_to_errors(fit, 1, ErrorMode::Rb, extras);
  CHECK(*rbn.r_native == doctest::Approx(1.0 - std::pow(1.0 - 9.0e-4, 6.0 / 5.0)).epsilon(1e-9));

  DecayFit fi;
  fi.p = 0.993333;
  ErrorExtras irb_extras;
  irb_extras.p_reference = 1.0;
  ErrorEstimate irb = decay_to_errors(fi, 2, ErrorMode::Irb, irb_extras);
  CHECK(irb.r == doctest::Approx((3.0 / 4.0) * (1.0 - 0.993333)).epsilon(1e-9));
  CHECK(irb.r == doctest::Approx(5.0e-3).epsilon(1e-3));
  CHECK(!irb.warning);

  irb_extras.p_reference = 0.99;
  ErrorEstimate neg = decay_to_errors(fi, 2, ErrorMode::Irb, irb_extras);
  CHECK(neg.warning);
  CHECK(neg.r < 0);

  DecayFit fp;
  fp.p = 1.0;
  ErrorExtras pext;
  pext.r_omega = 0.02;
  ErrorEstimate per = decay_to_errors(fp, 2, ErrorMode::PerLayerPerQubit, pext);
  CHECK(per.r == doctest::Approx(0.0100505).epsilon(1e-4));
}

TEST_CASE("polarization limit cases") {
  Counts all_target{{"010", 500}};
  CHECK(polarization_from_counts(all_target, "010", 3) == doctest::Approx(1.0));

  // uniform distribution -> 0 by the binomial identity
  Counts uniform;
  for (std::size_t k = 0; k < 8; ++k) uniform[bits_of(k, 3)] = 125;
  CHECK(polarization_from_counts(uniform, "011", 3) == doctest::Approx(0.0).epsilon(1e-12));

  Counts mix{{"0", 750}, {"1", 250}};
  CHECK(polarization_from_counts(mix, "0", 1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(polarization_from_counts(mix, "00", 2), InvalidArgument);
}

TEST_CASE("polarization is invariant under joint qubit relabeling") {
  std::mt19937_64 rng(5);
  Counts counts;
  for (std::size_t k = 0; k < 16; ++k) counts[bits_of(k, 4)] = rng() % 100 + 1;
  std::string target = "0110";
  double base = polarization_from_counts(counts, target, 4);
  // reverse-order relabeling
  Counts relabeled;
  for (auto& [k, v] : counts) relabeled[std::string(k.rbegin(), k.rend())] = v;
  std::string rtarget(target.rbegin(), target.rend());
  CHECK(polarization_from_counts(relabeled, rtarget, 4) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("heavy output test thresholds") {
  std::vector<double> good(100, 0.85);
  auto res = heavy_output_test(good);
  CHECK(res.pass);
  CHECK(res.mean == doctest::Approx(0.85));

  std::vector<double> bad(100, 0.60);
  CHECK(!heavy_output_test(bad).pass);

  std::vector<double> marginal(10, 0.67);
  CHECK(!heavy_output_test(marginal).pass);  // CI straddles 2/3

  std::vector<double> half(50, 0.5);
  CHECK(!heavy_output_test(half).pass);
  CHECK_THROWS_AS(heavy_output_test({0.9}), InvalidArgument);
  CHECK_THROWS_AS(heavy_output_test({0.9, 1.2}), InvalidArgument);
}

TEST_CASE("REM identity and symmetric fixed points") {
  ConfusionModel id = ConfusionModel::identity(2);
  Counts raw{{"00", 400}, {"11", 600}};
  RemResult res = rem_apply(id, raw);
  CHECK(res.mitigated);
  CHECK(res.dist.at("00") == doctest::Approx(0.4));
  CHECK(res.dist.at("11") == doctest::Approx(0.6));

  // symmetric errors leave P(1) = 0.5 fixed
  ConfusionModel sym = ConfusionModel::symmetric(1, 0.03);
  Counts half{{"0", 5000}, {"1", 5000}};
  RemResult r2 = rem_apply(sym, half);
  CHECK(r2.dist.at("1") == doctest::Approx(0.5).epsilon(1e-12));

  // exact observed distribution from a pure |0> under eps=0.03
  Counts obs{{"0", 9700}, {"1", 300}};
  RemResult r3 = rem_apply(sym, obs);
  CHECK(r3.dist.at("0") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r3.dist.at("1") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("REM inverts exact confused distributions against the tensor oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 3; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      ConfusionModel model;
      model.m.resize(n);
      for (int q = 0; q < n; ++q) {
        double e01 = 0.01 + 0.05 * u(rng);
        double e10 = 0.01 + 0.05 * u(rng);
        model.m[q] = {1 - e01, e10, e01, 1 - e10};
      }
      const std::size_t dim = std::size_t{1} << n;
      std::vector<double> ideal(dim, 0.0);
      double norm = 0;
      for (auto& v : ideal) {
        v = u(rng);
        norm += v;
      }
      for (auto& v : ideal) v /= norm;
      std::vector<double> observed = apply_full_confusion(model, ideal, n);
      // use exact rational-ish counts: scale to large integer counts exactly
      Counts raw;
      const double scale = 1e12;
      for (std::size_t k = 0; k < dim; ++k)
        raw[bits_of(k, n)] = static_cast<std::uint64_t>(observed[k] * scale + 0.5);
      RemResult res = rem_apply(model, raw);
      REQUIRE(res.mitigated);
      for (std::size_t k = 0; k < dim; ++k)
        CHECK(res.dist.at(bits_of(k, n)) == doctest::Approx(ideal[k]).epsilon(5e-7));
    }
  }
}

TEST_CASE("REM iterative path agrees with the dense path") {
  ConfusionModel model = ConfusionModel::symmetric(3, 0.04);
  std::mt19937_64 rng(23);
  Counts raw;
  for (std::size_t k = 0; k < 8; ++k) raw[bits_of(k, 3)] = rng() % 1000 + 50;
  RemResult dense = rem_apply(model, raw, 4096);
  RemResult iter = rem_apply(model, raw, 2);  // force the iterative branch
  REQUIRE(dense.mitigated);
  for (auto& [k, v] : dense.dist) CHECK(iter.dist.at(k) == doctest::Approx(v).epsilon(1e-9));
}

TEST_CASE("confusion calibration estimates marginals") {
  Counts all0{{"00", 9400}, {"10", 300}, {"01", 250}, {"11", 50}};
  Counts all1{{"11", 9000}, {"01", 600}, {"10", 350}, {"00", 50}};
  ConfusionModel m = confusion_from_calibration(all0, all1, 2);
  CHECK(m.p(0, 1, 0) == doctest::Approx(0.035));  // eps01 qubit 0
  CHECK(m.p(1, 1, 0) == doctest::Approx(0.030));
  CHECK(m.p(0, 0, 1) == doctest::Approx(0.065));  // eps10 qubit 0: reads 0 in "00"+"01"
  CHECK(m.p(1, 0, 1) == doctest::Approx(0.040));
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("quasi expectation and bootstrap behave") {
  QuasiDistribution q{{"00", 0.6}, {"11", 0.5}, {"01", -0.1}};
  double e = quasi_expectation(q, [](const std::string& b) {
    return static_cast<double>(std::count(b.begin(), b.end(), '1'));
  });
  CHECK(e == doctest::Approx(0.5 * 2 - 0.1 * 1));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(5.0, 1.0);
  std::vector<double> xs(200);
  for (auto& x : xs) x = g(rng);
  auto mean_stat = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  };
  Ci95 ci = bootstrap_ci(xs, mean_stat, 500, 7);
  CHECK(ci.lo < 5.0);
  CHECK(ci.hi > 5.0);
  CHECK(ci.hi - ci.lo < 0.5);
  // deterministic under the same seed
  Ci95 ci2 = bootstrap_ci(xs, mean_stat, 500, 7);
  CHECK(ci.lo == ci2.lo);
  CHECK(ci.hi == ci2.hi);
}
