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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpubench/circuit.hpp"
#include "qpubench/sim.hpp"

namespace qpubench {

struct DecayPoint {
  double depth;
  double mean;
  double stderr_ = 0.0;  // <= 0 means unweighted
};

/// Parameters of y(d) = A * p^d + B with uncertainties.
struct DecayFit {
  double A = 0, p = 0, B = 0;
  double stderr_A = 0, stderr_p = 0, stderr_B = 0;
  double r_squared = 0;
  double p_raw = 0;        // before clamping into (0, 1]
  bool converged = false;
  bool unphysical = false;  // p_raw above 1 beyond 3 sigma
};

/// Weighted damped nonlinear least squares with log-linearized initial
/// guess; B can be pinned (the RB floor 1/2^n). Deterministic.
DecayFit fit_exponential_decay(const std::vector<DecayPoint>& points,
                               std::optional<double> fix_B = std::nullopt);

enum class ErrorMode { Rb, Irb, PerLayerPerQubit };

struct ErrorExtras {
  std::optional<double> p_reference;              // IRB reference decay
  std::optional<double> native_gates_per_clifford;  // gbar
  std::optional<double> r_omega;                  // direct layer error input
};

struct ErrorEstimate {
  double r = 0;
  std::optional<double> r_native;
  bool warning = false;
  std::string note;
};

/// RB-family decay-to-error conversions:
///   rb:  r = (1-p)(2^n-1)/2^n, optionally r_native = 1-(1-r)^(1/gbar)
///   irb: r = (2^n-1)/2^n (1 - p_int/p_ref)
///   per_layer_per_qubit: r = 1 - (1 - r_omega)^(1/n)
ErrorEstimate decay_to_errors(const DecayFit& fit, int n_qubits, ErrorMode mode,
                              const ErrorExtras& extras = {});

/// Effective polarization from Hamming-distance fractions h_k:
/// S = 4^n/(4^n-1) * (sum_k (-1/2)^k h_k - 4^-n).
double polarization_from_counts(const Counts& counts, const std::string& target, int n);

struct HeavyOutputResult {
  double mean = 0;
  double sigma = 0;
  bool pass = false;
};

/// Pass iff mean - 2*sigma > threshold with sigma = sqrt(mean(1-mean)/n).
HeavyOutputResult heavy_output_test(const std::vector<double>& hops,
                                    double threshold = 2.0 / 3.0);

/// Per-qubit 2x2 column-stochastic confusion matrices,
/// m[q][i][j] = P(read i | prepared j).
struct ConfusionModel {
  std::vector<std::array<double, 4>> m;  // row-major per qubit

  double p(int q, int read, int prepared) const { return m[q][read * 2 + prepared]; }
  void validate() const;
  static ConfusionModel identity(int n);
  static ConfusionModel symmetric(int n, double eps);
};

/// Marginal estimates from all-zeros / all-ones calibration counts.
ConfusionModel confusion_from_calibration(const Counts& all0, const Counts& all1, int n);

using QuasiDistribution = std::map<std::string, double>;

struct RemResult {
  QuasiDistribution dist;   // sums to 1; entries may be negative
  bool mitigated = false;   // false when the solve failed and raw was returned
  std::string warning;
};

/// Readout-error mitigation on the observed-bitstring subspace: solves
/// (tensor confusion restricted to observed keys) x = p_observed.
/// Dense solve up to `dense_limit` states, fixed-point iteration beyond.
RemResult rem_apply(const ConfusionModel& model, const Counts& raw,
                    std::size_t dense_limit = 4096);

double quasi_expectation(const QuasiDistribution& dist,
                         const std::function<double(const std::string&)>& f);

/// Calibration circuits measuring `qubits` of an n-qubit register:
/// first prepares all-|0>, second all-|1>.
std::pair<Circuit, Circuit> rem_calibration_circuits(int num_qubits,
                                                     const std::vector<int>& qubits);

struct Ci95 {
  double lo = 0, hi = 0;
};

/// Percentile bootstrap over samples: resample with replacement, evaluate
/// the statistic, take the [2.5%, 97.5%] percentiles. Seeded.
Ci95 bootstrap_ci(const std::vector<double>& samples,
                  const std::function<double(const std::vector<double>&)>& statistic,
                  int resamples = 1000, std::uint64_t seed = 0);

}  // namespace qpubench
