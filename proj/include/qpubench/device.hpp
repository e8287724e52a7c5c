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

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

#include "qpubench/topology.hpp"

namespace qpubench {

/// Per-qubit readout error pair.
struct ReadoutError {
  double eps01 = 0.0;  // P(read 1 | prepared 0)
  double eps10 = 0.0;  // P(read 0 | prepared 1)
};

/// Square sensitivity-ratio matrix with unit diagonal. Row i, column j is
/// the normalized response of element i to the control of element j.
struct SensitivityMatrix {
  int n = 0;
  std::vector<double> a;  // row-major, n*n

  static SensitivityMatrix identity(int n);
  /// Unit diagonal, `ratio` on all off-diagonal entries.
  static SensitivityMatrix uniform_off_diagonal(int n, double ratio);

  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Processor ground truth for the digital twin: topology plus per-element
/// error, timing and crosstalk parameters. Immutable after construction.
struct DeviceModel {
  std::string name;
  Topology topology;
  std::vector<double> err_1q;        // per-qubit average 1Q-gate infidelity
  std::vector<double> err_cz;        // per-coupler average CZ infidelity
  std::vector<ReadoutError> ro_err;  // per-qubit
  std::vector<double> t1;            // seconds
  std::vector<double> t2;            // seconds
  double dur_prx = 20e-9;
  double dur_cz = 30e-9;
  double dur_ro = 1e-6;
  SensitivityMatrix drive_xtalk;
  SensitivityMatrix flux_xtalk;

  int num_qubits() const { return topology.num_qubits(); }
  double cz_error(int a, int b) const;
  int coupler_index(int a, int b) const;  // -1 when absent

  /// Throws InvalidArgument on violated invariants: rates in [0,1),
  /// t2 <= 2*t1, positive durations, unit-diagonal crosstalk with
  /// off-diagonal magnitudes < 1.
  void validate() const;
};

/// The homogeneous median-parameter model of the 20-qubit reference device.
DeviceModel garnet_median_device();
/// garnet-median plus uniform off-diagonal crosstalk at the median levels
/// (drive -48 dB, flux -70 dB).
DeviceModel garnet_xtalk_device();

/// Builds a homogeneous device over an arbitrary topology using the
/// garnet-median rates; used for synthetic test devices.
DeviceModel homogeneous_device(Topology topo, double err_1q, double err_cz, double ro_eps,
                               std::string name = "custom");

DeviceModel load_device_model(const std::string& path_or_preset);

/// Crosstalk in decibels, 20*log10(|M[i][j]| / |M[j][j]|).
/// Returns -infinity when the off-diagonal entry is exactly zero.
double crosstalk_db(const SensitivityMatrix& m, int i, int j);

/// Sentinel floor used when a crosstalk ratio is unresolvable.
inline constexpr double kCrosstalkFloorDb = -80.0;

/// Empirical distribution summary of one scalar metric across elements.
struct MetricSummary {
  std::vector<double> values;                    // as supplied
  double median = 0.0;                           // midpoint-interpolated
  std::vector<std::pair<double, double>> cdf;    // sorted (value, cum. fraction)
};

/// Deterministic empirical CDF with midpoint-interpolated median.
MetricSummary metric_cdf(const std::vector<double>& samples);

void to_json(nlohmann::json& j, const DeviceModel& d);
void from_json(const nlohmann::json& j, DeviceModel& d);
void to_json(nlohmann::json& j, const MetricSummary& m);

}  // namespace qpubench
