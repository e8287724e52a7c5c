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

#include "qpubench/device.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace qpubench {

SensitivityMatrix SensitivityMatrix::identity(int n) {
  SensitivityMatrix m;
  m.n = n;
  m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SensitivityMatrix SensitivityMatrix::uniform_off_diagonal(int n, double ratio) {
  SensitivityMatrix m;
  m.n = n;
  m.a.assign(static_cast<std::size_t>(n) * n, ratio);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

int DeviceModel::coupler_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  auto& cs = topology.couplers;
  auto it = std::lower_bound(cs.begin(), cs.end(), std::make_pair(a, b));
  if (it == cs.end() || *it != std::make_pair(a, b)) return -1;
  return static_cast<int>(it - cs.begin());
}

double DeviceModel::cz_error(int a, int b) const {
  int idx = coupler_index(a, b);
  if (idx < 0)
    throw InvalidArgument("no coupler between " + std::to_string(a) + " and " + std::to_string(b));
  return err_cz[idx];
}

void DeviceModel::validate() const {
  topology.validate();
  const std::size_t n = static_cast<std::size_t>(num_qubits());
  if (err_1q.size() != n || ro_err.size() != n || t1.size() != n || t2.size() != n)
    throw InvalidArgument("per-qubit parameter arrays must match qubit count");
  if (err_cz.size() != topology.couplers.size())
    throw InvalidArgument("err_cz must match coupler count");
  auto in_unit = [](double x) { return x >= 0.0 && x < 1.0; };
  for (double e : err_1q)
    if (!in_unit(e)) throw InvalidArgument("err_1q out of [0,1)");
  for (double e : err_cz)
    if (!in_unit(e)) throw InvalidArgument("err_cz out of [0,1)");
  for (auto& r : ro_err)
    if (!in_unit(r.eps01) || !in_unit(r.eps10)) throw InvalidArgument("ro_err out of [0,1)");
  for (std::size_t q = 0; q < n; ++q) {
    if (t1[q] <= 0 || t2[q] <= 0) throw InvalidArgument("t1/t2 must be positive");
    if (t2[q] > 2.0 * t1[q] + 1e-15)
      throw InvalidArgument("t2 must not exceed 2*t1 (qubit " + std::to_string(q) + ")");
  }
  if (dur_prx <= 0 || dur_cz <= 0 || dur_ro <= 0)
    throw InvalidArgument("durations must be positive");
  for (const SensitivityMatrix* m : {&drive_xtalk, &flux_xtalk}) {
    if (m->n != static_cast<int>(n)) throw InvalidArgument("crosstalk matrix size mismatch");
    for (int i = 0; i < m->n; ++i)
      for (int j = 0; j < m->n; ++j) {
        double v = (*m)(i, j);
        if (i == j && v != 1.0) throw InvalidArgument("crosstalk diagonal must be 1");
        if (i != j && std::abs(v) >= 1.0)
          throw InvalidArgument("off-diagonal crosstalk magnitude must be < 1");
      }
  }
}

DeviceModel homogeneous_device(Topology topo, double e1, double e2, double ro, std::string name) {
  DeviceModel d;
  d.name = std::move(name);
  int n = topo.num_qubits();
  int nc = topo.num_couplers();
  d.topology = std::move(topo);
  d.err_1q.assign(n, e1);
  d.err_cz.assign(nc, e2);
  d.ro_err.assign(n, ReadoutError{ro, ro});
  d.t1.assign(n, 40e-6);
  d.t2.assign(n, 30e-6);
  d.dur_prx = 20e-9;
  d.dur_cz = 30e-9;
  d.dur_ro = 1e-6;
  d.drive_xtalk = SensitivityMatrix::identity(n);
  d.flux_xtalk = SensitivityMatrix::identity(n);
  return d;
}

DeviceModel garnet_median_device() {
  return homogeneous_device(build_crystal_topology("garnet-20"), 9e-4, 5e-3, 3e-2,
                            "garnet-median");
}

DeviceModel garnet_xtalk_device() {
  DeviceModel d = garnet_median_device();
  d.name = "garnet-xtalk";
  int n = d.num_qubits();
  d.drive_xtalk = SensitivityMatrix::uniform_off_diagonal(n, std::pow(10.0, -48.0 / 20.0));
  d.flux_xtalk = SensitivityMatrix::uniform_off_diagonal(n, std::pow(10.0, -70.0 / 20.0));
  return d;
}

DeviceModel load_device_model(const std::string& path_or_preset) {
  if (path_or_preset == "garnet-median") return garnet_median_device();
  if (path_or_preset == "garnet-xtalk") return garnet_xtalk_device();
  std::ifstream in(path_or_preset);
  if (!in) throw IoError("cannot open device model file: " + path_or_preset);
  nlohmann::json j;
  in >> j;
  DeviceModel d = j.get<DeviceModel>();
  d.validate();
  return d;
}

double crosstalk_db(const SensitivityMatrix& m, int i, int j) {
  if (i < 0 || i >= m.n || j < 0 || j >= m.n)
    throw InvalidArgument("crosstalk_db index out of range");
  double num = std::abs(m(i, j));
  double den = std::abs(m(j, j));
  if (num == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(num / den);
}

MetricSummary metric_cdf(const std::vector<double>& samples) {
  if (samples.empty()) throw InvalidArgument("metric_cdf: empty sample list");
  MetricSummary s;
  s.values = samples;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.cdf.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    s.cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / static_cast<double>(n));
  s.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return s;
}

static void matrix_to_json(nlohmann::json& j, const SensitivityMatrix& m) {
  j = nlohmann::json{{"n", m.n}, {"rows", nlohmann::json::array()}};
  for (int i = 0; i < m.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < m.n; ++k) row.push_back(m(i, k));
    j["rows"].push_back(std::move(row));
  }
}

static SensitivityMatrix matrix_from_json(const nlohmann::json& j, int n) {
  // Shorthand {"uniform_off_diagonal": x} or {"uniform_off_diagonal_db": x}
  // expands to a dense matrix.
  if (j.is_null()) return SensitivityMatrix::identity(n);
  if (j.contains("uniform_off_diagonal"))
    return SensitivityMatrix::uniform_off_diagonal(n, j.at("uniform_off_diagonal").get<double>());
  if (j.contains("uniform_off_diagonal_db"))
    return SensitivityMatrix::uniform_off_diagonal(
        n, std::pow(10.0, j.at("uniform_off_diagonal_db").get<double>() / 20.0));
  SensitivityMatrix m;
  m.n = j.at("n").get<int>();
  m.a.reserve(static_cast<std::size_t>(m.n) * m.n);
  for (auto& row : j.at("rows"))
    for (auto& v : row) m.a.push_back(v.get<double>());
  return m;
}

void to_json(nlohmann::json& j, const DeviceModel& d) {
  nlohmann::json ro = nlohmann::json::array();
  for (auto& r : d.ro_err) ro.push_back({r.eps01, r.eps10});
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"name", d.name},
                     {"topology", d.topology},
                     {"err_1q", d.err_1q},
                     {"err_cz", d.err_cz},
                     {"ro_err", ro},
                     {"t1", d.t1},
                     {"t2", d.t2},
                     {"dur_prx", d.dur_prx},
                     {"dur_cz", d.dur_cz},
                     {"dur_ro", d.dur_ro}};
  matrix_to_json(j["drive_xtalk"], d.drive_xtalk);
  matrix_to_json(j["flux_xtalk"], d.flux_xtalk);
}

void from_json(const nlohmann::json& j, DeviceModel& d) {
  d.name = j.value("name", "unnamed");
  j.at("topology").get_to(d.topology);
  j.at("err_1q").get_to(d.err_1q);
  j.at("err_cz").get_to(d.err_cz);
  d.ro_err.clear();
  for (auto& r : j.at("ro_err")) d.ro_err.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  j.at("t1").get_to(d.t1);
  j.at("t2").get_to(d.t2);
  d.dur_prx = j.at("dur_prx").get<double>();
  d.dur_cz = j.at("dur_cz").get<double>();
  d.dur_ro = j.at("dur_ro").get<double>();
  int n = d.topology.num_qubits();
  d.drive_xtalk = matrix_from_json(j.value("drive_xtalk", nlohmann::json()), n);
  d.flux_xtalk = matrix_from_json(j.value("flux_xtalk", nlohmann::json()), n);
}

void to_json(nlohmann::json& j, const MetricSummary& m) {
  j = nlohmann::json{{"values", m.values}, {"median", m.median}, {"cdf", m.cdf}};
}

}  // namespace qpubench
