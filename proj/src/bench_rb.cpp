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

#include "qpubench/bench_rb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qpubench {

std::string RbElement::label() const {
  std::string s = "q" + std::to_string(qubits.at(0));
  for (std::size_t i = 1; i < qubits.size(); ++i) s += "-q" + std::to_string(qubits[i]);
  return s;
}

void RbSpec::validate(const Topology& topo) const {
  if (targets.empty()) throw InvalidArgument("RbSpec: no targets");
  if (circuits_per_depth < 10) throw InvalidArgument("RbSpec: need >= 10 circuits per depth");
  for (std::size_t i = 1; i < depths.size(); ++i)
    if (depths[i] <= depths[i - 1]) throw InvalidArgument("RbSpec: depths must increase");
  if (depths.size() < 3) throw InvalidArgument("RbSpec: need >= 3 depths");
  for (auto& t : targets) {
    if (t.qubits.size() != 1 && t.qubits.size() != 2)
      throw InvalidArgument("RB supports widths 1 and 2 only");
    for (int q : t.qubits)
      if (q < 0 || q >= topo.num_qubits()) throw InvalidArgument("RB target off the device");
    if (t.qubits.size() == 2 && !topo.has_coupler(t.qubits[0], t.qubits[1]))
      throw InvalidArgument("2q RB target must sit on a coupler");
  }
  if (interleave_cz)
    for (auto& t : targets)
      if (t.qubits.size() != 2) throw InvalidArgument("interleaved CZ needs 2q targets");
  for (auto& g : groups) {
    std::set<int> seen;
    for (int idx : g) {
      if (idx < 0 || idx >= static_cast<int>(targets.size()))
        throw InvalidArgument("group index out of range");
      if (!seen.insert(idx).second) throw InvalidArgument("duplicate target in group");
    }
  }
}

std::vector<std::vector<int>> partition_distance_groups(const std::vector<RbElement>& targets,
                                                        const Topology& topo) {
  std::vector<std::vector<int>> groups;
  for (int idx = 0; idx < static_cast<int>(targets.size()); ++idx) {
    bool placed = false;
    for (auto& g : groups) {
      bool fits = true;
      for (int other : g) {
        int d = topo.set_distance(targets[idx].qubits, targets[other].qubits);
        if (d < 2) {
          fits = false;
          break;
        }
      }
      if (fits) {
        g.push_back(idx);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({idx});
  }
  return groups;
}

namespace {

/// Per-element running sequence state: a 1q group index or a 2q tableau.
struct SequenceState {
  int idx_1q = -1;
  Tableau2q tab_2q = Tableau2q::identity();
};

void append_element_clifford(Circuit& c, const RbElement& el, int choice) {
  const auto& t1 = Clifford1qTable::instance();
  const auto& t2 = Clifford2qTable::instance();
  if (el.qubits.size() == 1)
    append_native_1q(c, el.qubits[0], t1[choice].native);
  else
    t2.append_native(c, static_cast<std::size_t>(choice), el.qubits[0], el.qubits[1]);
}

std::vector<std::vector<int>> effective_groups(const RbSpec& spec) {
  if (!spec.groups.empty()) return spec.groups;
  std::vector<std::vector<int>> singletons;
  for (int i = 0; i < static_cast<int>(spec.targets.size()); ++i) singletons.push_back({i});
  return singletons;
}

}  // namespace

std::vector<RbGeneratedCircuit> gen_rb_sequences(const RbSpec& spec, const DeviceModel& device) {
  spec.validate(device.topology);
  const auto& t1 = Clifford1qTable::instance();
  const auto& t2 = Clifford2qTable::instance();
  auto groups = effective_groups(spec);

  std::vector<RbGeneratedCircuit> out;
  std::vector<bool> variants = spec.interleave_cz ? std::vector<bool>{false, true}
                                                  : std::vector<bool>{false};
  for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
    std::vector<int> group_qubits;
    for (int t : groups[gi])
      for (int q : spec.targets[t].qubits) group_qubits.push_back(q);
    std::sort(group_qubits.begin(), group_qubits.end());

    for (int depth : spec.depths) {
      for (int sample = 0; sample < spec.circuits_per_depth; ++sample) {
        for (bool interleaved : variants) {
          Circuit c(device.num_qubits(),
                    "rb-g" + std::to_string(gi) + "-d" + std::to_string(depth) + "-s" +
                        std::to_string(sample) + (interleaved ? "-icz" : ""));
          // per-element sequences depend only on (seed, element, depth, sample)
          std::vector<Rng> rngs;
          std::vector<SequenceState> states(groups[gi].size());
          for (int t : groups[gi]) {
            std::uint64_t s = derive_seed(spec.seed, spec.targets[t].label() + "/d" +
                                                        std::to_string(depth) + "/s" +
                                                        std::to_string(sample));
            rngs.push_back(make_rng(s));
          }
          for (int slot = 0; slot < depth; ++slot) {
            for (std::size_t k = 0; k < groups[gi].size(); ++k) {
              const RbElement& el = spec.targets[groups[gi][k]];
              if (el.qubits.size() == 1) {
                int choice = static_cast<int>(rngs[k]() % 24);
                append_element_clifford(c, el, choice);
                states[k].idx_1q = states[k].idx_1q < 0
                                       ? choice
                                       : t1.compose(choice, states[k].idx_1q);
              } else {
                auto choice = static_cast<std::size_t>(rngs[k]() % t2.size());
                append_element_clifford(c, el, static_cast<int>(choice));
                states[k].tab_2q = states[k].tab_2q.then(t2.tableau(choice));
                if (interleaved) {
                  c.cz(el.qubits[0], el.qubits[1]);
                  states[k].tab_2q = states[k].tab_2q.then(cz_tableau());
                }
              }
            }
            c.barrier(group_qubits);
          }
          // exact inversion element
          for (std::size_t k = 0; k < groups[gi].size(); ++k) {
            const RbElement& el = spec.targets[groups[gi][k]];
            if (el.qubits.size() == 1) {
              int running = states[k].idx_1q < 0 ? t1.identity_index() : states[k].idx_1q;
              append_element_clifford(c, el, t1.inverse(running));
            } else {
              std::size_t inv = t2.index_from_key(states[k].tab_2q.inverse().key());
              append_element_clifford(c, el, static_cast<int>(inv));
            }
          }
          for (int q : group_qubits) c.measure(q);
          RbGeneratedCircuit gen;
          gen.circuit = std::move(c);
          gen.depth = depth;
          gen.sample = sample;
          gen.group = gi;
          gen.interleaved = interleaved;
          out.push_back(std::move(gen));
        }
      }
    }
  }
  return out;
}

namespace {

double survival_from_counts(const Counts& counts, const std::vector<int>& measured,
                            const std::vector<int>& element_qubits) {
  std::vector<std::size_t> positions;
  for (int q : element_qubits) {
    auto it = std::lower_bound(measured.begin(), measured.end(), q);
    positions.push_back(static_cast<std::size_t>(it - measured.begin()));
  }
  std::uint64_t total = 0, zeros = 0;
  for (auto& [bits, n] : counts) {
    total += n;
    bool all_zero = true;
    for (auto p : positions)
      if (bits[p] != '0') {
        all_zero = false;
        break;
      }
    if (all_zero) zeros += n;
  }
  return static_cast<double>(zeros) / static_cast<double>(total);
}

}  // namespace

RbSuiteResult run_rb_suite(Backend& backend, const RbSpec& spec) {
  DeviceModel device = backend.device();
  spec.validate(device.topology);
  const auto& t1 = Clifford1qTable::instance();
  const auto& t2 = Clifford2qTable::instance();
  auto groups = effective_groups(spec);
  auto generated = gen_rb_sequences(spec, device);

  std::string started = iso_timestamp_now();

  // one job per (group, variant); circuits keep generation order
  struct Key {
    int group;
    bool interleaved;
    bool operator<(const Key& o) const {
      return group != o.group ? group < o.group : interleaved < o.interleaved;
    }
  };
  std::map<Key, std::vector<std::size_t>> by_job;
  for (std::size_t i = 0; i < generated.size(); ++i)
    by_job[{generated[i].group, generated[i].interleaved}].push_back(i);

  std::vector<std::vector<Counts>> counts_of(generated.size());
  for (auto& [key, indices] : by_job) {
    JobRequest req;
    req.shots = spec.shots;
    req.seed = derive_seed(spec.seed, "exec/g" + std::to_string(key.group) +
                                          (key.interleaved ? "/icz" : ""));
    for (auto i : indices) req.circuits.push_back(generated[i].circuit);
    auto counts = backend.execute(req);
    for (std::size_t k = 0; k < indices.size(); ++k)
      counts_of[indices[k]] = {counts[k]};
  }

  RbSuiteResult result;
  result.gbar_1q = t1.mean_prx_per_clifford();
  result.gbar_cz = t2.mean_cz_per_clifford();
  result.mean_prx_per_2q_clifford = t2.mean_prx_per_clifford();

  // per-element survival aggregation
  for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
    std::vector<int> group_qubits;
    for (int t : groups[gi])
      for (int q : spec.targets[t].qubits) group_qubits.push_back(q);
    std::sort(group_qubits.begin(), group_qubits.end());

    for (int t : groups[gi]) {
      const RbElement& el = spec.targets[t];
      const int n_q = static_cast<int>(el.qubits.size());
      RbElementResult er;
      er.element = el;

      for (bool interleaved : spec.interleave_cz ? std::vector<bool>{false, true}
                                                 : std::vector<bool>{false}) {
        std::map<int, std::vector<double>> survivals;  // depth -> per-circuit values
        for (std::size_t i = 0; i < generated.size(); ++i) {
          const auto& g = generated[i];
          if (g.group != gi || g.interleaved != interleaved) continue;
          survivals[g.depth].push_back(
              survival_from_counts(counts_of[i][0], group_qubits, el.qubits));
        }
        std::vector<DecayPoint> pts;
        for (auto& [depth, vals] : survivals) {
          double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
          double var = 0;
          for (double v : vals) var += (v - mean) * (v - mean);
          var /= vals.size() > 1 ? (vals.size() - 1) : 1;
          double sem = std::sqrt(var / vals.size());
          // binomial floor keeps weights finite on noiseless data
          double floor_sem =
              std::sqrt(0.25 / (static_cast<double>(spec.shots) * vals.size()));
          pts.push_back({static_cast<double>(depth), mean, std::max(sem, floor_sem)});
        }
        if (interleaved)
          er.points_interleaved = pts;
        else
          er.points = pts;
      }

      double floor_b = 1.0 / std::pow(2.0, n_q);
      er.fit = fit_exponential_decay(er.points, floor_b);
      if (spec.interleave_cz) {
        er.fit_interleaved = fit_exponential_decay(er.points_interleaved, floor_b);
        ErrorExtras extras;
        extras.p_reference = er.fit.p;
        er.error = decay_to_errors(er.fit_interleaved, n_q, ErrorMode::Irb, extras);
        er.metric = er.error.r;
      } else if (n_q == 1) {
        ErrorExtras extras;
        extras.native_gates_per_clifford = result.gbar_1q;
        er.error = decay_to_errors(er.fit, 1, ErrorMode::Rb, extras);
        er.metric = er.error.r_native.value_or(er.error.r);
      } else {
        er.error = decay_to_errors(er.fit, 2, ErrorMode::Rb);
        er.metric = er.error.r;
      }

      if (spec.with_bootstrap) {
        // resample circuits within each depth, refit, take the metric CI
        std::vector<double> depth_list;
        std::map<int, std::vector<double>> survivals;
        for (std::size_t i = 0; i < generated.size(); ++i) {
          const auto& g = generated[i];
          if (g.group != gi || g.interleaved) continue;
          survivals[g.depth].push_back(
              survival_from_counts(counts_of[i][0], group_qubits, el.qubits));
        }
        Rng rng = make_rng(derive_seed(spec.seed, "bootstrap/" + el.label()));
        std::vector<double> metrics;
        for (int b = 0; b < 200; ++b) {
          std::vector<DecayPoint> pts;
          for (auto& [depth, vals] : survivals) {
            std::uniform_int_distribution<std::size_t> pick(0, vals.size() - 1);
            double acc = 0;
            for (std::size_t k = 0; k < vals.size(); ++k) acc += vals[pick(rng)];
            double mean = acc / vals.size();
            pts.push_back({static_cast<double>(depth), mean,
                           std::sqrt(0.25 / (spec.shots * vals.size()))});
          }
          try {
            DecayFit f = fit_exponential_decay(pts, floor_b);
            metrics.push_back((1.0 - f.p) * (std::pow(2.0, n_q) - 1) / std::pow(2.0, n_q));
          } catch (const Error&) {
          }
        }
        if (metrics.size() > 10) {
          std::sort(metrics.begin(), metrics.end());
          er.ci = {metrics[static_cast<std::size_t>(0.025 * metrics.size())],
                   metrics[static_cast<std::size_t>(0.975 * (metrics.size() - 1))]};
        }
      }
      result.elements.push_back(std::move(er));
    }
  }

  std::vector<double> metrics;
  for (auto& e : result.elements) metrics.push_back(e.metric);
  result.summary = metric_cdf(metrics);

  // report assembly
  BenchmarkReport rep;
  rep.benchmark = spec.interleave_cz ? "irb" : "rb";
  rep.seed = spec.seed;
  rep.spec = {{"depths", spec.depths},
              {"circuits_per_depth", spec.circuits_per_depth},
              {"shots", spec.shots},
              {"interleave_cz", spec.interleave_cz},
              {"targets", nlohmann::json::array()}};
  for (auto& t : spec.targets) rep.spec["targets"].push_back(t.label());
  rep.data["elements"] = nlohmann::json::array();
  for (auto& e : result.elements) {
    nlohmann::json pts = nlohmann::json::array();
    for (auto& p : e.points) pts.push_back({{"depth", p.depth}, {"mean", p.mean},
                                            {"stderr", p.stderr_}});
    nlohmann::json je{{"element", e.element.label()},
                      {"points", std::move(pts)},
                      {"fit", {{"A", e.fit.A}, {"p", e.fit.p}, {"B", e.fit.B},
                               {"stderr_p", e.fit.stderr_p}, {"r_squared", e.fit.r_squared}}},
                      {"r", e.error.r},
                      {"metric", e.metric}};
    if (e.error.r_native) je["r_native"] = *e.error.r_native;
    if (spec.interleave_cz) {
      je["fit_interleaved"] = {{"A", e.fit_interleaved.A},
                               {"p", e.fit_interleaved.p},
                               {"stderr_p", e.fit_interleaved.stderr_p},
                               {"r_squared", e.fit_interleaved.r_squared}};
      nlohmann::json ipts = nlohmann::json::array();
      for (auto& p : e.points_interleaved)
        ipts.push_back({{"depth", p.depth}, {"mean", p.mean}, {"stderr", p.stderr_}});
      je["points_interleaved"] = std::move(ipts);
    }
    if (spec.with_bootstrap) je["ci95"] = {e.ci.lo, e.ci.hi};
    rep.data["elements"].push_back(std::move(je));
  }
  rep.derived = {{"median_metric", result.summary.median},
                 {"cdf", result.summary},
                 {"gbar_1q", result.gbar_1q},
                 {"gbar_cz", result.gbar_cz},
                 {"mean_prx_per_2q_clifford", result.mean_prx_per_2q_clifford}};
  rep.verdicts = nlohmann::json::object();
  rep.meta = {{"backend", backend.name()},
              {"started_at", started},
              {"finished_at", iso_timestamp_now()}};
  result.report = std::move(rep);
  return result;
}

// ---------------------------------------------------------------------------
// mirror RB

void MrbSpec::validate(const Topology& topo) const {
  if (subsets.empty()) throw InvalidArgument("MrbSpec: no subsets");
  if (cz_density <= 0.0 || cz_density > 1.0) throw InvalidArgument("MrbSpec: xi outside (0,1]");
  if (samples_per_depth < 1) throw InvalidArgument("MrbSpec: samples_per_depth < 1");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] % 2 != 0) throw InvalidArgument("MrbSpec: depths must be even");
    if (i > 0 && depths[i] <= depths[i - 1])
      throw InvalidArgument("MrbSpec: depths must increase");
  }
  for (auto& sub : subsets) {
    if (sub.empty()) throw InvalidArgument("MrbSpec: empty subset");
    for (int q : sub)
      if (q < 0 || q >= topo.num_qubits()) throw InvalidArgument("MRB subset off the device");
    // connectivity within the induced subgraph
    std::set<int> in(sub.begin(), sub.end());
    std::set<int> seen{sub[0]};
    std::vector<int> frontier{sub[0]};
    while (!frontier.empty()) {
      int u = frontier.back();
      frontier.pop_back();
      for (int v : topo.neighbors(u))
        if (in.count(v) && !seen.count(v)) {
          seen.insert(v);
          frontier.push_back(v);
        }
    }
    if (seen.size() != in.size())
      throw InvalidArgument("MRB subset is not connected in the topology");
  }
}

namespace {

/// n-qubit Pauli in per-qubit XZ form with a global i^phase.
struct NPauli {
  std::vector<std::uint8_t> x, z;
  unsigned phase = 0;

  explicit NPauli(int n) : x(n, 0), z(n, 0) {}
};

/// Multiply by a single-qubit XZ-form pauli (bits b = x | z<<1, phase add).
void npauli_mul_local(NPauli& p, int q, unsigned bits, unsigned phase) {
  // reorder existing Z_q past the incoming X_q
  if (p.z[q] && (bits & 1)) p.phase = (p.phase + 2) % 4;
  p.x[q] ^= bits & 1;
  p.z[q] ^= (bits >> 1) & 1;
  p.phase = (p.phase + phase) % 4;
}

/// Conjugate by the 1q Clifford with table index `idx` acting on qubit q.
void npauli_conj_1q(NPauli& p, int q, int idx) {
  const auto& e = Clifford1qTable::instance()[idx];
  unsigned had_x = p.x[q], had_z = p.z[q];
  // replace the local X^x Z^z with img_x^x img_z^z in the same order
  p.x[q] = 0;
  p.z[q] = 0;
  if (had_x) npauli_mul_local(p, q, e.img_x_bits, 2u * e.img_x_sign +
                                        ((e.img_x_bits & 1) && (e.img_x_bits & 2) ? 1u : 0u));
  if (had_z) npauli_mul_local(p, q, e.img_z_bits, 2u * e.img_z_sign +
                                        ((e.img_z_bits & 1) && (e.img_z_bits & 2) ? 1u : 0u));
}

/// Conjugate by CZ(a, b).
void npauli_conj_cz(NPauli& p, int a, int b) {
  Pauli2 sub{static_cast<unsigned>(p.x[a] | (p.z[a] << 1) | (p.x[b] << 2) | (p.z[b] << 3)), 0};
  Pauli2 img = cz_tableau().apply(sub);
  p.x[a] = img.bits & 1;
  p.z[a] = (img.bits >> 1) & 1;
  p.x[b] = (img.bits >> 2) & 1;
  p.z[b] = (img.bits >> 3) & 1;
  p.phase = (p.phase + img.phase) % 4;
}

struct MrbLayerPlan {
  std::vector<int> cliffords;               // per subset position
  std::vector<std::pair<int, int>> edges;   // CZ layer (device ids)
};

}  // namespace

std::vector<MrbCircuit> gen_mrb_circuits(const MrbSpec& spec, const Topology& topo) {
  spec.validate(topo);
  const auto& t1 = Clifford1qTable::instance();
  std::vector<MrbCircuit> out;

  for (int si = 0; si < static_cast<int>(spec.subsets.size()); ++si) {
    std::vector<int> qubits = spec.subsets[si];
    std::sort(qubits.begin(), qubits.end());
    const int n = static_cast<int>(qubits.size());
    std::vector<int> pos_of(topo.num_qubits(), -1);
    for (int k = 0; k < n; ++k) pos_of[qubits[k]] = k;

    // induced edges
    std::vector<std::pair<int, int>> edges;
    for (auto& [a, b] : topo.couplers)
      if (pos_of[a] >= 0 && pos_of[b] >= 0) edges.emplace_back(a, b);

    for (int depth : spec.depths) {
      for (int sample = 0; sample < spec.samples_per_depth; ++sample) {
        Rng rng = make_rng(derive_seed(spec.seed, "mrb/s" + std::to_string(si) + "/d" +
                                                      std::to_string(depth) + "/i" +
                                                      std::to_string(sample)));
        std::uniform_real_distribution<double> u01(0.0, 1.0);

        auto random_pauli_layer = [&] {
          std::vector<int> ps(n);
          for (auto& p : ps) p = t1.pauli_index(static_cast<int>(rng() % 4));
          return ps;
        };
        auto dress = [&](std::vector<int> cliffords) {
          // merge a fresh random Pauli after the layer: P * C
          auto paulis = random_pauli_layer();
          for (int k = 0; k < n; ++k) cliffords[k] = t1.compose(paulis[k], cliffords[k]);
          return cliffords;
        };

        // forward layer plans
        std::vector<MrbLayerPlan> forward(depth / 2);
        for (auto& layer : forward) {
          layer.cliffords.resize(n);
          for (auto& idx : layer.cliffords) idx = static_cast<int>(rng() % 24);
          // uniformly random maximal matching, thinned to density xi
          std::vector<std::pair<int, int>> shuffled = edges;
          for (std::size_t k = shuffled.size(); k > 1; --k)
            std::swap(shuffled[k - 1], shuffled[rng() % k]);
          std::vector<char> used(topo.num_qubits(), 0);
          for (auto& [a, b] : shuffled) {
            if (used[a] || used[b]) continue;
            used[a] = used[b] = 1;
            if (u01(rng) < spec.cz_density) layer.edges.emplace_back(a, b);
          }
        }
        std::vector<int> cap(n);
        for (auto& idx : cap) idx = static_cast<int>(rng() % 24);

        // assemble the dressed layer sequence in time order
        struct Slot {
          std::vector<int> cliffords;
          std::vector<std::pair<int, int>> edges;  // applied after the 1q layer
        };
        std::vector<Slot> slots;
        slots.push_back({dress(cap), {}});
        for (auto& layer : forward) slots.push_back({dress(layer.cliffords), layer.edges});
        for (auto it = forward.rbegin(); it != forward.rend(); ++it) {
          std::vector<int> inv(n);
          for (int k = 0; k < n; ++k) inv[k] = t1.inverse(it->cliffords[k]);
          // mirror half: CZ layer first, then the inverse 1q layer; fold the
          // CZ layer into the preceding slot's edge list
          slots.back().edges.insert(slots.back().edges.end(), it->edges.begin(),
                                    it->edges.end());
          slots.push_back({dress(inv), {}});
        }
        {
          std::vector<int> inv(n);
          for (int k = 0; k < n; ++k) inv[k] = t1.inverse(cap[k]);
          slots.push_back({dress(inv), {}});
        }

        Circuit c(topo.num_qubits(), "mrb-n" + std::to_string(n) + "-d" +
                                         std::to_string(depth) + "-s" + std::to_string(sample));
        int cz_total = 0;
        for (auto& slot : slots) {
          for (int k = 0; k < n; ++k) append_native_1q(c, qubits[k], t1[slot.cliffords[k]].native);
          c.barrier(qubits);
          for (auto& [a, b] : slot.edges) {
            c.cz(a, b);
            ++cz_total;
          }
          if (!slot.edges.empty()) c.barrier(qubits);
        }
        for (int q : qubits) c.measure(q);

        // target bitstring via Clifford propagation of each Z_q
        std::string target(n, '0');
        for (int k = 0; k < n; ++k) {
          NPauli p(n);
          p.z[k] = 1;
          for (auto& slot : slots) {
            for (int m = 0; m < n; ++m) npauli_conj_1q(p, m, slot.cliffords[m]);
            for (auto& [a, b] : slot.edges) npauli_conj_cz(p, pos_of[a], pos_of[b]);
          }
          bool is_zq = p.z[k] == 1 && p.x[k] == 0;
          for (int m = 0; m < n && is_zq; ++m)
            if (m != k && (p.x[m] || p.z[m])) is_zq = false;
          if (!is_zq) throw Error("MRB propagation did not return a Z operator");
          if (p.phase == 2) target[k] = '1';
          else if (p.phase != 0)
            throw Error("MRB propagation produced a non-Hermitian sign");
        }

        MrbCircuit mc;
        mc.circuit = std::move(c);
        mc.target = std::move(target);
        mc.subset_index = si;
        mc.depth = depth;
        mc.sample = sample;
        mc.cz_count = cz_total;
        out.push_back(std::move(mc));
      }
    }
  }
  return out;
}

MrbResult run_mrb(Backend& backend, const MrbSpec& spec) {
  DeviceModel device = backend.device();
  auto circuits = gen_mrb_circuits(spec, device.topology);
  std::string started = iso_timestamp_now();

  std::map<int, std::vector<std::size_t>> by_subset;
  for (std::size_t i = 0; i < circuits.size(); ++i)
    by_subset[circuits[i].subset_index].push_back(i);

  MrbResult result;
  BenchmarkReport rep;
  rep.benchmark = "mrb";
  rep.seed = spec.seed;
  rep.spec = {{"depths", spec.depths},
              {"samples_per_depth", spec.samples_per_depth},
              {"cz_density", spec.cz_density},
              {"shots", spec.shots}};
  rep.data["subsets"] = nlohmann::json::array();

  for (auto& [si, indices] : by_subset) {
    JobRequest req;
    req.shots = spec.shots;
    req.seed = derive_seed(spec.seed, "mrb-exec/" + std::to_string(si));
    for (auto i : indices) req.circuits.push_back(circuits[i].circuit);
    auto counts = backend.execute(req);

    std::vector<int> qubits = spec.subsets[si];
    std::sort(qubits.begin(), qubits.end());
    const int n = static_cast<int>(qubits.size());

    std::map<int, std::vector<double>> pol;  // depth -> per-circuit polarization
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const auto& mc = circuits[indices[k]];
      double s = polarization_from_counts(counts[k], mc.target, n);
      pol[mc.depth].push_back(s);
      samples.push_back({{"depth", mc.depth}, {"sample", mc.sample}, {"polarization", s},
                         {"cz_count", mc.cz_count}});
    }

    MrbSubsetResult sr;
    sr.qubits = qubits;
    for (auto& [depth, vals] : pol) {
      double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
      double var = 0;
      for (double v : vals) var += (v - mean) * (v - mean);
      var /= vals.size() > 1 ? vals.size() - 1 : 1;
      double sem = std::sqrt(var / vals.size());
      double floor_sem = std::sqrt(1.0 / (static_cast<double>(spec.shots) * vals.size()));
      sr.points.push_back({static_cast<double>(depth), mean, std::max(sem, floor_sem)});
    }
    sr.fit = fit_exponential_decay(sr.points, 0.0);
    ErrorEstimate per = decay_to_errors(sr.fit, n, ErrorMode::PerLayerPerQubit);
    double dim2 = std::pow(4.0, n);
    sr.r_omega = (1.0 - sr.fit.p) * (dim2 - 1.0) / dim2;
    sr.r_per_qubit = per.r;

    nlohmann::json js{{"qubits", qubits},
                      {"n", n},
                      {"samples", std::move(samples)},
                      {"fit", {{"A", sr.fit.A}, {"p", sr.fit.p},
                               {"stderr_p", sr.fit.stderr_p},
                               {"r_squared", sr.fit.r_squared}}},
                      {"r_omega", sr.r_omega},
                      {"r_per_qubit", sr.r_per_qubit}};
    rep.data["subsets"].push_back(std::move(js));
    result.subsets.push_back(std::move(sr));
  }

  rep.meta = {{"backend", backend.name()},
              {"started_at", started},
              {"finished_at", iso_timestamp_now()}};
  result.report = std::move(rep);
  return result;
}

// ---------------------------------------------------------------------------
// drive crosstalk estimation

namespace {

/// Least-squares rate of P1(a) = sin^2(k a / 2) via golden-section search.
double fit_rabi_rate(const std::vector<double>& amps, const std::vector<double>& p1,
                     double k_lo, double k_hi) {
  auto loss = [&](double k) {
    double acc = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      double m = std::sin(k * amps[i] / 2);
      double r = p1[i] - m * m;
      acc += r * r;
    }
    return acc;
  };
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double a = k_lo, b = k_hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int iter = 0; iter < 120; ++iter) {
    if (loss(c) < loss(d))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

CrosstalkEstimate estimate_drive_crosstalk(Backend& backend, int target_j, int spectator_i,
                                           const CrosstalkOptions& opts) {
  CrosstalkEstimate est;
  if (target_j == spectator_i) {
    est.db = 0.0;
    est.target_slope = est.spectator_slope = 1.0;
    return est;
  }
  DeviceModel device = backend.device();
  const int n = device.num_qubits();
  if (target_j < 0 || target_j >= n || spectator_i < 0 || spectator_i >= n)
    throw InvalidArgument("crosstalk estimation qubits off the device");

  std::vector<double> amps;
  for (int k = 1; k <= opts.amplitudes; ++k)
    amps.push_back(opts.max_amplitude * k / opts.amplitudes);

  // sweep 1: single pulse on j, measure j
  JobRequest direct;
  direct.shots = opts.shots;
  direct.seed = derive_seed(opts.seed, "xtalk-direct");
  for (double a : amps) {
    Circuit c(n, "rabi-direct");
    c.prx(target_j, a, 0.0);
    c.measure(target_j);
    direct.circuits.push_back(std::move(c));
  }
  auto direct_counts = backend.execute(direct);
  std::vector<double> p1_direct;
  for (auto& counts : direct_counts) {
    std::uint64_t ones = 0, total = 0;
    for (auto& [bits, v] : counts) {
      total += v;
      if (bits == "1") ones += v;
    }
    p1_direct.push_back(static_cast<double>(ones) / static_cast<double>(total));
  }
  double slope_j = fit_rabi_rate(amps, p1_direct, 0.5, 1.5);

  // sweep 2: pulse train on j, measure the spectator
  JobRequest spect;
  spect.shots = opts.shots;
  spect.seed = derive_seed(opts.seed, "xtalk-spectator");
  for (double a : amps) {
    Circuit c(n, "rabi-spectator");
    for (int r = 0; r < opts.pulse_train; ++r) c.prx(target_j, a, 0.0);
    c.measure(spectator_i);
    c.measure(target_j);
    spect.circuits.push_back(std::move(c));
  }
  auto spect_counts = backend.execute(spect);
  std::vector<double> p1_spect;
  double max_p1 = 0;
  for (auto& counts : spect_counts) {
    std::uint64_t ones = 0, total = 0;
    std::size_t pos = spectator_i < target_j ? 0 : 1;  // measured ascending
    for (auto& [bits, v] : counts) {
      total += v;
      if (bits[pos] == '1') ones += v;
    }
    double p = static_cast<double>(ones) / static_cast<double>(total);
    p1_spect.push_back(p);
    max_p1 = std::max(max_p1, p);
  }

  // resolvability floor: the largest signal must beat shot noise
  double noise_floor = 3.0 / std::sqrt(static_cast<double>(opts.shots));
  if (max_p1 < noise_floor) {
    est.at_floor = true;
    est.db = kCrosstalkFloorDb;
    est.target_slope = slope_j;
    est.spectator_slope = 0.0;
    return est;
  }

  double k_hi = M_PI / amps.back();  // stay below the first wrap
  double k_spect = fit_rabi_rate(amps, p1_spect, 0.0, k_hi);
  double ratio = k_spect / (opts.pulse_train * slope_j);
  est.target_slope = slope_j;
  est.spectator_slope = k_spect / opts.pulse_train;
  if (ratio <= std::pow(10.0, kCrosstalkFloorDb / 20.0)) {
    est.at_floor = true;
    est.db = kCrosstalkFloorDb;
  } else {
    est.db = 20.0 * std::log10(ratio);
  }
  return est;
}

}  // namespace qpubench
