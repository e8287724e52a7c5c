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

#include "qpubench/routing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include "qpubench/gates.hpp"

namespace qpubench {
namespace {

/// ESU-style enumeration of connected vertex subsets of size k,
/// deterministic ascending order, capped.
void enumerate_connected_subsets(const Topology& topo, int k, int cap,
                                 std::vector<std::vector<int>>& out) {
  const int n = topo.num_qubits();
  if (k == 1) {
    for (int v = 0; v < n && static_cast<int>(out.size()) < cap; ++v) out.push_back({v});
    return;
  }
  std::vector<int> sub;
  std::vector<char> in_sub(n, 0);

  // extension holds candidates > root not adjacent-claimed yet
  std::function<void(int, std::vector<int>)> extend = [&](int root, std::vector<int> ext) {
    if (static_cast<int>(out.size()) >= cap) return;
    if (static_cast<int>(sub.size()) == k) {
      out.push_back(sub);
      return;
    }
    while (!ext.empty() && static_cast<int>(out.size()) < cap) {
      int w = ext.front();
      ext.erase(ext.begin());
      std::vector<int> ext2 = ext;
      for (int u : topo.neighbors(w)) {
        if (u <= root || in_sub[u]) continue;
        bool in_ext = std::find(ext2.begin(), ext2.end(), u) != ext2.end() ||
                      std::find(ext.begin(), ext.end(), u) != ext.end();
        // exclusive neighborhood: not already reachable from the subset
        bool nbr_of_sub = false;
        for (int s : sub)
          if (topo.has_coupler(s, u)) {
            nbr_of_sub = true;
            break;
          }
        if (!in_ext && !nbr_of_sub) ext2.push_back(u);
      }
      std::sort(ext2.begin(), ext2.end());
      sub.push_back(w);
      in_sub[w] = 1;
      extend(root, ext2);
      in_sub[w] = 0;
      sub.pop_back();
    }
  };

  for (int v = 0; v < n && static_cast<int>(out.size()) < cap; ++v) {
    sub = {v};
    std::fill(in_sub.begin(), in_sub.end(), 0);
    in_sub[v] = 1;
    std::vector<int> ext;
    for (int u : topo.neighbors(v))
      if (u > v) ext.push_back(u);
    std::sort(ext.begin(), ext.end());
    extend(v, ext);
  }
}

/// One greedy-grown candidate per seed vertex, for widths beyond the
/// exhaustive range.
void greedy_subsets(const DeviceModel& dev, int k, std::vector<std::vector<int>>& out) {
  const auto& topo = dev.topology;
  std::set<std::vector<int>> seen;
  for (int seed = 0; seed < topo.num_qubits(); ++seed) {
    std::vector<int> sub{seed};
    std::vector<char> in_sub(topo.num_qubits(), 0);
    in_sub[seed] = 1;
    while (static_cast<int>(sub.size()) < k) {
      int best = -1;
      int best_links = -1;
      double best_err = 0;
      for (int s : sub)
        for (int u : topo.neighbors(s)) {
          if (in_sub[u]) continue;
          int links = 0;
          for (int v : topo.neighbors(u))
            if (in_sub[v]) ++links;
          double err = dev.err_1q[u];
          if (links > best_links || (links == best_links && (err < best_err ||
              (err == best_err && u < best)))) {
            best = u;
            best_links = links;
            best_err = err;
          }
        }
      if (best < 0) break;
      sub.push_back(best);
      in_sub[best] = 1;
    }
    if (static_cast<int>(sub.size()) == k) {
      std::sort(sub.begin(), sub.end());
      if (seen.insert(sub).second) out.push_back(sub);
    }
  }
}

struct RouteResult {
  Circuit circuit;
  std::vector<int> final_map;
  double score = 0;
};

double gate_score_term(double eps) { return -std::log1p(-eps); }

/// Routes the measurement-stripped native circuit onto one embedding and
/// scores the result.
RouteResult route_on_subset(const Circuit& nat, const DeviceModel& dev,
                            const std::vector<int>& assignment,
                            const std::vector<int>& measured_logical,
                            const RoutingOptions& opts) {
  const auto& topo = dev.topology;
  std::vector<char> allowed(topo.num_qubits(), 0);
  for (int p : assignment) allowed[p] = 1;

  std::vector<int> map = assignment;            // logical -> physical
  std::vector<int> inverse(topo.num_qubits(), -1);
  for (std::size_t l = 0; l < map.size(); ++l) inverse[map[l]] = static_cast<int>(l);

  Circuit routed(topo.num_qubits(), nat.name);

  auto emit_swap = [&](int pu, int pv) {
    // SWAP as three CZ-conjugated CNOTs; 1q runs collapse later.
    auto emit_cnot = [&](int pc, int pt) {
      append_native_1q(routed, pt, decompose_1q(h_matrix()));
      routed.cz(pc, pt);
      append_native_1q(routed, pt, decompose_1q(h_matrix()));
    };
    emit_cnot(pu, pv);
    emit_cnot(pv, pu);
    emit_cnot(pu, pv);
    int lu = inverse[pu], lv = inverse[pv];
    if (lu >= 0) map[lu] = pv;
    if (lv >= 0) map[lv] = pu;
    std::swap(inverse[pu], inverse[pv]);
  };

  // BFS restricted to the embedded subset, deterministic neighbor order.
  auto shortest_path = [&](int from, int to) {
    std::vector<int> parent(topo.num_qubits(), -2);
    std::deque<int> frontier{from};
    parent[from] = -1;
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop_front();
      if (u == to) break;
      for (int v : topo.neighbors(u)) {
        if (!allowed[v] || parent[v] != -2) continue;
        parent[v] = u;
        frontier.push_back(v);
      }
    }
    std::vector<int> path;
    for (int v = to; v != -1; v = parent[v]) {
      if (v == -2) throw InvalidArgument("embedding subgraph is disconnected");
      path.push_back(v);
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  for (const auto& ins : nat.instructions) {
    switch (ins.kind) {
      case OpKind::PRX:
        routed.prx(map[ins.operands[0]], ins.params[0], ins.params[1]);
        break;
      case OpKind::RZ:
        routed.rz(map[ins.operands[0]], ins.params[0]);
        break;
      case OpKind::BARRIER: {
        std::vector<int> ops;
        for (int l : ins.operands) ops.push_back(map[l]);
        std::sort(ops.begin(), ops.end());
        routed.barrier(ops);
        break;
      }
      case OpKind::CZ: {
        int pa = map[ins.operands[0]], pb = map[ins.operands[1]];
        if (!topo.has_coupler(pa, pb)) {
          auto path = shortest_path(pa, pb);
          for (std::size_t i = 0; i + 2 < path.size(); ++i) emit_swap(path[i], path[i + 1]);
          pa = map[ins.operands[0]];
          pb = map[ins.operands[1]];
        }
        routed.cz(pa, pb);
        break;
      }
      default:
        throw InvalidArgument("route_on_subset: unexpected instruction");
    }
  }

  RouteResult res;
  res.final_map = map;
  Circuit collapsed = collapse_1q_runs(routed);
  for (int l : measured_logical) collapsed.measure(map[l]);

  double score = 0;
  for (const auto& ins : collapsed.instructions) {
    switch (ins.kind) {
      case OpKind::PRX:
        score += gate_score_term(dev.err_1q[ins.operands[0]]);
        break;
      case OpKind::CZ:
        score += gate_score_term(dev.cz_error(ins.operands[0], ins.operands[1]));
        break;
      case OpKind::MEASURE:
        if (!opts.exclude_readout) {
          const auto& ro = dev.ro_err[ins.operands[0]];
          score += gate_score_term(0.5 * (ro.eps01 + ro.eps10));
        }
        break;
      default:
        break;
    }
  }
  res.circuit = std::move(collapsed);
  res.score = score;
  return res;
}

}  // namespace

RoutedCircuit route_and_embed(const Circuit& logical, const DeviceModel& device,
                              const RoutingOptions& opts) {
  if (logical.num_qubits > device.num_qubits())
    throw InvalidArgument("circuit is larger than the device");
  if (!device.topology.is_connected())
    throw InvalidArgument("device graph is disconnected");

  Circuit nat = logical.is_native() ? logical : decompose_to_native(logical);
  nat.validate();

  // Strip measurements; they are re-attached on final positions.
  std::vector<int> measured_logical = nat.measured_qubits();
  Circuit gates_only(nat.num_qubits, nat.name);
  for (auto& ins : nat.instructions)
    if (ins.kind != OpKind::MEASURE) gates_only.instructions.push_back(ins);

  const int k = nat.num_qubits;

  // Interaction weights (CZ counts per logical pair) drive the assignment.
  std::vector<std::vector<int>> weight(k, std::vector<int>(k, 0));
  std::vector<int> interaction(k, 0);
  for (auto& ins : gates_only.instructions)
    if (ins.kind == OpKind::CZ) {
      ++weight[ins.operands[0]][ins.operands[1]];
      ++weight[ins.operands[1]][ins.operands[0]];
      ++interaction[ins.operands[0]];
      ++interaction[ins.operands[1]];
    }

  // Greedy adjacency-preserving placement of logicals onto a subset;
  // `first_logical` seeds the placement so one subset yields k candidate
  // embeddings.
  auto assign_on_subset = [&](const std::vector<int>& subset, int first_logical) {
    std::vector<char> in_subset(device.topology.num_qubits(), 0);
    for (int p : subset) in_subset[p] = 1;
    std::vector<int> assignment(k, -1);
    std::vector<char> phys_used(device.topology.num_qubits(), 0);
    std::vector<char> logical_placed(k, 0);
    for (int placed = 0; placed < k; ++placed) {
      // next logical: max interaction weight to already-placed, then max
      // total interaction, then id
      int bl = -1;
      long bw = -1, bt = -1;
      if (placed == 0) {
        bl = first_logical;
      } else {
        for (int l = 0; l < k; ++l) {
          if (logical_placed[l]) continue;
          long w = 0;
          for (int m = 0; m < k; ++m)
            if (logical_placed[m]) w += weight[l][m];
          if (w > bw || (w == bw && (interaction[l] > bt ||
                                     (interaction[l] == bt && (bl < 0 || l < bl))))) {
            bl = l;
            bw = w;
            bt = interaction[l];
          }
        }
      }
      // best physical slot: max adjacency weight to placed partners, then
      // max induced degree, then lowest 1q error, then id
      int bp = -1;
      long best_adj = -1, best_deg = -1;
      double best_err = 0;
      for (int p : subset) {
        if (phys_used[p]) continue;
        long adj = 0;
        for (int m = 0; m < k; ++m)
          if (logical_placed[m] && device.topology.has_coupler(p, assignment[m]))
            adj += weight[bl][m];
        long deg = 0;
        for (int u : device.topology.neighbors(p))
          if (in_subset[u]) ++deg;
        double err = device.err_1q[p];
        bool better = adj > best_adj ||
                      (adj == best_adj &&
                       (deg > best_deg ||
                        (deg == best_deg && (err < best_err || (err == best_err && p < bp)))));
        if (better) {
          bp = p;
          best_adj = adj;
          best_deg = deg;
          best_err = err;
        }
      }
      assignment[bl] = bp;
      logical_placed[bl] = 1;
      phys_used[bp] = 1;
    }
    return assignment;
  };

  RouteResult best;
  std::vector<int> best_initial;
  double best_score = std::numeric_limits<double>::infinity();

  if (!opts.fixed_layout.empty()) {
    if (static_cast<int>(opts.fixed_layout.size()) != k)
      throw InvalidArgument("fixed_layout size must match the logical qubit count");
    best_initial = opts.fixed_layout;
    best = route_on_subset(gates_only, device, best_initial, measured_logical, opts);
    best_score = best.score;
  } else {
    std::vector<std::vector<int>> subsets;
    if (k <= opts.exhaustive_max_logical)
      enumerate_connected_subsets(device.topology, k, opts.max_candidates, subsets);
    else
      greedy_subsets(device, k, subsets);
    if (subsets.empty()) throw InvalidArgument("no connected embedding of the required size");

    int routed_count = 0;
    for (const auto& subset : subsets) {
      std::set<std::vector<int>> tried;
      for (int first = 0; first < k && routed_count < opts.max_candidates; ++first) {
        std::vector<int> assignment = assign_on_subset(subset, first);
        if (!tried.insert(assignment).second) continue;
        RouteResult r = route_on_subset(gates_only, device, assignment, measured_logical, opts);
        ++routed_count;
        if (r.score < best_score) {
          best_score = r.score;
          best = std::move(r);
          best_initial = assignment;
        }
      }
      if (routed_count >= opts.max_candidates) break;
    }
  }

  RoutedCircuit out;
  out.circuit = std::move(best.circuit);
  out.layout.initial = std::move(best_initial);
  out.layout.final = std::move(best.final_map);
  out.layout.noise_score = best_score;
  out.measured_logical = std::move(measured_logical);
  return out;
}

Counts unpermute_counts(const Counts& physical, const RoutedCircuit& routed) {
  // physical bitstrings cover measured physical qubits ascending
  std::vector<int> measured_phys;
  for (int l : routed.measured_logical) measured_phys.push_back(routed.layout.final[l]);
  std::vector<int> sorted_phys = measured_phys;
  std::sort(sorted_phys.begin(), sorted_phys.end());
  std::vector<int> char_of_logical(routed.measured_logical.size());
  for (std::size_t i = 0; i < measured_phys.size(); ++i) {
    auto it = std::lower_bound(sorted_phys.begin(), sorted_phys.end(), measured_phys[i]);
    char_of_logical[i] = static_cast<int>(it - sorted_phys.begin());
  }
  Counts out;
  for (const auto& [bits, count] : physical) {
    std::string logical_bits(routed.measured_logical.size(), '0');
    for (std::size_t i = 0; i < char_of_logical.size(); ++i)
      logical_bits[i] = bits.at(char_of_logical[i]);
    out[logical_bits] += count;
  }
  return out;
}

}  // namespace qpubench
