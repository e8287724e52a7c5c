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

#include "qpubench/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qpubench/gates.hpp"
#include "qpubench/kernels.hpp"
#include "qpubench/schedule.hpp"
#include "qpubench/statevector.hpp"

namespace qpubench {

double error_to_depolarizing(double r, int d) {
  if (d != 2 && d != 4) throw InvalidArgument("error_to_depolarizing: d must be 2 or 4");
  double limit = static_cast<double>(d - 1) / d;
  if (r < 0.0 || r >= limit)
    throw InvalidArgument("error_to_depolarizing: r out of [0, (d-1)/d)");
  return r * d / (d - 1);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFluxReferencePhase = 0.1;  // rad, coarse static model

struct Step {
  enum class Kind { Prx, Rz, Cz, Depol1, Depol2, Idle } kind;
  int a = -1, b = -1;           // support-local bit indices
  Mat2 m{};                     // Prx matrix
  c64 d0{1, 0}, d1{1, 0};       // Rz diagonal
  double lam = 0.0;             // depolarizing probability
  double px = 0, py = 0, pz = 0;  // idle twirl probabilities
};

struct Program {
  std::vector<Step> steps;
  std::vector<int> support;        // device qubits backing statevector bits
  std::vector<int> bit_of_device;  // device qubit -> bit index or -1
  std::vector<int> measured;       // device qubits, ascending
  int n_bits = 0;
  bool has_stochastic_sites = false;
};

/// One sampled Pauli fault: which site fired and which Pauli it drew.
/// Packed so realizations can key a dedup map.
using Event = std::uint32_t;
inline Event make_event(std::uint32_t step_idx, std::uint32_t pauli) {
  return (step_idx << 5) | pauli;
}
inline std::uint32_t event_step(Event e) { return e >> 5; }
inline std::uint32_t event_pauli(Event e) { return e & 31; }

Program compile_program(const Circuit& c, const DeviceModel& dev, const NoiseConfig& noise) {
  c.validate();
  if (!c.is_native()) throw InvalidArgument("run_noisy requires a native circuit");
  if (c.num_qubits > dev.num_qubits())
    throw InvalidArgument("circuit does not fit the device");

  Program prog;
  prog.measured = c.measured_qubits();

  // Statevector support: gate qubits plus crosstalk spectators.
  std::vector<char> in_support(dev.num_qubits(), 0);
  for (int q : c.gate_support()) in_support[q] = 1;
  if (noise.drive_crosstalk) {
    for (const auto& ins : c.instructions) {
      if (ins.kind == OpKind::PRX) {
        int q = ins.operands[0];
        for (int j : dev.topology.neighbors(q))
          if (dev.drive_xtalk(j, q) != 0.0) in_support[j] = 1;
      } else if (ins.kind == OpKind::CZ) {
        for (int target : ins.operands)
          for (int j : dev.topology.neighbors(target)) {
            bool operand = j == ins.operands[0] || j == ins.operands[1];
            if (!operand && dev.flux_xtalk(j, target) != 0.0) in_support[j] = 1;
          }
      }
    }
  }
  prog.bit_of_device.assign(dev.num_qubits(), -1);
  for (int q = 0; q < dev.num_qubits(); ++q)
    if (in_support[q]) {
      prog.bit_of_device[q] = static_cast<int>(prog.support.size());
      prog.support.push_back(q);
    }
  prog.n_bits = static_cast<int>(prog.support.size());
  if (prog.n_bits > kMaxSimQubits)
    throw InvalidArgument("run_noisy: statevector support exceeds " +
                          std::to_string(kMaxSimQubits) + " qubits");

  // Idle windows keyed by the instruction they precede.
  Schedule sched = schedule_asap(c, dev);
  std::vector<std::vector<const IdleWindow*>> idles(c.instructions.size() + 1);
  for (const auto& w : sched.idle_windows) idles[w.before_instruction].push_back(&w);

  auto emit_idle = [&](const IdleWindow& w) {
    if (!noise.idle_decoherence) return;
    int q = w.qubit;
    double damp = 1.0 - std::exp(-w.duration / dev.t1[q]);
    double deph = 1.0 - std::exp(-w.duration / dev.t2[q]);
    Step s;
    s.kind = Step::Kind::Idle;
    s.a = prog.bit_of_device[q];
    s.px = damp / 4.0;
    s.py = damp / 4.0;
    s.pz = std::max(0.0, deph / 2.0 - damp / 4.0);
    if (s.a >= 0 && s.px + s.py + s.pz > 0) {
      prog.steps.push_back(s);
      prog.has_stochastic_sites = true;
    }
  };

  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    for (const IdleWindow* w : idles[i]) emit_idle(*w);
    const auto& ins = c.instructions[i];
    switch (ins.kind) {
      case OpKind::PRX: {
        int q = ins.operands[0];
        Step s;
        s.kind = Step::Kind::Prx;
        s.a = prog.bit_of_device[q];
        s.m = prx_matrix(ins.params[0], ins.params[1]);
        prog.steps.push_back(s);
        if (noise.drive_crosstalk) {
          for (int j : dev.topology.neighbors(q)) {
            double ratio = dev.drive_xtalk(j, q);
            if (ratio == 0.0) continue;
            Step x;
            x.kind = Step::Kind::Prx;
            x.a = prog.bit_of_device[j];
            x.m = prx_matrix(ratio * ins.params[0], ins.params[1]);
            prog.steps.push_back(x);
          }
        }
        if (noise.gate_depolarizing) {
          double lam = error_to_depolarizing(dev.err_1q[q], 2);
          if (lam > 0) {
            Step d;
            d.kind = Step::Kind::Depol1;
            d.a = prog.bit_of_device[q];
            d.lam = lam;
            prog.steps.push_back(d);
            prog.has_stochastic_sites = true;
          }
        }
        break;
      }
      case OpKind::RZ: {
        Step s;
        s.kind = Step::Kind::Rz;
        s.a = prog.bit_of_device[ins.operands[0]];
        s.d0 = std::exp(c64(0, -ins.params[0] / 2));
        s.d1 = std::exp(c64(0, ins.params[0] / 2));
        prog.steps.push_back(s);
        break;
      }
      case OpKind::CZ: {
        int qa = ins.operands[0], qb = ins.operands[1];
        if (dev.coupler_index(qa, qb) < 0)
          throw InvalidArgument("CZ operands are not a device coupler: " + std::to_string(qa) +
                                "," + std::to_string(qb));
        Step s;
        s.kind = Step::Kind::Cz;
        s.a = prog.bit_of_device[qa];
        s.b = prog.bit_of_device[qb];
        prog.steps.push_back(s);
        if (noise.drive_crosstalk) {
          for (int target : {qa, qb}) {
            for (int j : dev.topology.neighbors(target)) {
              if (j == qa || j == qb) continue;
              double ratio = dev.flux_xtalk(j, target);
              if (ratio == 0.0) continue;
              double angle = kTwoPi * ratio * kFluxReferencePhase;
              Step x;
              x.kind = Step::Kind::Rz;
              x.a = prog.bit_of_device[j];
              x.d0 = std::exp(c64(0, -angle / 2));
              x.d1 = std::exp(c64(0, angle / 2));
              prog.steps.push_back(x);
            }
          }
        }
        if (noise.gate_depolarizing) {
          double lam = error_to_depolarizing(dev.cz_error(qa, qb), 4);
          if (lam > 0) {
            Step d;
            d.kind = Step::Kind::Depol2;
            d.a = prog.bit_of_device[qa];
            d.b = prog.bit_of_device[qb];
            d.lam = lam;
            prog.steps.push_back(d);
            prog.has_stochastic_sites = true;
          }
        }
        break;
      }
      case OpKind::MEASURE:
      case OpKind::BARRIER:
        break;
      default:
        throw InvalidArgument("run_noisy: unexpected instruction kind");
    }
  }
  for (const IdleWindow* w : idles[c.instructions.size()]) emit_idle(*w);
  return prog;
}

void apply_pauli(Statevector& sv, int bit, std::uint32_t p) {
  static const Mat2 kX = x_matrix();
  static const Mat2 kY = y_matrix();
  switch (p) {
    case 1:
      sv.apply_1q(bit, kX);
      break;
    case 2:
      sv.apply_1q(bit, kY);
      break;
    case 3:
      kernels::active_ops().apply_diag_1q(sv.data(), sv.size(), bit, c64(1), c64(-1));
      break;
    default:
      break;
  }
}

struct ShotOutcome {
  std::uint64_t shot;
  std::string bits;
};

/// Executes shots [begin, end), grouping identical fault realizations so the
/// statevector evolves once per distinct trajectory.
void run_shard(const Program& prog, const DeviceModel& dev, const NoiseConfig& noise,
               std::uint64_t begin, std::uint64_t end, Counts& out) {
  const auto& ops = kernels::active_ops();
  std::map<std::vector<Event>, std::vector<std::uint64_t>> groups;

  for (std::uint64_t shot = begin; shot < end; ++shot) {
    std::vector<Event> events;
    if (prog.has_stochastic_sites) {
      Rng rng = make_rng(derive_seed(derive_seed(noise.seed, shot), "events"));
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      for (std::uint32_t idx = 0; idx < prog.steps.size(); ++idx) {
        const Step& s = prog.steps[idx];
        if (s.kind == Step::Kind::Depol1) {
          if (u01(rng) < s.lam) {
            auto p = static_cast<std::uint32_t>(rng() & 3);
            if (p != 0) events.push_back(make_event(idx, p));
          }
        } else if (s.kind == Step::Kind::Depol2) {
          if (u01(rng) < s.lam) {
            auto p = static_cast<std::uint32_t>(rng() & 15);
            if (p != 0) events.push_back(make_event(idx, p));
          }
        } else if (s.kind == Step::Kind::Idle) {
          double u = u01(rng);
          if (u < s.px)
            events.push_back(make_event(idx, 1));
          else if (u < s.px + s.py)
            events.push_back(make_event(idx, 2));
          else if (u < s.px + s.py + s.pz)
            events.push_back(make_event(idx, 3));
        }
      }
    }
    groups[std::move(events)].push_back(shot);
  }

  const int n_bits = prog.n_bits;
  Statevector sv(std::max(n_bits, 0));
  std::vector<double> prefix;

  for (const auto& [events, shots_in_group] : groups) {
    std::string bits(prog.measured.size(), '0');
    if (n_bits > 0) {
      sv.reset_to_zero_state();
      std::size_t next_event = 0;
      for (std::uint32_t idx = 0; idx < prog.steps.size(); ++idx) {
        const Step& s = prog.steps[idx];
        switch (s.kind) {
          case Step::Kind::Prx:
            sv.apply_1q(s.a, s.m);
            break;
          case Step::Kind::Rz:
            ops.apply_diag_1q(sv.data(), sv.size(), s.a, s.d0, s.d1);
            break;
          case Step::Kind::Cz:
            sv.apply_cz(s.a, s.b);
            break;
          case Step::Kind::Depol1:
          case Step::Kind::Idle:
            if (next_event < events.size() && event_step(events[next_event]) == idx) {
              apply_pauli(sv, s.a, event_pauli(events[next_event]));
              ++next_event;
            }
            break;
          case Step::Kind::Depol2:
            if (next_event < events.size() && event_step(events[next_event]) == idx) {
              std::uint32_t p = event_pauli(events[next_event]);
              apply_pauli(sv, s.a, p & 3u);
              apply_pauli(sv, s.b, p >> 2);
              ++next_event;
            }
            break;
        }
      }
      double norm = sv.norm_sq();
      if (std::abs(norm - 1.0) > 1e-8)
        throw BackendError("trajectory norm drifted: " + std::to_string(norm));

      prefix.resize(sv.size());
      kernels::active_ops().abs_sq(sv.data(), prefix.data(), sv.size());
      for (std::size_t k = 1; k < prefix.size(); ++k) prefix[k] += prefix[k - 1];
    }

    for (std::uint64_t shot : shots_in_group) {
      Rng rng = make_rng(derive_seed(derive_seed(noise.seed, shot), "measure"));
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      std::uint64_t basis = 0;
      if (n_bits > 0) {
        double target = u01(rng) * prefix.back();
        basis = std::lower_bound(prefix.begin(), prefix.end(), target) - prefix.begin();
        if (basis >= prefix.size()) basis = prefix.size() - 1;
      }
      for (std::size_t mi = 0; mi < prog.measured.size(); ++mi) {
        int q = prog.measured[mi];
        int bitpos = prog.bit_of_device[q];
        int bit = bitpos >= 0 ? static_cast<int>((basis >> bitpos) & 1) : 0;
        if (noise.readout_flip) {
          double eps = bit ? dev.ro_err[q].eps10 : dev.ro_err[q].eps01;
          if (u01(rng) < eps) bit ^= 1;
        }
        bits[mi] = static_cast<char>('0' + bit);
      }
      ++out[bits];
    }
  }
}

}  // namespace

Counts run_noisy(const Circuit& circuit, const DeviceModel& device, const NoiseConfig& noise,
                 std::uint64_t shots) {
  if (shots < 1) throw InvalidArgument("run_noisy: shots must be >= 1");
  Program prog = compile_program(circuit, device, noise);

  int workers = std::max(1, noise.workers);
  if (static_cast<std::uint64_t>(workers) > shots) workers = static_cast<int>(shots);
  if (workers == 1) {
    Counts counts;
    run_shard(prog, device, noise, 0, shots, counts);
    return counts;
  }
  std::vector<Counts> partial(workers);
  std::vector<std::thread> threads;
  std::uint64_t chunk = (shots + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::uint64_t b = w * chunk;
    std::uint64_t e = std::min(shots, b + chunk);
    if (b >= e) break;
    threads.emplace_back([&, w, b, e] { run_shard(prog, device, noise, b, e, partial[w]); });
  }
  for (auto& t : threads) t.join();
  Counts counts;
  for (auto& p : partial)
    for (auto& [k, v] : p) counts[k] += v;
  return counts;
}

}  // namespace qpubench
