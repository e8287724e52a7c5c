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

#include "qpubench/schedule.hpp"

#include <algorithm>

namespace qpubench {

Schedule schedule_asap(const Circuit& c, const DeviceModel& device) {
  if (!c.is_native()) throw InvalidArgument("schedule_asap requires a native circuit");
  Schedule sched;
  sched.start_times.resize(c.instructions.size(), 0.0);
  // cursor: end of the last physical op per qubit; floor: barrier constraint.
  std::vector<double> cursor(c.num_qubits, 0.0);
  std::vector<double> floor_(c.num_qubits, 0.0);
  std::vector<char> has_op(c.num_qubits, 0);

  auto advance = [&](std::size_t idx, const std::vector<int>& qs, double duration) {
    double start = 0.0;
    for (int q : qs) start = std::max({start, cursor[q], floor_[q]});
    sched.start_times[idx] = start;
    for (int q : qs) {
      // Leading idleness is not a window: the qubit still sits in its fresh
      // ground state until its first operation.
      if (has_op[q] && start > cursor[q] + 1e-15)
        sched.idle_windows.push_back({q, cursor[q], start - cursor[q], idx});
      cursor[q] = start + duration;
      has_op[q] = 1;
    }
  };

  for (std::size_t i = 0; i < c.instructions.size(); ++i) {
    const auto& ins = c.instructions[i];
    switch (ins.kind) {
      case OpKind::PRX:
        advance(i, ins.operands, device.dur_prx);
        break;
      case OpKind::RZ:
        sched.start_times[i] = std::max(cursor[ins.operands[0]], floor_[ins.operands[0]]);
        break;
      case OpKind::CZ:
        advance(i, ins.operands, device.dur_cz);
        break;
      case OpKind::MEASURE:
        advance(i, ins.operands, device.dur_ro);
        break;
      case OpKind::BARRIER: {
        std::vector<int> qs = ins.operands;
        if (qs.empty())
          for (int q = 0; q < c.num_qubits; ++q) qs.push_back(q);
        double sync = 0.0;
        for (int q : qs) sync = std::max({sync, cursor[q], floor_[q]});
        sched.start_times[i] = sync;
        for (int q : qs) floor_[q] = sync;
        break;
      }
      default:
        throw InvalidArgument("schedule_asap: non-native instruction");
    }
  }
  sched.total_duration = 0.0;
  for (int q = 0; q < c.num_qubits; ++q)
    sched.total_duration = std::max(sched.total_duration, cursor[q]);
  return sched;
}

}  // namespace qpubench
