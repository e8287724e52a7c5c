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

#include <vector>

#include "qpubench/circuit.hpp"
#include "qpubench/device.hpp"

namespace qpubench {

/// Idle gap on one qubit between consecutive operations.
struct IdleWindow {
  int qubit;
  double start;
  double duration;
  std::size_t before_instruction;  // index of the op this gap precedes
};

struct Schedule {
  std::vector<double> start_times;  // per instruction, seconds
  std::vector<IdleWindow> idle_windows;
  double total_duration = 0.0;
};

/// As-soon-as-possible start times on per-qubit timelines. RZ is free,
/// BARRIER synchronizes its operands (all qubits when empty). Gaps between
/// consecutive operations on a qubit become idle windows.
Schedule schedule_asap(const Circuit& c, const DeviceModel& device);

}  // namespace qpubench
