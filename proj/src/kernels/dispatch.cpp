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

#include "qpubench/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace qpubench::kernels {

#ifdef QPB_HAVE_AVX2_BUILD
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#ifdef QPB_HAVE_AVX2_BUILD
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return avx2_ops_impl();
#endif
  return nullptr;
}

namespace {

const Ops* pick_default() {
  if (const char* env = std::getenv("QPUBENCH_SIMD")) {
    std::string want = env;
    if (want == "scalar") return &scalar_ops();
    if (want == "avx2") {
      if (const Ops* ops = avx2_ops()) return ops;
      throw InvalidArgument("QPUBENCH_SIMD=avx2 requested but AVX2 is unavailable");
    }
    if (!want.empty()) throw InvalidArgument("unknown QPUBENCH_SIMD value: " + want);
  }
  if (const Ops* ops = avx2_ops()) return ops;
  return &scalar_ops();
}

std::atomic<const Ops*> g_forced{nullptr};

}  // namespace

const Ops& active_ops() {
  if (const Ops* forced = g_forced.load(std::memory_order_relaxed)) return *forced;
  static const Ops* chosen = pick_default();
  return *chosen;
}

void force_backend(const std::string& name) {
  if (name.empty()) {
    g_forced.store(nullptr, std::memory_order_relaxed);
  } else if (name == "scalar") {
    g_forced.store(&scalar_ops(), std::memory_order_relaxed);
  } else if (name == "avx2") {
    const Ops* ops = avx2_ops();
    if (!ops) throw InvalidArgument("AVX2 backend unavailable on this CPU/build");
    g_forced.store(ops, std::memory_order_relaxed);
  } else {
    throw InvalidArgument("unknown kernel backend: " + name);
  }
}

}  // namespace qpubench::kernels
