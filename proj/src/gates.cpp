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

#include "qpubench/gates.hpp"

#include <cmath>
#include <numbers>

namespace qpubench {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;

double wrap_angle(double a) {  // into (-pi, pi]
  a = std::fmod(a, 2 * kPi);
  if (a <= -kPi) a += 2 * kPi;
  if (a > kPi) a -= 2 * kPi;
  return a;
}
}  // namespace

Mat2 mat2_identity() { return {1, 0, 0, 1}; }
Mat4 mat4_identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i * 4 + i] = 1;
  return m;
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j) r[i * 2 + j] += a[i * 2 + k] * b[k * 2 + j];
  return r;
}

Mat4 mat4_mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      c64 aik = a[i * 4 + k];
      if (aik == c64(0)) continue;
      for (int j = 0; j < 4; ++j) r[i * 4 + j] += aik * b[k * 4 + j];
    }
  return r;
}

Mat2 mat2_dagger(const Mat2& a) {
  return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

Mat4 mat4_dagger(const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i * 4 + j] = std::conj(a[j * 4 + i]);
  return r;
}

Mat4 kron_le(const Mat2& lo, const Mat2& hi) {
  Mat4 r{};
  for (int r1 = 0; r1 < 2; ++r1)
    for (int r0 = 0; r0 < 2; ++r0)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int c0 = 0; c0 < 2; ++c0)
          r[(r0 + 2 * r1) * 4 + (c0 + 2 * c1)] = lo[r0 * 2 + c0] * hi[r1 * 2 + c1];
  return r;
}

namespace {
template <std::size_t N>
double distance_up_to_phase(const std::array<c64, N>& a, const std::array<c64, N>& b) {
  // Optimal global phase aligns the largest inner product.
  c64 inner = 0;
  for (std::size_t i = 0; i < N; ++i) inner += std::conj(b[i]) * a[i];
  c64 phase = std::abs(inner) > kTol ? inner / std::abs(inner) : c64(1);
  double worst = 0;
  for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::abs(a[i] - phase * b[i]));
  return worst;
}
}  // namespace

double mat2_distance_up_to_phase(const Mat2& a, const Mat2& b) {
  return distance_up_to_phase(a, b);
}
double mat4_distance_up_to_phase(const Mat4& a, const Mat4& b) {
  return distance_up_to_phase(a, b);
}

Mat2 prx_matrix(double theta, double phase) {
  const c64 i(0, 1);
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {c, -i * std::exp(c64(0, -phase)) * s, -i * std::exp(c64(0, phase)) * s, c};
}

Mat2 rz_matrix(double theta) {
  return {std::exp(c64(0, -theta / 2)), 0, 0, std::exp(c64(0, theta / 2))};
}

Mat2 h_matrix() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}
Mat2 x_matrix() { return {0, 1, 1, 0}; }
Mat2 y_matrix() { return {0, c64(0, -1), c64(0, 1), 0}; }
Mat2 z_matrix() { return {1, 0, 0, -1}; }
Mat2 s_matrix() { return {1, 0, 0, c64(0, 1)}; }

Mat4 cz_matrix() {
  Mat4 m = mat4_identity();
  m[15] = -1;
  return m;
}

Mat4 cnot_matrix() {
  // operands [control, target]; control = low bit: flips index 1 <-> 3.
  Mat4 m{};
  m[0 * 4 + 0] = 1;
  m[3 * 4 + 1] = 1;
  m[2 * 4 + 2] = 1;
  m[1 * 4 + 3] = 1;
  return m;
}

Mat4 swap_matrix() {
  Mat4 m{};
  m[0 * 4 + 0] = 1;
  m[2 * 4 + 1] = 1;
  m[1 * 4 + 2] = 1;
  m[3 * 4 + 3] = 1;
  return m;
}

Native1q decompose_1q(const Mat2& u) {
  // Normalize to SU(2).
  c64 det = u[0] * u[3] - u[1] * u[2];
  c64 corr = std::exp(c64(0, -std::arg(det) / 2.0));
  Mat2 v = {u[0] * corr, u[1] * corr, u[2] * corr, u[3] * corr};

  double c = std::abs(v[0]);
  double s = std::abs(v[2]);
  Native1q out;
  if (s < kTol) {
    out.theta = 0;
    out.rz = wrap_angle(2.0 * std::arg(v[3]));
    return out;
  }
  if (c < kTol) {
    out.theta = kPi;
    out.rz = 0;
    out.phase = wrap_angle((std::arg(v[2]) - std::arg(v[1])) / 2.0);
    return out;
  }
  out.theta = 2.0 * std::atan2(s, c);
  double a00 = std::arg(v[0]), a11 = std::arg(v[3]), a10 = std::arg(v[2]);
  double lambda = a11 - a00;
  double delta = 0.5 * (a00 + a11);
  out.rz = wrap_angle(lambda);
  out.phase = wrap_angle(a10 - delta + lambda / 2.0 + kPi / 2.0);
  return out;
}

void append_native_1q(Circuit& c, int q, const Native1q& n) {
  if (std::abs(n.rz) > kTol) c.rz(q, n.rz);
  double theta = n.theta, phase = n.phase;
  // Normalize theta into [0, pi] (PRX(-t, p) == PRX(t, p + pi)).
  theta = wrap_angle(theta);
  if (theta < 0) {
    theta = -theta;
    phase = wrap_angle(phase + kPi);
  }
  if (theta > kTol) c.prx(q, theta, phase);
}

namespace {

void append_1q_matrix(Circuit& out, int q, const Mat2& m) {
  append_native_1q(out, q, decompose_1q(m));
}

void append_cnot(Circuit& out, int control, int target) {
  append_1q_matrix(out, target, h_matrix());
  out.cz(control, target);
  append_1q_matrix(out, target, h_matrix());
}

}  // namespace

Circuit decompose_to_native(const Circuit& in) {
  in.validate();
  Circuit out(in.num_qubits, in.name);
  for (const auto& ins : in.instructions) {
    switch (ins.kind) {
      case OpKind::PRX:
      case OpKind::RZ:
      case OpKind::CZ:
      case OpKind::MEASURE:
      case OpKind::BARRIER:
        out.instructions.push_back(ins);
        break;
      case OpKind::H:
        append_1q_matrix(out, ins.operands[0], h_matrix());
        break;
      case OpKind::X:
        append_1q_matrix(out, ins.operands[0], x_matrix());
        break;
      case OpKind::U1Q:
        append_1q_matrix(out, ins.operands[0], ins.matrix_1q());
        break;
      case OpKind::CNOT:
        append_cnot(out, ins.operands[0], ins.operands[1]);
        break;
      case OpKind::SWAP:
        append_cnot(out, ins.operands[0], ins.operands[1]);
        append_cnot(out, ins.operands[1], ins.operands[0]);
        append_cnot(out, ins.operands[0], ins.operands[1]);
        break;
      case OpKind::U2Q: {
        Mat4 m = ins.matrix_2q();
        append_native_2q(out, ins.operands[0], ins.operands[1], m);
        break;
      }
    }
  }
  return collapse_1q_runs(out);
}

}  // namespace qpubench
