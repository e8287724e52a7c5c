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

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "qpubench/gates.hpp"

namespace qpubench {
namespace {

using Eigen::Matrix4cd;
using Eigen::Matrix4d;
using Eigen::Vector4d;

constexpr double kPi = std::numbers::pi;

Matrix4cd to_eigen(const Mat4& m) {
  Matrix4cd e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = m[i * 4 + j];
  return e;
}

Mat4 from_eigen(const Matrix4cd& e) {
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i * 4 + j] = e(i, j);
  return m;
}

/// Magic (Bell-like) basis; conjugation maps SU(2)xSU(2) to SO(4) and the
/// canonical interactions to diagonals.
const Matrix4cd& magic_basis() {
  static const Matrix4cd q = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const c64 i(0, 1);
    Matrix4cd m = Matrix4cd::Zero();
    // columns: (e0+e3), -i(e0-e3), (e1-e2), -i(e1+e2), each * s
    m(0, 0) = s;       m(3, 0) = s;
    m(0, 1) = -i * s;  m(3, 1) = i * s;
    m(1, 2) = s;       m(2, 2) = -s;
    m(1, 3) = -i * s;  m(2, 3) = -i * s;
    return m;
  }();
  return q;
}

/// Rows of the linear map from (ax, ay, az) to the magic-basis diagonal
/// phases of exp(i(ax XX + ay YY + az ZZ)).
const Eigen::Matrix<double, 4, 3>& interaction_diagonals() {
  static const Eigen::Matrix<double, 4, 3> r = [] {
    const Matrix4cd& q = magic_basis();
    Eigen::Matrix<double, 4, 3> out;
    const Mat4 paulis[3] = {kron_le(x_matrix(), x_matrix()), kron_le(y_matrix(), y_matrix()),
                            kron_le(z_matrix(), z_matrix())};
    for (int c = 0; c < 3; ++c) {
      Matrix4cd d = q.adjoint() * to_eigen(paulis[c]) * q;
      for (int i = 0; i < 4; ++i) out(i, c) = d(i, i).real();
    }
    return out;
  }();
  return r;
}

/// Orthogonal simultaneous diagonalization of two commuting real symmetric
/// matrices: returns P with P^T A P and P^T B P diagonal.
Matrix4d simultaneous_diagonalize(const Matrix4d& a, const Matrix4d& b, double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix4d> es(a);
  Matrix4d p = es.eigenvectors();
  Vector4d ev = es.eigenvalues();
  int i = 0;
  while (i < 4) {
    int j = i + 1;
    while (j < 4 && ev[j] - ev[i] < cluster_tol) ++j;
    if (j - i > 1) {
      Eigen::MatrixXd pc = p.middleCols(i, j - i);
      Eigen::MatrixXd br = pc.transpose() * b * pc;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(br);
      p.middleCols(i, j - i) = pc * es2.eigenvectors();
    }
    i = j;
  }
  return p;
}

double offdiag_norm(const Matrix4cd& m) {
  double acc = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) acc = std::max(acc, std::abs(m(i, j)));
  return acc;
}

}  // namespace

Mat4 canonical_gate_matrix(const KakCoefficients& k) {
  const Matrix4cd& q = magic_basis();
  const auto& r = interaction_diagonals();
  Eigen::Vector3d abc(k.ax, k.ay, k.az);
  Vector4d mu = r * abc;
  Matrix4cd d = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) d(i, i) = std::exp(c64(0, mu[i]));
  return from_eigen(q * d * q.adjoint());
}

std::pair<Mat2, Mat2> factor_tensor_product(const Mat4& u) {
  // index (r0 + 2 r1, c0 + 2 c1) = lo[r0][c0] * hi[r1][c1]
  int bi = 0, bj = 0;
  double best = -1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (std::abs(u[i * 4 + j]) > best) {
        best = std::abs(u[i * 4 + j]);
        bi = i;
        bj = j;
      }
  const int r1 = bi >> 1, c1 = bj >> 1;
  const int r0 = bi & 1, c0 = bj & 1;
  Mat2 lo, hi;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) lo[a * 2 + b] = u[(a + 2 * r1) * 4 + (b + 2 * c1)];
  // Normalize lo to unit determinant so hi entries come out consistent.
  c64 det = lo[0] * lo[3] - lo[1] * lo[2];
  if (std::abs(det) < 1e-9) throw InvalidArgument("tensor factor is singular");
  c64 scale = std::sqrt(det);
  for (auto& z : lo) z /= scale;
  c64 pivot = lo[r0 * 2 + c0];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) hi[a * 2 + b] = u[(r0 + 2 * a) * 4 + (c0 + 2 * b)] / pivot;
  if (mat4_distance_up_to_phase(kron_le(lo, hi), u) > 1e-8)
    throw InvalidArgument("matrix is not a tensor product");
  return {lo, hi};
}

KakDecomposition kak_decompose(const Mat4& u_in) {
  const Matrix4cd& q = magic_basis();
  Matrix4cd u = to_eigen(u_in);
  // Normalize to SU(4).
  c64 det = u.determinant();
  u *= std::exp(c64(0, -std::arg(det) / 4.0));

  Matrix4cd v = q.adjoint() * u * q;
  Matrix4cd t = v.transpose() * v;
  Matrix4d re = t.real().selfadjointView<Eigen::Lower>();
  Matrix4d im = t.imag().selfadjointView<Eigen::Lower>();

  Matrix4d p;
  bool ok = false;
  for (double tol : {1e-6, 1e-3, 1e-1}) {
    p = simultaneous_diagonalize(re, im, tol);
    Matrix4cd check = p.transpose() * t * p;
    if (offdiag_norm(check) < 1e-9) {
      ok = true;
      break;
    }
    // Same with roles swapped, helps when re is near-degenerate but im is not.
    p = simultaneous_diagonalize(im, re, tol);
    check = p.transpose() * t * p;
    if (offdiag_norm(check) < 1e-9) {
      ok = true;
      break;
    }
  }
  if (!ok) throw InvalidArgument("kak: failed to diagonalize interaction content");

  if (p.determinant() < 0) p.col(3) *= -1.0;
  Matrix4d o2 = p.transpose();

  Matrix4cd d2 = o2 * t * o2.transpose();
  Vector4d mu;
  Matrix4cd dinv = Matrix4cd::Zero();
  Matrix4cd d = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    mu[i] = 0.5 * std::arg(d2(i, i));
    d(i, i) = std::exp(c64(0, mu[i]));
    dinv(i, i) = std::exp(c64(0, -mu[i]));
  }
  Matrix4cd o1c = v * o2.transpose() * dinv;
  if (o1c.imag().cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidArgument("kak: left factor is not real orthogonal");
  Matrix4d o1 = o1c.real();
  if (o1.determinant() < 0) {
    // Shift one branch by pi; keeps v = o1 d o2 while restoring det(o1) = +1.
    o1.col(0) *= -1.0;
    mu[0] += kPi;
    d(0, 0) = -d(0, 0);
  }

  // Remove the mean phase (global phase) so mu lies in the span of the
  // interaction diagonals, then solve exactly for the coefficients.
  double mean = mu.sum() / 4.0;
  for (int i = 0; i < 4; ++i) mu[i] -= mean;
  const auto& r = interaction_diagonals();
  Eigen::Vector3d abc = (r.transpose() * r).ldlt().solve(r.transpose() * mu);
  if ((r * abc - mu).cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidArgument("kak: interaction phases outside canonical span");

  KakDecomposition out;
  out.k = {abc[0], abc[1], abc[2]};
  Mat4 k1 = from_eigen(q * o1.cast<c64>() * q.adjoint());
  Mat4 k2 = from_eigen(q * o2.cast<c64>() * q.adjoint());
  std::tie(out.l0, out.l1) = factor_tensor_product(k1);
  std::tie(out.r0, out.r1) = factor_tensor_product(k2);
  return out;
}

namespace {

void append_1q(Circuit& c, int q, const Mat2& m) { append_native_1q(c, q, decompose_1q(m)); }

void append_cx(Circuit& c, int control, int target) {
  append_1q(c, target, h_matrix());
  c.cz(control, target);
  append_1q(c, target, h_matrix());
}

/// exp(i(ax XX + ay YY + az ZZ)) on (a=low, b=high) as native gates.
/// Built from one CX conjugation and a multiplexed X rotation.
void append_canonical(Circuit& c, int qa, int qb, const KakCoefficients& k) {
  append_cx(c, qa, qb);
  append_1q(c, qa, h_matrix());
  append_cx(c, qa, qb);
  c.rz(qb, 2.0 * k.ay);
  append_cx(c, qa, qb);
  append_1q(c, qa, h_matrix());
  c.prx(qa, -2.0 * k.ax, 0.0);
  c.rz(qb, -2.0 * k.az);
  append_cx(c, qa, qb);
}

}  // namespace

void append_native_2q(Circuit& c, int a, int b, const Mat4& u) {
  KakDecomposition kd = kak_decompose(u);
  append_1q(c, a, kd.r0);
  append_1q(c, b, kd.r1);
  append_canonical(c, a, b, kd.k);
  append_1q(c, a, kd.l0);
  append_1q(c, b, kd.l1);
}

Circuit collapse_1q_runs(const Circuit& in) {
  if (!in.is_native()) throw InvalidArgument("collapse_1q_runs requires a native circuit");
  Circuit out(in.num_qubits, in.name);
  std::vector<Mat2> pending(in.num_qubits, mat2_identity());
  std::vector<char> dirty(in.num_qubits, 0);

  auto is_diagonal = [](const Mat2& m) {
    return std::abs(m[1]) < 1e-12 && std::abs(m[2]) < 1e-12;
  };
  auto flush = [&](int q, bool before_measure) {
    if (!dirty[q]) return;
    if (!(before_measure && is_diagonal(pending[q]))) append_1q(out, q, pending[q]);
    pending[q] = mat2_identity();
    dirty[q] = 0;
  };

  for (const auto& ins : in.instructions) {
    switch (ins.kind) {
      case OpKind::PRX:
        pending[ins.operands[0]] =
            mat2_mul(prx_matrix(ins.params[0], ins.params[1]), pending[ins.operands[0]]);
        dirty[ins.operands[0]] = 1;
        break;
      case OpKind::RZ:
        pending[ins.operands[0]] =
            mat2_mul(rz_matrix(ins.params[0]), pending[ins.operands[0]]);
        dirty[ins.operands[0]] = 1;
        break;
      case OpKind::CZ:
        // Diagonal runs commute with CZ and may stay pending.
        for (int q : ins.operands)
          if (!is_diagonal(pending[q])) flush(q, false);
        out.instructions.push_back(ins);
        break;
      case OpKind::MEASURE:
        flush(ins.operands[0], true);
        out.instructions.push_back(ins);
        break;
      case OpKind::BARRIER: {
        if (ins.operands.empty())
          for (int q = 0; q < in.num_qubits; ++q) flush(q, false);
        else
          for (int q : ins.operands) flush(q, false);
        out.instructions.push_back(ins);
        break;
      }
      default:
        throw InvalidArgument("collapse_1q_runs: unexpected instruction");
    }
  }
  for (int q = 0; q < in.num_qubits; ++q) flush(q, false);
  return out;
}

}  // namespace qpubench
