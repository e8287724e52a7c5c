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

#include "qpubench/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace qpubench {

namespace {

// global-phase-free fingerprint of a small matrix
template <std::size_t N>
std::string matrix_key(const std::array<c64, N>& m) {
  int pivot = -1;
  for (std::size_t i = 0; i < N; ++i)
    if (std::abs(m[i]) > 1e-6) {
      pivot = static_cast<int>(i);
      break;
    }
  c64 corr = std::abs(m[pivot]) / m[pivot];
  std::string key;
  key.reserve(N * 8);
  char buf[32];
  for (std::size_t i = 0; i < N; ++i) {
    c64 z = m[i] * corr;
    double re = std::abs(z.real()) < 1e-8 ? 0.0 : z.real();
    double im = std::abs(z.imag()) < 1e-8 ? 0.0 : z.imag();
    std::snprintf(buf, sizeof buf, "%.4f,%.4f;", re, im);
    key += buf;
  }
  return key;
}

int ybits_count(unsigned bits) {
  unsigned y = (bits & 0b0101) & ((bits & 0b1010) >> 1);  // x&z per qubit
  return std::popcount(y);
}

// sign bit of a physical +-Pauli stored in XZ form
unsigned pauli_sign_bit(const Pauli2& p) {
  unsigned residual = (p.phase + 4 - static_cast<unsigned>(ybits_count(p.bits))) % 4;
  // residual must be 0 (plus) or 2 (minus) for a Hermitian image
  return residual / 2;
}

Pauli2 make_physical(unsigned bits, unsigned sign_bit) {
  return {bits, (2 * sign_bit + static_cast<unsigned>(ybits_count(bits))) % 4};
}

}  // namespace

Pauli2 pauli_mul(const Pauli2& p, const Pauli2& q) {
  unsigned phase = (p.phase + q.phase) % 4;
  // reorder Z_p past X_q per qubit: (-1)^(z_p & x_q)
  if ((p.bits >> 1 & 1) && (q.bits >> 0 & 1)) phase = (phase + 2) % 4;
  if ((p.bits >> 3 & 1) && (q.bits >> 2 & 1)) phase = (phase + 2) % 4;
  return {p.bits ^ q.bits, phase};
}

Tableau2q Tableau2q::identity() {
  Tableau2q t;
  t.img[0] = make_physical(0b0001, 0);
  t.img[1] = make_physical(0b0010, 0);
  t.img[2] = make_physical(0b0100, 0);
  t.img[3] = make_physical(0b1000, 0);
  return t;
}

Pauli2 Tableau2q::apply(const Pauli2& p) const {
  Pauli2 acc{0, p.phase};
  // canonical generator order X0, Z0, X1, Z1 matches the XZ form
  for (int g = 0; g < 4; ++g)
    if (p.bits >> g & 1) acc = pauli_mul(acc, img[g]);
  return acc;
}

Tableau2q Tableau2q::then(const Tableau2q& next) const {
  Tableau2q out;
  for (int g = 0; g < 4; ++g) out.img[g] = next.apply(img[g]);
  return out;
}

Tableau2q Tableau2q::inverse() const {
  // bits map is GF(2)-linear; invert the 4x4 matrix whose column g is img[g]
  unsigned cols[4];
  for (int g = 0; g < 4; ++g) cols[g] = img[g].bits;
  // gaussian elimination on [M | I]
  unsigned m[4], inv[4];
  for (int r = 0; r < 4; ++r) {
    m[r] = 0;
    for (int g = 0; g < 4; ++g) m[r] |= ((cols[g] >> r) & 1u) << g;
    inv[r] = 1u << r;
  }
  for (int col = 0; col < 4; ++col) {
    int pivot = -1;
    for (int r = col; r < 4; ++r)
      if (m[r] >> col & 1) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw Error("tableau bits matrix is singular");
    std::swap(m[col], m[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < 4; ++r)
      if (r != col && (m[r] >> col & 1)) {
        m[r] ^= m[col];
        inv[r] ^= inv[col];
      }
  }
  Tableau2q out;
  for (int g = 0; g < 4; ++g) {
    unsigned bits = 0;
    for (int r = 0; r < 4; ++r) bits |= ((inv[r] >> g) & 1u) << r;
    Pauli2 probe{bits, 0};
    Pauli2 forward = apply(probe);
    // forward.bits == e_g; pick the inverse phase so the round trip is +1
    out.img[g] = {bits, (4 - forward.phase) % 4};
  }
  return out;
}

std::uint32_t Tableau2q::key() const {
  std::uint32_t k = 0;
  for (int g = 0; g < 4; ++g)
    k |= (img[g].bits | (pauli_sign_bit(img[g]) << 4)) << (5 * g);
  return k;
}

// ---------------------------------------------------------------------------
// single-qubit table

namespace {

// conjugate 2x2 pauli by u and identify as +-{X, Y, Z}
void conj_identify(const Mat2& u, const Mat2& p, std::uint8_t& bits, std::uint8_t& sign) {
  Mat2 img = mat2_mul(u, mat2_mul(p, mat2_dagger(u)));
  struct Cand {
    Mat2 m;
    std::uint8_t bits;
  };
  const Cand cands[3] = {{x_matrix(), 0b01}, {z_matrix(), 0b10}, {y_matrix(), 0b11}};
  for (auto& cand : cands) {
    bool plus = true, minus = true;
    for (int i = 0; i < 4; ++i) {
      if (std::abs(img[i] - cand.m[i]) > 1e-9) plus = false;
      if (std::abs(img[i] + cand.m[i]) > 1e-9) minus = false;
    }
    if (plus || minus) {
      bits = cand.bits;
      sign = minus ? 1 : 0;
      return;
    }
  }
  throw Error("matrix is not Clifford");
}

}  // namespace

Clifford1qTable::Clifford1qTable() {
  // BFS closure of {H, S}
  std::vector<Mat2> mats{mat2_identity()};
  std::map<std::string, int> seen{{matrix_key(mats[0]), 0}};
  const Mat2 gens[2] = {h_matrix(), s_matrix()};
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (auto& g : gens) {
      Mat2 prod = mat2_mul(g, mats[i]);
      std::string key = matrix_key(prod);
      if (!seen.count(key)) {
        seen[key] = static_cast<int>(mats.size());
        mats.push_back(prod);
      }
    }
  }
  if (mats.size() != 24) throw Error("1q Clifford closure has wrong size");

  for (int i = 0; i < 24; ++i) {
    Element& e = elements_[i];
    e.matrix = mats[i];
    e.native = decompose_1q(mats[i]);
    e.prx_count = e.native.theta != 0.0 ? 1 : 0;
    conj_identify(mats[i], x_matrix(), e.img_x_bits, e.img_x_sign);
    conj_identify(mats[i], z_matrix(), e.img_z_bits, e.img_z_sign);
  }
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b) {
      std::string key = matrix_key(mat2_mul(mats[a], mats[b]));
      auto it = seen.find(key);
      if (it == seen.end()) throw Error("1q Clifford composition left the group");
      compose_[a][b] = static_cast<std::uint8_t>(it->second);
    }
  identity_ = seen.at(matrix_key(mat2_identity()));
  for (int i = 0; i < 24; ++i) {
    std::string key = matrix_key(mat2_dagger(mats[i]));
    inverse_[i] = static_cast<std::uint8_t>(seen.at(key));
  }
  pauli_[0] = static_cast<std::uint8_t>(identity_);
  pauli_[1] = static_cast<std::uint8_t>(seen.at(matrix_key(x_matrix())));
  pauli_[2] = static_cast<std::uint8_t>(seen.at(matrix_key(y_matrix())));
  pauli_[3] = static_cast<std::uint8_t>(seen.at(matrix_key(z_matrix())));
}

const Clifford1qTable& Clifford1qTable::instance() {
  static const Clifford1qTable table;
  return table;
}

int Clifford1qTable::index_of_matrix(const Mat2& m) const {
  std::string key = matrix_key(m);
  for (int i = 0; i < 24; ++i)
    if (matrix_key(elements_[i].matrix) == key) return i;
  return -1;
}

double Clifford1qTable::mean_prx_per_clifford() const {
  int total = 0;
  for (auto& e : elements_) total += e.prx_count;
  return static_cast<double>(total) / 24.0;
}

// ---------------------------------------------------------------------------
// two-qubit table

Tableau2q tensor_tableau(int a_idx, int b_idx) {
  const auto& t1 = Clifford1qTable::instance();
  const auto& a = t1[a_idx];
  const auto& b = t1[b_idx];
  Tableau2q t;
  t.img[0] = make_physical(a.img_x_bits, a.img_x_sign);
  t.img[1] = make_physical(a.img_z_bits, a.img_z_sign);
  t.img[2] = make_physical(static_cast<unsigned>(b.img_x_bits) << 2, b.img_x_sign);
  t.img[3] = make_physical(static_cast<unsigned>(b.img_z_bits) << 2, b.img_z_sign);
  return t;
}

Tableau2q cz_tableau() {
  Tableau2q t;
  t.img[0] = make_physical(0b1001, 0);  // X0 -> X0 Z1
  t.img[1] = make_physical(0b0010, 0);  // Z0 -> Z0
  t.img[2] = make_physical(0b0110, 0);  // X1 -> Z0 X1
  t.img[3] = make_physical(0b1000, 0);  // Z1 -> Z1
  return t;
}

Tableau2q swap_tableau() {
  Tableau2q t;
  t.img[0] = make_physical(0b0100, 0);
  t.img[1] = make_physical(0b1000, 0);
  t.img[2] = make_physical(0b0001, 0);
  t.img[3] = make_physical(0b0010, 0);
  return t;
}

Tableau2q tableau_from_matrix(const Mat4& u) {
  const Mat2 paulis1[4] = {mat2_identity(), x_matrix(), y_matrix(), z_matrix()};
  Mat4 udg = mat4_dagger(u);
  Tableau2q t;
  const unsigned gens[4] = {0b0001, 0b0010, 0b0100, 0b1000};
  for (int g = 0; g < 4; ++g) {
    // generator as physical pauli pair
    int p0 = (g == 0) ? 1 : (g == 1) ? 3 : 0;
    int p1 = (g == 2) ? 1 : (g == 3) ? 3 : 0;
    Mat4 gen = kron_le(paulis1[p0], paulis1[p1]);
    Mat4 img = mat4_mul(u, mat4_mul(gen, udg));
    bool found = false;
    for (unsigned bits = 0; bits < 16 && !found; ++bits) {
      int q0 = static_cast<int>((bits & 1) + 2 * ((bits >> 1) & 1));
      int q1 = static_cast<int>(((bits >> 2) & 1) + 2 * ((bits >> 3) & 1));
      // XZ bit pairs (x, z): 00->I, 01(x)->X, 10(z)->Z, 11->Y
      const int phys[4] = {0, 1, 3, 2};
      Mat4 cand = kron_le(paulis1[phys[q0]], paulis1[phys[q1]]);
      for (unsigned sign = 0; sign < 2; ++sign) {
        double worst = 0;
        for (int i = 0; i < 16; ++i)
          worst = std::max(worst, std::abs(img[i] - (sign ? -cand[i] : cand[i])));
        if (worst < 1e-8) {
          t.img[g] = make_physical(bits, sign);
          found = true;
          break;
        }
      }
    }
    if (!found) throw Error("matrix is not a 2q Clifford");
    (void)gens;
  }
  return t;
}

Clifford2qTable::Clifford2qTable() {
  const auto& t1 = Clifford1qTable::instance();
  // W: Y rotation by pi/2
  w_index_ = t1.index_of_matrix(prx_matrix(M_PI / 2, M_PI / 2));
  // E: (I - i(X+Y+Z))/2 cycles X->Y->Z->X
  const c64 mi(0, -1);
  Mat2 e_mat = {c64(0.5) + mi * 0.5 * (x_matrix()[0] + y_matrix()[0] + z_matrix()[0]),
                mi * 0.5 * (x_matrix()[1] + y_matrix()[1] + z_matrix()[1]),
                mi * 0.5 * (x_matrix()[2] + y_matrix()[2] + z_matrix()[2]),
                c64(0.5) + mi * 0.5 * (x_matrix()[3] + y_matrix()[3] + z_matrix()[3])};
  int e_idx = t1.index_of_matrix(e_mat);
  if (w_index_ < 0 || e_idx < 0) throw Error("canonical 2q building blocks not in C1");
  s3_ = {t1.identity_index(), e_idx, t1.compose(e_idx, e_idx)};

  elements_.reserve(11520);
  tableaus_.reserve(11520);
  const Tableau2q cz = cz_tableau();
  const Tableau2q swp = swap_tableau();
  const Tableau2q ww = tensor_tableau(w_index_, w_index_);

  auto push = [&](std::uint8_t cls, int a, int b, int sa, int sb, const Tableau2q& t) {
    elements_.push_back({cls, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                         static_cast<std::uint8_t>(sa), static_cast<std::uint8_t>(sb)});
    tableaus_.push_back(t);
  };

  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b) push(0, a, b, 0, 0, tensor_tableau(a, b));
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b)
      for (int sa = 0; sa < 3; ++sa)
        for (int sb = 0; sb < 3; ++sb) {
          Tableau2q t = tensor_tableau(s3_[sa], s3_[sb]).then(cz).then(tensor_tableau(a, b));
          push(1, a, b, sa, sb, t);
        }
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b)
      for (int sa = 0; sa < 3; ++sa)
        for (int sb = 0; sb < 3; ++sb) {
          Tableau2q t = tensor_tableau(s3_[sa], s3_[sb])
                            .then(cz)
                            .then(ww)
                            .then(cz)
                            .then(tensor_tableau(a, b));
          push(2, a, b, sa, sb, t);
        }
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b) push(3, a, b, 0, 0, swp.then(tensor_tableau(a, b)));

  key_to_index_.assign(1u << 20, 0xffffffffu);
  for (std::size_t i = 0; i < tableaus_.size(); ++i) {
    std::uint32_t k = tableaus_[i].key();
    if (key_to_index_[k] != 0xffffffffu)
      throw Error("2q Clifford enumeration collision at " + std::to_string(i));
    key_to_index_[k] = static_cast<std::uint32_t>(i);
  }
}

const Clifford2qTable& Clifford2qTable::instance() {
  static const Clifford2qTable table;
  return table;
}

std::size_t Clifford2qTable::index_from_key(std::uint32_t key) const {
  if (key >= key_to_index_.size() || key_to_index_[key] == 0xffffffffu)
    throw InvalidArgument("tableau key is not a 2q Clifford");
  return key_to_index_[key];
}

int Clifford2qTable::cz_count(std::size_t idx) const {
  switch (elements_[idx].cls) {
    case 0:
      return 0;
    case 1:
      return 1;
    case 2:
      return 2;
    default:
      return 3;
  }
}

double Clifford2qTable::mean_cz_per_clifford() const {
  // exact from the class sizes: (0*576 + 1*5184 + 2*5184 + 3*576) / 11520
  return 1.5;
}

void Clifford2qTable::append_native(Circuit& c, std::size_t idx, int qa, int qb) const {
  const auto& t1 = Clifford1qTable::instance();
  const Element& e = elements_[idx];
  auto emit_1q = [&](int table_idx, int q) { append_native_1q(c, q, t1[table_idx].native); };
  auto emit_cnot = [&](int pc, int pt) {
    append_native_1q(c, pt, decompose_1q(h_matrix()));
    c.cz(pc, pt);
    append_native_1q(c, pt, decompose_1q(h_matrix()));
  };
  switch (e.cls) {
    case 0:
      emit_1q(e.a, qa);
      emit_1q(e.b, qb);
      break;
    case 1:
      emit_1q(s3_[e.sa], qa);
      emit_1q(s3_[e.sb], qb);
      c.cz(qa, qb);
      emit_1q(e.a, qa);
      emit_1q(e.b, qb);
      break;
    case 2:
      emit_1q(s3_[e.sa], qa);
      emit_1q(s3_[e.sb], qb);
      c.cz(qa, qb);
      emit_1q(w_index_, qa);
      emit_1q(w_index_, qb);
      c.cz(qa, qb);
      emit_1q(e.a, qa);
      emit_1q(e.b, qb);
      break;
    default:
      emit_cnot(qa, qb);
      emit_cnot(qb, qa);
      emit_cnot(qa, qb);
      emit_1q(e.a, qa);
      emit_1q(e.b, qb);
      break;
  }
}

Mat4 Clifford2qTable::matrix(std::size_t idx) const {
  const auto& t1 = Clifford1qTable::instance();
  const Element& e = elements_[idx];
  Mat4 ab = kron_le(t1[e.a].matrix, t1[e.b].matrix);
  switch (e.cls) {
    case 0:
      return ab;
    case 1: {
      Mat4 s = kron_le(t1[s3_[e.sa]].matrix, t1[s3_[e.sb]].matrix);
      return mat4_mul(ab, mat4_mul(cz_matrix(), s));
    }
    case 2: {
      Mat4 s = kron_le(t1[s3_[e.sa]].matrix, t1[s3_[e.sb]].matrix);
      Mat4 w = kron_le(t1[w_index_].matrix, t1[w_index_].matrix);
      return mat4_mul(ab, mat4_mul(cz_matrix(), mat4_mul(w, mat4_mul(cz_matrix(), s))));
    }
    default:
      return mat4_mul(ab, swap_matrix());
  }
}

double Clifford2qTable::mean_prx_per_clifford() const {
  if (mean_prx_ >= 0) return mean_prx_;
  long total = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    Circuit c(2);
    append_native(c, i, 0, 1);
    c = collapse_1q_runs(c);
    for (auto& ins : c.instructions)
      if (ins.kind == OpKind::PRX) ++total;
  }
  mean_prx_ = static_cast<double>(total) / static_cast<double>(size());
  return mean_prx_;
}

}  // namespace qpubench
