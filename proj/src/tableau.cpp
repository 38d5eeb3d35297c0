// Copyright 2025 The graphstate-forge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsf/tableau.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsf {

StabilizerState::StabilizerState(size_t n, Basis basis, uint64_t seed) : n_(n), rng_(seed) {
  if (n == 0) throw std::invalid_argument("qubit count must be at least 1");
  stab_.reserve(n);
  destab_.reserve(n);
  for (size_t q = 0; q < n; ++q) {
    stab_.push_back(PauliTerm::single(n, q, basis == Basis::all_zero ? 'Z' : 'X'));
    destab_.push_back(PauliTerm::single(n, q, basis == Basis::all_zero ? 'X' : 'Z'));
  }
}

namespace {

// Single-qubit conjugation on one row: updates (x, z, sign) in place.
inline void conj1(PauliTerm& p, GateKind k, size_t q) {
  bool x = p.x_bit(q), z = p.z_bit(q);
  switch (k) {
    case GateKind::H:
      if (x && z) p.flip_sign();
      p.set_x(q, z);
      p.set_z(q, x);
      break;
    case GateKind::S:  // X -> Y, Y -> -X
    case GateKind::SqrtZ_neg:
      if (x && z) p.flip_sign();
      p.set_z(q, z ^ x);
      break;
    case GateKind::S_dag:  // X -> -Y, Y -> X
    case GateKind::SqrtZ_pos:
      if (x && !z) p.flip_sign();
      p.set_z(q, z ^ x);
      break;
    case GateKind::X:
      if (z) p.flip_sign();
      break;
    case GateKind::Y:
      if (x != z) p.flip_sign();
      break;
    case GateKind::Z:
      if (x) p.flip_sign();
      break;
    case GateKind::SqrtX_pos:  // Y -> Z, Z -> -Y
      if (z && !x) p.flip_sign();
      p.set_x(q, x ^ z);
      break;
    case GateKind::SqrtX_neg:  // Y -> -Z, Z -> Y
      if (z && x) p.flip_sign();
      p.set_x(q, x ^ z);
      break;
    default:
      throw std::logic_error("not a single-qubit gate");
  }
}

inline void conj2(PauliTerm& p, GateKind k, size_t a, size_t b) {
  bool xa = p.x_bit(a), za = p.z_bit(a), xb = p.x_bit(b), zb = p.z_bit(b);
  if (k == GateKind::CZ) {
    if (xa && xb && (za != zb)) p.flip_sign();
    p.set_z(a, za ^ xb);
    p.set_z(b, zb ^ xa);
  } else {  // CX, control a, target b
    if (xa && zb && (xb == za)) p.flip_sign();
    p.set_x(b, xb ^ xa);
    p.set_z(a, za ^ zb);
  }
}

}  // namespace

void StabilizerState::apply(const CliffordGate& g) {
  if (g.a >= n_ || (g.is_two_qubit() && g.b >= n_))
    throw std::invalid_argument("gate target out of range");
  if (g.is_two_qubit() && g.a == g.b)
    throw std::invalid_argument("two-qubit gate targets must be distinct");
  for (size_t k = 0; k < n_; ++k) {
    if (g.is_two_qubit()) {
      conj2(stab_[k], g.kind, g.a, g.b);
      conj2(destab_[k], g.kind, g.a, g.b);
    } else {
      conj1(stab_[k], g.kind, g.a);
      conj1(destab_[k], g.kind, g.a);
    }
  }
}

std::optional<bool> StabilizerState::deterministic_eigenvalue(const PauliTerm& obs) const {
  for (size_t k = 0; k < n_; ++k)
    if (!stab_[k].commutes_with(obs)) return std::nullopt;
  // obs is in +/- the group; reconstruct it from rows flagged by destabilizers.
  PauliTerm acc(n_);
  for (size_t k = 0; k < n_; ++k)
    if (!destab_[k].commutes_with(obs)) acc.mul(stab_[k]);
  if (!acc.same_bits(obs)) throw std::logic_error("observable not in group despite commuting");
  return acc.neg() != obs.neg();
}

MeasureResult StabilizerState::measure_impl(const PauliTerm& obs, std::optional<bool> forced) {
  if (obs.num_qubits() != n_) throw std::invalid_argument("observable size mismatch");
  if (obs.is_identity_bits()) throw std::invalid_argument("cannot measure identity");
  size_t pivot = n_;
  for (size_t k = 0; k < n_; ++k) {
    if (!stab_[k].commutes_with(obs)) {
      pivot = k;
      break;
    }
  }
  if (pivot == n_) {
    bool m = *deterministic_eigenvalue(obs);
    if (forced && *forced != m)
      throw std::logic_error("forced outcome contradicts deterministic measurement");
    return {m, true};
  }
  bool m = forced ? *forced : rng_.next_bit();
  for (size_t k = pivot + 1; k < n_; ++k)
    if (!stab_[k].commutes_with(obs)) stab_[k].mul(stab_[pivot]);
  for (size_t k = 0; k < n_; ++k)
    if (k != pivot && !destab_[k].commutes_with(obs)) destab_[k].mul(stab_[pivot]);
  destab_[pivot] = stab_[pivot];
  stab_[pivot] = obs;
  stab_[pivot].set_neg(obs.neg() != m);
  return {m, false};
}

MeasureResult StabilizerState::measure(const PauliTerm& obs) { return measure_impl(obs, std::nullopt); }

MeasureResult StabilizerState::measure_forced(const PauliTerm& obs, bool outcome) {
  return measure_impl(obs, outcome);
}

size_t StabilizerState::append_qubit(Basis basis) {
  size_t q = n_;
  n_ += 1;
  auto grow = [&](PauliTerm& p) {
    PauliTerm bigger(n_);
    for (size_t i = 0; i < q; ++i) {
      bigger.set_x(i, p.x_bit(i));
      bigger.set_z(i, p.z_bit(i));
    }
    bigger.set_neg(p.neg());
    p = bigger;
  };
  for (auto& r : stab_) grow(r);
  for (auto& r : destab_) grow(r);
  stab_.push_back(PauliTerm::single(n_, q, basis == Basis::all_zero ? 'Z' : 'X'));
  destab_.push_back(PauliTerm::single(n_, q, basis == Basis::all_zero ? 'X' : 'Z'));
  return q;
}

void StabilizerState::reset_qubit(size_t q) {
  auto r = measure(PauliTerm::single(n_, q, 'Z'));
  if (r.outcome) apply(GateKind::X, q);
}

// Row-reduces a generator list to the unique canonical form: reduced echelon
// on the X part first, then on the Z part of the remaining pure-Z rows.
// Deterministic, so equal groups produce equal lists.
void canonicalize_pauli_rows(std::vector<PauliTerm>& rows, size_t n) {
  size_t r = 0;
  for (size_t q = 0; q < n; ++q) {
    size_t pivot = rows.size();
    for (size_t k = r; k < rows.size(); ++k)
      if (rows[k].x_bit(q)) {
        pivot = k;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (size_t k = 0; k < rows.size(); ++k)
      if (k != r && rows[k].x_bit(q)) rows[k].mul(rows[r]);
    ++r;
  }
  for (size_t q = 0; q < n; ++q) {
    size_t pivot = rows.size();
    for (size_t k = r; k < rows.size(); ++k)
      if (rows[k].z_bit(q)) {
        pivot = k;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (size_t k = 0; k < rows.size(); ++k)
      if (k != r && rows[k].z_bit(q)) rows[k].mul(rows[r]);
    ++r;
  }
}

std::vector<PauliTerm> StabilizerState::canonical_stabilizers() const {
  std::vector<PauliTerm> rows = stab_;
  canonicalize_pauli_rows(rows, n_);
  return rows;
}

std::vector<PauliTerm> StabilizerState::restricted_group(const std::vector<size_t>& qubits) const {
  std::vector<bool> inside(n_, false);
  for (size_t q : qubits) inside.at(q) = true;
  std::vector<size_t> outside;
  for (size_t q = 0; q < n_; ++q)
    if (!inside[q]) outside.push_back(q);

  // Eliminate support on outside qubits; rows left untouched span the
  // restricted subgroup.
  std::vector<PauliTerm> rows = stab_;
  size_t r = 0;
  for (size_t q : outside) {
    for (int block = 0; block < 2; ++block) {
      size_t pivot = rows.size();
      for (size_t k = r; k < rows.size(); ++k) {
        bool hit = block == 0 ? rows[k].x_bit(q) : rows[k].z_bit(q);
        if (hit) {
          pivot = k;
          break;
        }
      }
      if (pivot == rows.size()) continue;
      std::swap(rows[r], rows[pivot]);
      for (size_t k = r + 1; k < rows.size(); ++k) {
        bool hit = block == 0 ? rows[k].x_bit(q) : rows[k].z_bit(q);
        if (hit) rows[k].mul(rows[r]);
      }
      ++r;
    }
  }
  std::vector<PauliTerm> sub;
  for (size_t k = r; k < rows.size(); ++k) {
    PauliTerm small(qubits.size());
    bool clean = true;
    for (size_t q = 0; q < n_ && clean; ++q)
      if (!inside[q] && (rows[k].x_bit(q) || rows[k].z_bit(q))) clean = false;
    if (!clean) throw std::logic_error("restricted_group: elimination left outside support");
    for (size_t i = 0; i < qubits.size(); ++i) {
      small.set_x(i, rows[k].x_bit(qubits[i]));
      small.set_z(i, rows[k].z_bit(qubits[i]));
    }
    small.set_neg(rows[k].neg());
    sub.push_back(small);
  }
  canonicalize_pauli_rows(sub, qubits.size());
  return sub;
}

bool StabilizerState::states_equal(const StabilizerState& a, const StabilizerState& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("states_equal: size mismatch");
  return a.canonical_stabilizers() == b.canonical_stabilizers();
}

bool StabilizerState::states_equal_on(const StabilizerState& a, const StabilizerState& b,
                                      const std::vector<size_t>& qubits) {
  auto ga = a.restricted_group(qubits);
  auto gb = b.restricted_group(qubits);
  if (ga.size() != qubits.size() || gb.size() != qubits.size()) return false;  // not pure there
  return ga == gb;
}

std::vector<std::complex<double>> StabilizerState::to_statevector() const {
  if (n_ > 14) throw std::length_error("to_statevector capacity is 14 qubits");
  const size_t dim = size_t{1} << n_;

  // Find one computational basis state in the support by forcing Z outcomes
  // on a scratch copy.
  StabilizerState scratch = *this;
  size_t v = 0;
  for (size_t q = 0; q < n_; ++q) {
    auto r = scratch.measure_forced(PauliTerm::single(n_, q, 'Z'),
                                    scratch.deterministic_eigenvalue(PauliTerm::single(n_, q, 'Z'))
                                        .value_or(false));
    if (r.outcome) v |= size_t{1} << q;
  }

  // |psi> proportional to prod_k (I + g_k) |v>.
  std::vector<std::complex<double>> vec(dim, 0.0);
  vec[v] = 1.0;
  std::vector<std::complex<double>> tmp(dim);
  for (size_t k = 0; k < n_; ++k) {
    const PauliTerm& g = stab_[k];
    // tmp = g * vec
    for (size_t i = 0; i < dim; ++i) tmp[i] = 0.0;
    for (size_t i = 0; i < dim; ++i) {
      if (vec[i] == std::complex<double>(0.0)) continue;
      size_t j = i;
      std::complex<double> amp = vec[i];
      if (g.neg()) amp = -amp;
      for (size_t q = 0; q < n_; ++q) {
        bool x = g.x_bit(q), z = g.z_bit(q);
        bool bit = (i >> q) & 1;
        if (x && z) {
          // Y = i X Z acting on |bit>: |0> -> i|1>, |1> -> -i|0>
          amp *= bit ? std::complex<double>(0, -1) : std::complex<double>(0, 1);
          j ^= size_t{1} << q;
        } else if (x) {
          j ^= size_t{1} << q;
        } else if (z) {
          if (bit) amp = -amp;
        }
      }
      tmp[j] += amp;
    }
    for (size_t i = 0; i < dim; ++i) vec[i] += tmp[i];
    // Renormalize each round to avoid 2^n growth.
    double norm = 0;
    for (auto& c : vec) norm += std::norm(c);
    if (norm < 1e-18) throw std::logic_error("to_statevector: support vanished");
    double inv = 1.0 / std::sqrt(norm);
    for (auto& c : vec) c *= inv;
  }
  // Fix global phase: first nonzero amplitude is made real positive.
  for (size_t i = 0; i < dim; ++i) {
    if (std::abs(vec[i]) > 1e-9) {
      std::complex<double> ph = vec[i] / std::abs(vec[i]);
      for (auto& c : vec) c /= ph;
      break;
    }
  }
  return vec;
}

std::string StabilizerState::dump() const {
  std::string out;
  for (size_t k = 0; k < n_; ++k) {
    out += stab_[k].str();
    out += '\n';
  }
  return out;
}

bool StabilizerState::check_invariants() const {
  for (size_t i = 0; i < n_; ++i) {
    for (size_t j = 0; j < n_; ++j) {
      if (!stab_[i].commutes_with(stab_[j])) return false;
      bool anti = !destab_[i].commutes_with(stab_[j]);
      if (anti != (i == j)) return false;
    }
  }
  // Full rank: canonical form must yield n independent rows.
  auto rows = canonical_stabilizers();
  if (rows.size() != n_) return false;
  for (auto& r : rows)
    if (r.is_identity_bits()) return false;
  return true;
}

void apply_all(StabilizerState& s, const std::vector<CliffordGate>& gates) {
  for (const auto& g : gates) s.apply(g);
}

void conjugate_pauli(PauliTerm& p, const CliffordGate& g) {
  if (g.is_two_qubit())
    conj2(p, g.kind, g.a, g.b);
  else
    conj1(p, g.kind, g.a);
}

}  // namespace gsf
