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

#include "gsf/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace gsf {

PauliTerm PauliTerm::from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty Pauli string");
  size_t start = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = (s[0] == '-');
    start = 1;
  }
  PauliTerm p(s.size() - start);
  for (size_t q = 0; q + start < s.size(); ++q) p.set_op(q, s[q + start]);
  p.neg_ = neg;
  return p;
}

PauliTerm PauliTerm::single(size_t n, size_t q, char op, bool negative) {
  if (q >= n) throw std::invalid_argument("qubit out of range");
  PauliTerm p(n);
  p.set_op(q, op);
  p.neg_ = negative;
  return p;
}

void PauliTerm::set_x(size_t q, bool v) {
  uint64_t mask = uint64_t{1} << (q & 63);
  if (v)
    x_[q >> 6] |= mask;
  else
    x_[q >> 6] &= ~mask;
}

void PauliTerm::set_z(size_t q, bool v) {
  uint64_t mask = uint64_t{1} << (q & 63);
  if (v)
    z_[q >> 6] |= mask;
  else
    z_[q >> 6] &= ~mask;
}

void PauliTerm::set_op(size_t q, char p) {
  switch (p) {
    case 'I':
      set_x(q, false);
      set_z(q, false);
      break;
    case 'X':
      set_x(q, true);
      set_z(q, false);
      break;
    case 'Y':
      set_x(q, true);
      set_z(q, true);
      break;
    case 'Z':
      set_x(q, false);
      set_z(q, true);
      break;
    default:
      throw std::invalid_argument("bad Pauli character");
  }
}

char PauliTerm::op_at(size_t q) const {
  bool x = x_bit(q), z = z_bit(q);
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

bool PauliTerm::is_identity_bits() const {
  for (size_t w = 0; w < x_.size(); ++w)
    if (x_[w] | z_[w]) return false;
  return true;
}

size_t PauliTerm::weight() const {
  size_t c = 0;
  for (size_t w = 0; w < x_.size(); ++w) c += std::popcount(x_[w] | z_[w]);
  return c;
}

bool PauliTerm::commutes_with(const PauliTerm& other) const {
  if (n_ != other.n_) throw std::invalid_argument("size mismatch");
  uint64_t acc = 0;
  for (size_t w = 0; w < x_.size(); ++w)
    acc ^= (x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w]);
  return (std::popcount(acc) & 1) == 0;
}

int PauliTerm::mul_phase_exponent(const PauliTerm& other) const {
  // Per-qubit phase of sigma*tau = i^e rho, summed mod 4.
  int e = 0;
  for (size_t q = 0; q < n_; ++q) {
    int x1 = x_bit(q), z1 = z_bit(q), x2 = other.x_bit(q), z2 = other.z_bit(q);
    if (!(x1 | z1) || !(x2 | z2)) continue;
    if (x1 == x2 && z1 == z2) continue;
    // XY=iZ, YZ=iX, ZX=iY and the reversed orders give -i.
    int a = x1 ? (z1 ? 1 : 0) : 2;  // X=0, Y=1, Z=2
    int b = x2 ? (z2 ? 1 : 0) : 2;
    e += ((b - a) % 3 + 3) % 3 == 1 ? 1 : 3;
  }
  return e & 3;
}

void PauliTerm::mul_bits(const PauliTerm& other) {
  if (n_ != other.n_) throw std::invalid_argument("size mismatch");
  for (size_t w = 0; w < x_.size(); ++w) {
    x_[w] ^= other.x_[w];
    z_[w] ^= other.z_[w];
  }
}

void PauliTerm::mul(const PauliTerm& other) {
  if (n_ != other.n_) throw std::invalid_argument("size mismatch");
  int e = mul_phase_exponent(other);
  if (e & 1) throw std::logic_error("product of anticommuting Paulis is not Hermitian");
  neg_ = neg_ ^ other.neg_ ^ (e == 2);
  for (size_t w = 0; w < x_.size(); ++w) {
    x_[w] ^= other.x_[w];
    z_[w] ^= other.z_[w];
  }
}

bool PauliTerm::operator<(const PauliTerm& other) const {
  if (x_ != other.x_) return x_ < other.x_;
  if (z_ != other.z_) return z_ < other.z_;
  return neg_ < other.neg_;
}

std::string PauliTerm::str() const {
  std::string s;
  s.reserve(n_ + 1);
  s.push_back(neg_ ? '-' : '+');
  for (size_t q = 0; q < n_; ++q) s.push_back(op_at(q));
  return s;
}

}  // namespace gsf
