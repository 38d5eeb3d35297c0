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

#ifndef GSF_PAULI_HPP
#define GSF_PAULI_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gsf {

/// Hermitian n-qubit Pauli term, bit-packed.
///
/// Represents (-1)^neg * prod_q P_q with P_q in {I,X,Y,Z} encoded by the
/// (x,z) bit pair per qubit: (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. The i
/// factor of Y = iXZ is absorbed into the encoding so every stored term is
/// Hermitian with sign +/-1.
class PauliTerm {
 public:
  PauliTerm() : n_(0), neg_(false) {}
  explicit PauliTerm(size_t n) : n_(n), neg_(false), x_(words(n), 0), z_(words(n), 0) {}

  /// Parses strings like "+XIZ", "-IYZ", "XZ" (sign optional).
  static PauliTerm from_string(const std::string& s);

  /// Single-qubit term P on qubit q of an n-qubit register, P in {'X','Y','Z'}.
  static PauliTerm single(size_t n, size_t q, char p, bool negative = false);

  size_t num_qubits() const { return n_; }
  bool neg() const { return neg_; }
  void set_neg(bool v) { neg_ = v; }
  void flip_sign() { neg_ = !neg_; }

  bool x_bit(size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
  bool z_bit(size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1; }
  void set_x(size_t q, bool v);
  void set_z(size_t q, bool v);

  /// Sets qubit q to one of 'I','X','Y','Z'.
  void set_op(size_t q, char p);
  char op_at(size_t q) const;

  bool is_identity_bits() const;  // ignores sign
  size_t weight() const;

  bool commutes_with(const PauliTerm& other) const;

  /// In-place product this <- this * other. Requires the product to be
  /// Hermitian (operands commute); throws std::logic_error otherwise.
  void mul(const PauliTerm& other);

  /// Phase exponent e of this*other = i^e * (bitwise product), e in {0,1,2,3}.
  int mul_phase_exponent(const PauliTerm& other) const;

  /// Projective product: xors the bit vectors and drops the phase. Used for
  /// Pauli frames, which are only meaningful up to phase.
  void mul_bits(const PauliTerm& other);

  bool operator==(const PauliTerm& other) const {
    return n_ == other.n_ && neg_ == other.neg_ && x_ == other.x_ && z_ == other.z_;
  }
  bool operator!=(const PauliTerm& other) const { return !(*this == other); }
  bool same_bits(const PauliTerm& other) const { return x_ == other.x_ && z_ == other.z_; }

  /// Lexicographic order on (bits, sign); used for canonical generator lists.
  bool operator<(const PauliTerm& other) const;

  /// Sign character followed by an n-character string over {I,X,Y,Z}.
  std::string str() const;

  const std::vector<uint64_t>& x_words() const { return x_; }
  const std::vector<uint64_t>& z_words() const { return z_; }

 private:
  static size_t words(size_t n) { return (n + 63) / 64; }

  size_t n_;
  bool neg_;
  std::vector<uint64_t> x_, z_;
};

}  // namespace gsf

#endif  // GSF_PAULI_HPP
