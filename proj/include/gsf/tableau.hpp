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

#ifndef GSF_TABLEAU_HPP
#define GSF_TABLEAU_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gsf/pauli.hpp"
#include "gsf/rng.hpp"

namespace gsf {

enum class GateKind {
  H,
  S,
  S_dag,
  X,
  Y,
  Z,
  SqrtX_pos,  // (-iX)^{1/2}: Z -> -Y, Y -> Z
  SqrtX_neg,  // (iX)^{1/2}:  Z -> Y,  Y -> -Z
  SqrtZ_pos,  // (iZ)^{1/2}:  X -> -Y, Y -> X
  SqrtZ_neg,  // (-iZ)^{1/2}: X -> Y,  Y -> -X
  CZ,
  CX,
};

struct CliffordGate {
  GateKind kind;
  size_t a;
  size_t b;  // second target for CZ/CX only

  static CliffordGate one(GateKind k, size_t q) { return {k, q, q}; }
  static CliffordGate two(GateKind k, size_t a, size_t b) { return {k, a, b}; }
  bool is_two_qubit() const { return kind == GateKind::CZ || kind == GateKind::CX; }
};

enum class Basis { all_zero, all_plus };

struct MeasureResult {
  bool outcome;        // m in {0,1}; eigenvalue (-1)^m
  bool deterministic;  // true when the observable (or its negation) was in the group
};

/// Aaronson-Gottesman style stabilizer tableau with destabilizer rows and a
/// seeded generator for random measurement outcomes. Rows are bit-packed,
/// 2n+1 bits each.
class StabilizerState {
 public:
  StabilizerState(size_t n, Basis basis, uint64_t seed = 0);

  size_t num_qubits() const { return n_; }

  Rng& rng() { return rng_; }
  void reseed(uint64_t seed) { rng_ = Rng(seed); }

  void apply(const CliffordGate& g);
  void apply(GateKind k, size_t q) { apply(CliffordGate::one(k, q)); }
  void apply(GateKind k, size_t a, size_t b) { apply(CliffordGate::two(k, a, b)); }

  /// Measures a Hermitian Pauli observable. Random outcomes draw from the
  /// state's seeded generator; the tableau is updated so that
  /// obs * (-1)^outcome stabilizes the post-measurement state.
  MeasureResult measure(const PauliTerm& obs);

  /// Measures with a caller-chosen outcome on the random branch. Throws
  /// std::logic_error if the observable is deterministic with the other value.
  MeasureResult measure_forced(const PauliTerm& obs, bool outcome);

  /// Eigenvalue bit if obs is determined by the group (0 for +1, 1 for -1),
  /// std::nullopt if the outcome would be random. Does not modify the state.
  std::optional<bool> deterministic_eigenvalue(const PauliTerm& obs) const;

  /// Appends one fresh qubit in |0> or |+>.
  size_t append_qubit(Basis basis);

  /// Resets qubit q to |0> by measuring Z_q and flipping if needed.
  void reset_qubit(size_t q);

  const PauliTerm& stabilizer_row(size_t k) const { return stab_[k]; }
  const PauliTerm& destabilizer_row(size_t k) const { return destab_[k]; }

  /// Canonical stabilizer generators (row-reduced over GF(2), signs fixed).
  std::vector<PauliTerm> canonical_stabilizers() const;

  /// Canonical generators of the subgroup supported inside `qubits`. For a
  /// pure reduced state on that subset the list has `qubits.size()` entries.
  std::vector<PauliTerm> restricted_group(const std::vector<size_t>& qubits) const;

  /// True iff the stabilizer groups are identical including signs, which for
  /// pure states is statevector equality up to global phase.
  static bool states_equal(const StabilizerState& a, const StabilizerState& b);

  /// Equality of the reduced states on a qubit subset (both must be pure there).
  static bool states_equal_on(const StabilizerState& a, const StabilizerState& b,
                              const std::vector<size_t>& qubits);

  /// Dense amplitude vector, unit norm, global phase fixed arbitrarily.
  /// Capacity-guarded at n <= 14.
  std::vector<std::complex<double>> to_statevector() const;

  /// One stabilizer row per line, sign character then {I,X,Y,Z} string.
  std::string dump() const;

  /// Group-closure self check: rows pairwise commute, full rank, destab
  /// pairing intact. Used by tests and debug assertions.
  bool check_invariants() const;

 private:
  size_t n_;
  std::vector<PauliTerm> stab_, destab_;
  Rng rng_;

  MeasureResult measure_impl(const PauliTerm& obs, std::optional<bool> forced);
};

/// Convenience: applies a gate list in order.
void apply_all(StabilizerState& s, const std::vector<CliffordGate>& gates);

/// Conjugates a Pauli term by a Clifford gate: p <- U p U^dagger.
void conjugate_pauli(PauliTerm& p, const CliffordGate& g);

/// Row-reduces a generator list to its unique canonical form (same reduction
/// states_equal uses); equal groups yield equal lists.
void canonicalize_pauli_rows(std::vector<PauliTerm>& rows, size_t n);

}  // namespace gsf

#endif  // GSF_TABLEAU_HPP
