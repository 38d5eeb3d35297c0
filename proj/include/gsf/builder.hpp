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

#ifndef GSF_BUILDER_HPP
#define GSF_BUILDER_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gsf/graph.hpp"
#include "gsf/tableau.hpp"

namespace gsf {

/// Raised when a construction step is driven out of order (e.g. passing with
/// no heralded photon pending).
class protocol_order_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HeraldModel {
  double p_success = 1.0;  // herald probability per excitation attempt
  double t_rep = 1.0;      // cycle time (time unit of the log)
  double t_add = 0.0;      // add-step time spent per successful herald
};

struct BuildLog {
  uint64_t attempts = 0;       // excitation cycles
  double elapsed_cycles = 0;   // total t_rep units, including failures
  int cz_count = 0;            // two-qubit spin-spin entangling gates
  int pass_count = 0;          // gates contributed by passing subroutines
  int patch_count = 0;         // gates contributed by patching subroutines
  std::vector<std::string> lines;  // line-oriented transcript

  std::string text() const;
};

enum class PassVariant { join, extend };
enum class QubitRole { emitter, aux_spin, photon };

/// Emit-then-add construction engine on a stabilizer tableau.
///
/// Keeps three views in lock-step: the real tableau (seeded random outcomes),
/// an ideal twin with all heralded byproducts forced to the reference value,
/// and a Pauli frame P with |real> = P |ideal> up to phase. The ideal twin is
/// maintained equal to the graph state of the tracked adjacency, so the frame
/// restricted to the photons is exactly the published byproduct correction.
class BuildSystem {
 public:
  BuildSystem(const HeraldModel& herald, uint64_t seed);

  static constexpr size_t kEmitter = 0;
  static constexpr size_t kSpin1 = 1;
  static constexpr size_t kSpin2 = 2;
  static size_t photon_qubit(int emission_index) { return 2 + size_t(emission_index); }

  /// One excitation cycle. On success a fresh photon qubit is appended and
  /// Bell-entangled with the emitter; on failure only the emitter is
  /// reinitialized and the graph is untouched.
  std::optional<size_t> attempt_emit();

  /// Repeats attempt_emit until a herald fires; returns the photon qubit.
  size_t emit_until_success();

  /// The heralded add step of the pumping subcircuit: CZ between emitter and
  /// spin, the local-complementation rotations, and the emitter decoupling
  /// measurement. Leaves the generator set in the pumped-spin form with all
  /// signs keyed by the returned bit; does not rotate the photon into graph
  /// form.
  bool add_photon_to_spin(size_t spin, size_t photon);

  /// Passing subroutine (join or extend) for the pending photon.
  bool pass(size_t spin, PassVariant variant);

  /// Passing subroutine between spins: `from`'s subgraph is joined onto `to`
  /// and `from` is measured out, splicing its subgraph into place.
  bool pass_spin_join(size_t to, size_t from);

  /// Reinitializes a measured-out spin in |+> as a fresh graph node.
  void respawn_spin(size_t spin);

  /// Patching subroutine: two emitter-mediated bonding rounds around a local
  /// complementation on spin2, spending four spin-spin gates. Together with
  /// the closing measure-outs this attaches the spin2 subgraph's first-layer
  /// photon to the first-layer photon joined on spin1.
  std::pair<bool, bool> patch(size_t spin1, size_t spin2);

  /// Measures a spin out in the Y graph basis (complements its neighborhood).
  bool measure_out_spin_Y(size_t spin);

  /// Measures a spin out in the X graph basis with the given pivot neighbor.
  bool measure_out_spin_X(size_t spin, size_t pivot);

  const StabilizerState& state() const { return real_; }
  const StabilizerState& ideal_state() const { return ideal_; }
  const Graph& graph() const { return graph_; }
  const PauliTerm& byproduct_frame() const { return frame_; }
  const BuildLog& log() const { return log_; }
  const std::vector<std::pair<int, bool>>& byproducts() const { return byproducts_; }
  QubitRole role(size_t q) const;

  /// Applies the byproduct frame to a copy of the real state; the result
  /// equals the ideal graph state on every live qubit.
  StabilizerState corrected_state() const;

  /// Checks |real> = frame |ideal> and ideal == circuit_from_graph(graph).
  bool check_twin_invariants() const;

  /// Test hook: forces the next tracked measurement outcome on the real path.
  void force_next_outcome(bool m) { forced_next_ = m; }

 private:
  HeraldModel herald_;
  StabilizerState real_, ideal_;
  PauliTerm frame_;
  Graph graph_;  // adjacency over qubit ids; spins are nodes, emitter only transiently
  BuildLog log_;
  std::optional<size_t> pending_photon_;
  int photons_emitted_ = 0;
  std::vector<std::pair<int, bool>> byproducts_;
  std::optional<bool> forced_next_;

  void apply_gate(const CliffordGate& g);
  void apply_spin_spin(const CliffordGate& g, bool patching);
  bool measure_tracked(const PauliTerm& obs);
  void hard_reset_to_zero(size_t q);
  void local_complement_node(size_t node);
  bool measure_out_graph_Y(size_t node);  // shared by spins and the emitter
};

/// Target 12-photon graph of the two-party computation protocol, on protocol
/// labels 1..12: three arms 1-2-3-4, 5-6-7-8, 9-10-11 joined at hub 12.
Graph spider_graph();

/// Emission order -> protocol label for the Build procedure below.
std::array<int, 13> build_emission_to_label();

struct BuildResult {
  StabilizerState state;           // real tableau (emitter, spins, 12 photons)
  PauliTerm byproduct_correction;  // apply to `state` to reach the ideal graph state
  std::array<size_t, 13> qubit_of_label;  // [1..12] -> qubit index
  Graph photon_graph;                     // final adjacency on photon qubits
  std::vector<std::pair<int, bool>> byproducts;
  BuildLog log;
};

/// Runs the five-step Build of the 12-photon state: chains passed to the two
/// auxiliary spins, the spin-spin join, the patch, and the closing spin
/// measure-outs. 17 spin-spin gates total: 13 passing + 4 patching.
BuildResult build_G(const HeraldModel& herald, uint64_t seed);

}  // namespace gsf

#endif  // GSF_BUILDER_HPP
