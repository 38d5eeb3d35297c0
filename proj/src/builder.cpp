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

#include "gsf/builder.hpp"

#include <sstream>
#include <stdexcept>

namespace gsf {

std::string BuildLog::text() const {
  std::ostringstream os;
  for (const auto& l : lines) os << l << '\n';
  os << "summary attempts=" << attempts << " elapsed_cycles=" << elapsed_cycles
     << " cz=" << cz_count << " pass=" << pass_count << " patch=" << patch_count << '\n';
  return os.str();
}

BuildSystem::BuildSystem(const HeraldModel& herald, uint64_t seed)
    : herald_(herald),
      real_(3, Basis::all_plus, seed),
      ideal_(3, Basis::all_plus, 0),
      frame_(3) {
  if (!(herald.p_success > 0.0 && herald.p_success <= 1.0))
    throw std::invalid_argument("p_success must lie in (0,1]");
  // Emitter idles in |0>; the two auxiliary spins start as fresh |+> nodes.
  real_.apply(GateKind::H, kEmitter);
  ideal_.apply(GateKind::H, kEmitter);
  graph_.add_node(NodeId(kSpin1));
  graph_.add_node(NodeId(kSpin2));
}

QubitRole BuildSystem::role(size_t q) const {
  if (q == kEmitter) return QubitRole::emitter;
  if (q == kSpin1 || q == kSpin2) return QubitRole::aux_spin;
  return QubitRole::photon;
}

void BuildSystem::apply_gate(const CliffordGate& g) {
  real_.apply(g);
  ideal_.apply(g);
  conjugate_pauli(frame_, g);
}

void BuildSystem::apply_spin_spin(const CliffordGate& g, bool patching) {
  apply_gate(g);
  log_.cz_count += 1;
  (patching ? log_.patch_count : log_.pass_count) += 1;
}

bool BuildSystem::measure_tracked(const PauliTerm& obs) {
  bool eps = !frame_.commutes_with(obs);
  MeasureResult r;
  if (forced_next_.has_value()) {
    r = real_.measure_forced(obs, *forced_next_);
    forced_next_.reset();
  } else {
    r = real_.measure(obs);
  }
  bool ideal_outcome = r.outcome ^ eps;
  if (r.deterministic) {
    auto det = ideal_.deterministic_eigenvalue(obs);
    if (!det || *det != ideal_outcome)
      throw std::logic_error("twin tableaux disagree on a deterministic outcome");
    return r.outcome;
  }
  // Force the ideal branch to the reference outcome 0; if the real branch
  // landed on the other one, fold the ideal pivot row into the frame.
  PauliTerm pivot(ideal_.num_qubits());
  bool found = false;
  for (size_t k = 0; k < ideal_.num_qubits() && !found; ++k) {
    if (!ideal_.stabilizer_row(k).commutes_with(obs)) {
      pivot = ideal_.stabilizer_row(k);
      found = true;
    }
  }
  if (!found) throw std::logic_error("twin tableaux disagree on randomness");
  ideal_.measure_forced(obs, false);
  if (ideal_outcome) frame_.mul_bits(pivot);
  return r.outcome;
}

void BuildSystem::hard_reset_to_zero(size_t q) {
  auto det = ideal_.deterministic_eigenvalue(PauliTerm::single(ideal_.num_qubits(), q, 'Z'));
  if (!det || *det) throw std::logic_error("hard reset expects the ideal qubit in |0>");
  if (frame_.x_bit(q)) {
    real_.apply(GateKind::X, q);
    frame_.set_x(q, false);
  }
  frame_.set_z(q, false);
}

std::optional<size_t> BuildSystem::attempt_emit() {
  if (pending_photon_)
    throw protocol_order_error("previous heralded photon has not been passed yet");
  log_.attempts += 1;
  log_.elapsed_cycles += 1.0;
  if (!real_.rng().next_bernoulli(herald_.p_success)) {
    // Failed herald: the emitter is reinitialized, nothing else changes.
    log_.lines.push_back("attempt fail");
    return std::nullopt;
  }
  log_.elapsed_cycles += herald_.t_add / herald_.t_rep;
  photons_emitted_ += 1;
  size_t p = real_.append_qubit(Basis::all_zero);
  size_t pi = ideal_.append_qubit(Basis::all_zero);
  if (p != pi || p != photon_qubit(photons_emitted_))
    throw std::logic_error("photon qubit allocation out of sync");
  {
    PauliTerm bigger(real_.num_qubits());
    for (size_t i = 0; i + 1 < real_.num_qubits(); ++i) {
      bigger.set_x(i, frame_.x_bit(i));
      bigger.set_z(i, frame_.z_bit(i));
    }
    frame_ = bigger;
  }
  apply_gate(CliffordGate::one(GateKind::H, kEmitter));
  apply_gate(CliffordGate::two(GateKind::CX, kEmitter, p));
  pending_photon_ = p;
  std::ostringstream os;
  os << "attempt ok photon=" << photons_emitted_;
  log_.lines.push_back(os.str());
  return p;
}

size_t BuildSystem::emit_until_success() {
  while (true) {
    auto p = attempt_emit();
    if (p) return *p;
  }
}

bool BuildSystem::add_photon_to_spin(size_t spin, size_t photon) {
  if (role(spin) != QubitRole::aux_spin || role(photon) != QubitRole::photon)
    throw std::invalid_argument("add step needs an auxiliary spin and a photon");
  if (!pending_photon_ || *pending_photon_ != photon)
    throw protocol_order_error("photon is not pending on the emitter");
  apply_spin_spin(CliffordGate::two(GateKind::CZ, kEmitter, spin), /*patching=*/false);
  apply_gate(CliffordGate::one(GateKind::SqrtX_pos, kEmitter));
  apply_gate(CliffordGate::one(GateKind::SqrtZ_pos, spin));
  apply_gate(CliffordGate::one(GateKind::SqrtX_neg, photon));
  bool c = measure_tracked(PauliTerm::single(real_.num_qubits(), kEmitter, 'Z'));
  hard_reset_to_zero(kEmitter);
  byproducts_.emplace_back(photons_emitted_, c);
  pending_photon_.reset();
  return c;
}

void BuildSystem::local_complement_node(size_t node) {
  apply_gate(CliffordGate::one(GateKind::SqrtX_pos, node));
  for (NodeId b : graph_.neighbors(NodeId(node)))
    apply_gate(CliffordGate::one(GateKind::SqrtZ_pos, size_t(b)));
  graph_.local_complement(NodeId(node));
}

bool BuildSystem::pass(size_t spin, PassVariant variant) {
  size_t p = pending_photon_ ? *pending_photon_
                             : throw protocol_order_error("no heralded photon pending");
  bool c = add_photon_to_spin(spin, p);
  // Rotate the fresh photon into graph form; the join adjacency is the spin's
  // previous neighborhood plus the new edge.
  apply_gate(CliffordGate::one(GateKind::H, p));
  graph_.add_node(NodeId(p));
  graph_.add_edge(NodeId(spin), NodeId(p));
  if (variant == PassVariant::extend) {
    local_complement_node(spin);
    local_complement_node(p);
  }
  std::ostringstream os;
  os << "pass " << (variant == PassVariant::join ? "join" : "extend") << " spin=" << spin
     << " photon=" << (p - 2) << " c=" << int(c);
  log_.lines.push_back(os.str());
  return c;
}

bool BuildSystem::measure_out_graph_Y(size_t node) {
  auto nbrs = graph_.neighbors(NodeId(node));
  bool m = measure_tracked(PauliTerm::single(real_.num_qubits(), node, 'Y'));
  // Rotate the survivors back to the graph basis and complement the
  // measured node's neighborhood.
  for (NodeId b : nbrs) apply_gate(CliffordGate::one(GateKind::SqrtZ_pos, size_t(b)));
  graph_.local_complement(NodeId(node));
  graph_.remove_node(NodeId(node));
  // The measured qubit sits in a Y eigenstate; rotate it down to |0>.
  apply_gate(CliffordGate::one(GateKind::SqrtX_pos, node));
  hard_reset_to_zero(node);
  return m;
}

bool BuildSystem::measure_out_spin_Y(size_t spin) {
  if (role(spin) != QubitRole::aux_spin) throw std::invalid_argument("not a spin");
  bool m = measure_out_graph_Y(spin);
  std::ostringstream os;
  os << "measure_out Y spin=" << spin << " m=" << int(m);
  log_.lines.push_back(os.str());
  return m;
}

bool BuildSystem::measure_out_spin_X(size_t spin, size_t pivot) {
  if (role(spin) != QubitRole::aux_spin) throw std::invalid_argument("not a spin");
  if (!graph_.has_edge(NodeId(spin), NodeId(pivot)))
    throw std::invalid_argument("pivot must neighbor the measured spin");
  local_complement_node(pivot);
  bool m = measure_out_graph_Y(spin);
  local_complement_node(pivot);
  std::ostringstream os;
  os << "measure_out X spin=" << spin << " pivot=" << (pivot - 2) << " m=" << int(m);
  log_.lines.push_back(os.str());
  return m;
}

bool BuildSystem::pass_spin_join(size_t to, size_t from) {
  if (role(to) != QubitRole::aux_spin || role(from) != QubitRole::aux_spin)
    throw std::invalid_argument("spin-spin pass needs two auxiliary spins");
  apply_spin_spin(CliffordGate::two(GateKind::CZ, to, from), /*patching=*/false);
  graph_.add_edge(NodeId(to), NodeId(from));
  bool m = measure_out_graph_Y(from);
  std::ostringstream os;
  os << "pass spin_join to=" << to << " from=" << from << " m=" << int(m);
  log_.lines.push_back(os.str());
  return m;
}

void BuildSystem::respawn_spin(size_t spin) {
  if (role(spin) != QubitRole::aux_spin) throw std::invalid_argument("not a spin");
  if (graph_.has_node(NodeId(spin))) throw protocol_order_error("spin is still in the graph");
  apply_gate(CliffordGate::one(GateKind::H, spin));
  graph_.add_node(NodeId(spin));
}

std::pair<bool, bool> BuildSystem::patch(size_t spin1, size_t spin2) {
  if (role(spin1) != QubitRole::aux_spin || role(spin2) != QubitRole::aux_spin)
    throw std::invalid_argument("patch needs two auxiliary spins");
  bool ok1 = false, ok2 = false;
  for (NodeId b : graph_.neighbors(NodeId(spin1))) ok1 |= role(size_t(b)) == QubitRole::photon;
  for (NodeId b : graph_.neighbors(NodeId(spin2))) ok2 |= role(size_t(b)) == QubitRole::photon;
  if (!ok1 || !ok2)
    throw std::invalid_argument("each patched spin must head a subgraph with a first-layer photon");

  // Emitter-mediated bonding round: CZ to both spins, then a Y decoupling
  // measurement of the emitter, which toggles the spin-spin edge.
  auto bond_round = [&]() {
    apply_gate(CliffordGate::one(GateKind::H, kEmitter));
    graph_.add_node(NodeId(kEmitter));
    apply_spin_spin(CliffordGate::two(GateKind::CZ, kEmitter, spin1), /*patching=*/true);
    graph_.add_edge(NodeId(kEmitter), NodeId(spin1));
    apply_spin_spin(CliffordGate::two(GateKind::CZ, kEmitter, spin2), /*patching=*/true);
    graph_.add_edge(NodeId(kEmitter), NodeId(spin2));
    return measure_out_graph_Y(kEmitter);
  };
  bool mA = bond_round();
  // Plant spin2's first-layer photon onto spin1, then undo the bond.
  local_complement_node(spin2);
  bool mB = bond_round();
  std::ostringstream os;
  os << "patch spin1=" << spin1 << " spin2=" << spin2 << " m=" << int(mA) << "," << int(mB);
  log_.lines.push_back(os.str());
  return {mA, mB};
}

StabilizerState BuildSystem::corrected_state() const {
  StabilizerState out = real_;
  for (size_t q = 0; q < out.num_qubits(); ++q) {
    bool x = frame_.x_bit(q), z = frame_.z_bit(q);
    if (x && z)
      out.apply(GateKind::Y, q);
    else if (x)
      out.apply(GateKind::X, q);
    else if (z)
      out.apply(GateKind::Z, q);
  }
  return out;
}

bool BuildSystem::check_twin_invariants() const {
  StabilizerState corrected = corrected_state();
  if (!StabilizerState::states_equal(corrected, ideal_)) return false;
  // Ideal tableau equals the tracked graph state on the graph's nodes.
  auto nodes = graph_.nodes();
  if (nodes.empty()) return true;
  std::vector<size_t> qubits;
  for (NodeId a : nodes) qubits.push_back(size_t(a));
  auto got = ideal_.restricted_group(qubits);
  auto expect = circuit_from_graph(graph_).state.canonical_stabilizers();
  return got == expect;
}

Graph spider_graph() {
  std::vector<NodeId> ids;
  for (NodeId i = 1; i <= 12; ++i) ids.push_back(i);
  Graph g(ids);
  for (auto [a, b] : {std::pair<NodeId, NodeId>{1, 2}, {2, 3}, {3, 4}, {4, 12}, {5, 6}, {6, 7},
                      {7, 8}, {8, 12}, {9, 10}, {10, 11}, {11, 12}})
    g.add_edge(a, b);
  return g;
}

std::array<int, 13> build_emission_to_label() {
  // Emission order p1..p12 onto protocol labels: the first chain becomes the
  // short arm 9-10-11 plus hub 12 = p4, the later chains the long arms
  // 1-2-3-4 and 5-6-7-8.
  return {0, 9, 10, 11, 12, 1, 2, 3, 4, 5, 6, 7, 8};
}

BuildResult build_G(const HeraldModel& herald, uint64_t seed) {
  BuildSystem sys(herald, seed);

  // Step 1: photons p1..p4 to s1; join for p4, extend for the rest.
  for (int k = 1; k <= 4; ++k) {
    sys.emit_until_success();
    sys.pass(BuildSystem::kSpin1, k == 4 ? PassVariant::join : PassVariant::extend);
  }
  // Step 2: photons p5..p8 to s2; join for p5, extend for the rest.
  for (int k = 5; k <= 8; ++k) {
    sys.emit_until_success();
    sys.pass(BuildSystem::kSpin2, k == 5 ? PassVariant::join : PassVariant::extend);
  }
  // Step 3: pass the subgraph on s2 to s1 with the join subroutine; s2 is
  // measured out and freed for step 4.
  sys.pass_spin_join(BuildSystem::kSpin1, BuildSystem::kSpin2);
  sys.respawn_spin(BuildSystem::kSpin2);
  // Step 4: photons p9..p12 to s2; join for p9, extend for the rest.
  for (int k = 9; k <= 12; ++k) {
    sys.emit_until_success();
    sys.pass(BuildSystem::kSpin2, k == 9 ? PassVariant::join : PassVariant::extend);
  }
  // Step 5: patch the subgraph on s2 with s1, then measure out both spins.
  sys.patch(BuildSystem::kSpin1, BuildSystem::kSpin2);
  sys.measure_out_spin_X(BuildSystem::kSpin1, BuildSystem::photon_qubit(4));
  sys.measure_out_spin_Y(BuildSystem::kSpin2);

  BuildResult out{sys.state(), sys.byproduct_frame(), {}, sys.graph(), sys.byproducts(),
                  sys.log()};
  auto perm = build_emission_to_label();
  for (int p = 1; p <= 12; ++p) out.qubit_of_label[perm[p]] = BuildSystem::photon_qubit(p);
  return out;
}

}  // namespace gsf
