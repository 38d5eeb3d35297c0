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

#ifndef GSF_GRAPH_HPP
#define GSF_GRAPH_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gsf/tableau.hpp"

namespace gsf {

using NodeId = uint32_t;

/// Simple undirected graph with stable opaque node labels. Labels are never
/// reindexed on deletion so transcripts stay auditable.
class Graph {
 public:
  Graph() = default;
  explicit Graph(const std::vector<NodeId>& nodes);

  void add_node(NodeId a);
  void remove_node(NodeId a);
  void toggle_edge(NodeId a, NodeId b);
  void add_edge(NodeId a, NodeId b);
  bool has_node(NodeId a) const { return adj_.count(a) != 0; }
  bool has_edge(NodeId a, NodeId b) const;

  const std::set<NodeId>& neighbors(NodeId a) const;
  std::vector<NodeId> nodes() const;
  size_t num_nodes() const { return adj_.size(); }
  size_t num_edges() const;
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  /// Local complementation at a: complements the subgraph induced on N(a).
  void local_complement(NodeId a);

  bool operator==(const Graph& other) const { return adj_ == other.adj_; }

 private:
  std::map<NodeId, std::set<NodeId>> adj_;

  void require_node(NodeId a) const;
};

/// Graph-basis state Z^r |G>: a graph plus a conditional phase vector with
/// one bit per node, stored sparsely as the set of nodes with r = 1.
struct GraphBasisState {
  Graph graph;
  std::set<NodeId> phases;  // nodes with r_a = 1

  bool phase(NodeId a) const { return phases.count(a) != 0; }
  void flip_phase(NodeId a) {
    if (!phases.erase(a)) phases.insert(a);
  }
  void set_phase(NodeId a, bool v) {
    if (v)
      phases.insert(a);
    else
      phases.erase(a);
  }
};

/// One single-qubit correction attached to a node. `op` is a Clifford gate
/// kind restricted to {Z, SqrtZ_pos, SqrtZ_neg, SqrtX_pos, SqrtX_neg}; Z ops
/// carry the conditional exponent bit (identity when false).
struct LocalCorrection {
  NodeId node;
  GateKind op;
  bool apply = true;  // conditional exponent; false means identity
};

/// Maps a graph to the tableau of |G> = U_G |+>^V. Qubit q of the result is
/// node `index_of[q]`; nodes are sorted ascending.
struct GraphCircuit {
  StabilizerState state;
  std::vector<NodeId> qubit_to_node;

  size_t qubit_of(NodeId a) const;
};

GraphCircuit circuit_from_graph(const Graph& g, uint64_t seed = 0);
GraphCircuit circuit_from_state(const GraphBasisState& s, uint64_t seed = 0);

/// Stabilizer generators of Z^r|G>: generator a is (-1)^{r_a} X_a prod Z_b.
/// Qubit order is ascending node label.
std::vector<PauliTerm> stabilizer_generators(const GraphBasisState& s);

/// Local complementation at node a. Returns the transformed state and the
/// corrections (-iX_a)^{1/2}, (iZ_b)^{1/2} for b in N(a) that map the input
/// state's tableau onto the output's.
std::pair<GraphBasisState, std::vector<LocalCorrection>> local_complement(
    const GraphBasisState& s, NodeId a);

/// Z measurement on node a with outcome m: node removed, corrections are
/// Z_b^m on each neighbor.
std::pair<GraphBasisState, std::vector<LocalCorrection>> measure_graph_Z(
    const GraphBasisState& s, NodeId a, bool m);

/// Y measurement on node a with outcome m: graph becomes tau_a(G) - a.
/// Corrections include the conditional flips Z_b^{r_a+m} and the rotation
/// back to the graph basis, so the returned state is in graph form.
std::pair<GraphBasisState, std::vector<LocalCorrection>> measure_graph_Y(
    const GraphBasisState& s, NodeId a, bool m);

/// Measures along a chain ending just before survivor `survivor`: Y on
/// chain[0], then -X on the rest. The raw post-measurement survivor carries
/// the residual (-iZ)^{1/2} Z^Omega with Omega = sum (r_i + m_i); the
/// returned corrections are the inverse of that residual, mapping the
/// measured tableau onto the returned graph-basis state.
struct ChainResult {
  GraphBasisState state;
  bool omega;
  std::vector<LocalCorrection> corrections;  // on the survivor
};
ChainResult transmit_chain(const GraphBasisState& s, const std::vector<NodeId>& chain,
                           NodeId survivor, const std::vector<bool>& outcomes);

enum class ForkBasis { YY, ZZ };

/// Joint measurement of two nodes a, b sharing the single common neighbor c.
/// YY: survivor gains Z_c^{r_a+r_b+1+m_a+m_b}; ZZ: Z_c^{m_a+m_b}.
GraphBasisState fork_measure(const GraphBasisState& s, NodeId a, NodeId b, ForkBasis basis,
                             bool m_a, bool m_b);

/// Edge-list text format: one "a b" pair per line, then a "phases:" line
/// listing nodes with r=1. Bit-exact round trip.
std::string serialize_graph_state(const GraphBasisState& s);
GraphBasisState parse_graph_state(const std::string& text);

/// Gate sequence for a LocalCorrection list on a given qubit mapping.
std::vector<CliffordGate> correction_gates(const std::vector<LocalCorrection>& cs,
                                           const GraphCircuit& circ);

}  // namespace gsf

#endif  // GSF_GRAPH_HPP
