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

#include "gsf/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gsf {

Graph::Graph(const std::vector<NodeId>& nodes) {
  for (NodeId a : nodes) add_node(a);
}

void Graph::require_node(NodeId a) const {
  if (!has_node(a)) throw std::invalid_argument("unknown node " + std::to_string(a));
}

void Graph::add_node(NodeId a) {
  if (!adj_.emplace(a, std::set<NodeId>{}).second)
    throw std::invalid_argument("duplicate node " + std::to_string(a));
}

void Graph::remove_node(NodeId a) {
  require_node(a);
  for (NodeId b : adj_[a]) adj_[b].erase(a);
  adj_.erase(a);
}

void Graph::toggle_edge(NodeId a, NodeId b) {
  require_node(a);
  require_node(b);
  if (a == b) throw std::invalid_argument("no self loops");
  if (adj_[a].erase(b)) {
    adj_[b].erase(a);
  } else {
    adj_[a].insert(b);
    adj_[b].insert(a);
  }
}

void Graph::add_edge(NodeId a, NodeId b) {
  require_node(a);
  require_node(b);
  if (a == b) throw std::invalid_argument("no self loops");
  adj_[a].insert(b);
  adj_[b].insert(a);
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  auto it = adj_.find(a);
  return it != adj_.end() && it->second.count(b) != 0;
}

const std::set<NodeId>& Graph::neighbors(NodeId a) const {
  require_node(a);
  return adj_.at(a);
}

std::vector<NodeId> Graph::nodes() const {
  std::vector<NodeId> out;
  out.reserve(adj_.size());
  for (auto& [a, _] : adj_) out.push_back(a);
  return out;
}

size_t Graph::num_edges() const {
  size_t twice = 0;
  for (auto& [_, nb] : adj_) twice += nb.size();
  return twice / 2;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (auto& [a, nb] : adj_)
    for (NodeId b : nb)
      if (a < b) out.emplace_back(a, b);
  return out;
}

void Graph::local_complement(NodeId a) {
  require_node(a);
  std::vector<NodeId> nb(adj_[a].begin(), adj_[a].end());
  for (size_t i = 0; i < nb.size(); ++i)
    for (size_t j = i + 1; j < nb.size(); ++j) toggle_edge(nb[i], nb[j]);
}

size_t GraphCircuit::qubit_of(NodeId a) const {
  auto it = std::lower_bound(qubit_to_node.begin(), qubit_to_node.end(), a);
  if (it == qubit_to_node.end() || *it != a) throw std::invalid_argument("node not in circuit");
  return static_cast<size_t>(it - qubit_to_node.begin());
}

GraphCircuit circuit_from_graph(const Graph& g, uint64_t seed) {
  auto nodes = g.nodes();
  if (nodes.empty()) throw std::invalid_argument("empty graph");
  StabilizerState state(nodes.size(), Basis::all_plus, seed);
  GraphCircuit out{std::move(state), nodes};
  for (auto [a, b] : g.edges())
    out.state.apply(GateKind::CZ, out.qubit_of(a), out.qubit_of(b));
  return out;
}

GraphCircuit circuit_from_state(const GraphBasisState& s, uint64_t seed) {
  GraphCircuit c = circuit_from_graph(s.graph, seed);
  for (NodeId a : s.phases) c.state.apply(GateKind::Z, c.qubit_of(a));
  return c;
}

std::vector<PauliTerm> stabilizer_generators(const GraphBasisState& s) {
  auto nodes = s.graph.nodes();
  std::vector<PauliTerm> out;
  out.reserve(nodes.size());
  auto idx = [&](NodeId a) {
    return static_cast<size_t>(std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
  };
  for (NodeId a : nodes) {
    PauliTerm k(nodes.size());
    k.set_op(idx(a), 'X');
    for (NodeId b : s.graph.neighbors(a)) k.set_z(idx(b), true);
    k.set_neg(s.phase(a));
    out.push_back(k);
  }
  return out;
}

std::pair<GraphBasisState, std::vector<LocalCorrection>> local_complement(
    const GraphBasisState& s, NodeId a) {
  if (!s.graph.has_node(a)) throw std::invalid_argument("unknown node");
  GraphBasisState out = s;
  std::vector<LocalCorrection> cs;
  cs.push_back({a, GateKind::SqrtX_pos, true});
  for (NodeId b : s.graph.neighbors(a)) {
    cs.push_back({b, GateKind::SqrtZ_pos, true});
    // Z_a^{r_a} conjugates to (-Y_a)^{r_a}; pushed through, the graph-basis
    // phase of each neighbor picks up r_a.
    if (s.phase(a)) out.flip_phase(b);
  }
  out.graph.local_complement(a);
  return {out, cs};
}

std::pair<GraphBasisState, std::vector<LocalCorrection>> measure_graph_Z(
    const GraphBasisState& s, NodeId a, bool m) {
  if (!s.graph.has_node(a)) throw std::invalid_argument("unknown node");
  GraphBasisState out = s;
  std::vector<LocalCorrection> cs;
  for (NodeId b : s.graph.neighbors(a)) cs.push_back({b, GateKind::Z, m});
  out.graph.remove_node(a);
  out.phases.erase(a);
  return {out, cs};
}

std::pair<GraphBasisState, std::vector<LocalCorrection>> measure_graph_Y(
    const GraphBasisState& s, NodeId a, bool m) {
  if (!s.graph.has_node(a)) throw std::invalid_argument("unknown node");
  GraphBasisState out = s;
  std::vector<LocalCorrection> cs;
  bool flip = s.phase(a) ^ m;
  for (NodeId b : s.graph.neighbors(a)) {
    cs.push_back({b, GateKind::Z, flip});
    cs.push_back({b, GateKind::SqrtZ_pos, true});
  }
  out.graph.local_complement(a);
  out.graph.remove_node(a);
  out.phases.erase(a);
  return {out, cs};
}

ChainResult transmit_chain(const GraphBasisState& s, const std::vector<NodeId>& chain,
                           NodeId survivor, const std::vector<bool>& outcomes) {
  if (chain.empty()) throw std::invalid_argument("empty chain");
  if (outcomes.size() != chain.size()) throw std::invalid_argument("outcome count mismatch");
  // The measured nodes must form a pendant path terminating on the survivor.
  for (size_t i = 0; i < chain.size(); ++i) {
    if (!s.graph.has_node(chain[i])) throw std::invalid_argument("unknown chain node");
    NodeId next = (i + 1 < chain.size()) ? chain[i + 1] : survivor;
    std::set<NodeId> expect;
    if (i > 0) expect.insert(chain[i - 1]);
    expect.insert(next);
    if (s.graph.neighbors(chain[i]) != expect)
      throw std::invalid_argument("chain nodes do not form a pendant path");
  }
  if (!s.graph.has_node(survivor)) throw std::invalid_argument("unknown survivor");

  bool omega = false;
  GraphBasisState out = s;
  for (size_t i = 0; i < chain.size(); ++i) {
    omega = omega ^ s.phase(chain[i]) ^ outcomes[i];
    out.graph.remove_node(chain[i]);
    out.phases.erase(chain[i]);
  }
  std::vector<LocalCorrection> cs;
  cs.push_back({survivor, GateKind::Z, omega});
  cs.push_back({survivor, GateKind::SqrtZ_pos, true});
  return {out, omega, cs};
}

GraphBasisState fork_measure(const GraphBasisState& s, NodeId a, NodeId b, ForkBasis basis,
                             bool m_a, bool m_b) {
  if (!s.graph.has_node(a) || !s.graph.has_node(b))
    throw std::invalid_argument("unknown fork node");
  const auto& na = s.graph.neighbors(a);
  const auto& nb = s.graph.neighbors(b);
  if (a == b || na.size() != 1 || nb.size() != 1 || *na.begin() != *nb.begin())
    throw std::invalid_argument("fork nodes must share a single common neighbor");
  NodeId c = *na.begin();

  GraphBasisState out = s;
  bool flip;
  if (basis == ForkBasis::YY) {
    flip = s.phase(a) ^ s.phase(b) ^ true ^ m_a ^ m_b;
  } else {
    flip = m_a ^ m_b;
  }
  if (flip) out.flip_phase(c);
  out.graph.remove_node(a);
  out.graph.remove_node(b);
  out.phases.erase(a);
  out.phases.erase(b);
  return out;
}

std::string serialize_graph_state(const GraphBasisState& s) {
  std::ostringstream os;
  os << "nodes:";
  for (NodeId a : s.graph.nodes()) os << ' ' << a;
  os << '\n';
  for (auto [a, b] : s.graph.edges()) os << a << ' ' << b << '\n';
  os << "phases:";
  for (NodeId a : s.phases) os << ' ' << a;
  os << '\n';
  return os.str();
}

GraphBasisState parse_graph_state(const std::string& text) {
  GraphBasisState out;
  std::istringstream is(text);
  std::string line;
  bool saw_nodes = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "nodes:") {
      NodeId a;
      while (ls >> a) out.graph.add_node(a);
      saw_nodes = true;
    } else if (tok == "phases:") {
      NodeId a;
      while (ls >> a) {
        if (!out.graph.has_node(a)) throw std::invalid_argument("phase on unknown node");
        out.phases.insert(a);
      }
    } else {
      NodeId a = static_cast<NodeId>(std::stoul(tok));
      NodeId b;
      if (!(ls >> b)) throw std::invalid_argument("malformed edge line: " + line);
      if (!saw_nodes) {
        if (!out.graph.has_node(a)) out.graph.add_node(a);
        if (!out.graph.has_node(b)) out.graph.add_node(b);
      }
      out.graph.add_edge(a, b);
    }
  }
  return out;
}

std::vector<CliffordGate> correction_gates(const std::vector<LocalCorrection>& cs,
                                           const GraphCircuit& circ) {
  std::vector<CliffordGate> out;
  for (const auto& c : cs) {
    if (!c.apply) continue;
    out.push_back(CliffordGate::one(c.op, circ.qubit_of(c.node)));
  }
  return out;
}

}  // namespace gsf
