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

#include "gsf/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gsf {

// ---------------------------------------------------------------------------
// Boolean functions
// ---------------------------------------------------------------------------

int BooleanFunctionSpec::total_bits() const {
  int t = 0;
  for (int b : bits_per_party) t += b;
  return t;
}

size_t BooleanFunctionSpec::global_index(VarRef v) const {
  if (v.party < 0 || v.party >= n_parties || v.index < 0 || v.index >= bits_per_party[v.party])
    throw std::invalid_argument("variable out of range");
  size_t g = 0;
  for (int k = 0; k < v.party; ++k) g += bits_per_party[k];
  return g + v.index;
}

bool BooleanFunctionSpec::eval(const std::vector<std::vector<bool>>& inputs) const {
  if (int(inputs.size()) != n_parties) throw std::invalid_argument("input party count mismatch");
  for (int k = 0; k < n_parties; ++k)
    if (int(inputs[k].size()) != bits_per_party[k])
      throw std::invalid_argument("input width mismatch");
  if (anf_given) {
    bool acc = false;
    for (const auto& term : anf) {
      bool v = true;
      for (const auto& var : term) v = v && inputs[var.party][var.index];
      acc ^= v;
    }
    return acc;
  }
  size_t idx = 0, g = 0;
  for (int k = 0; k < n_parties; ++k)
    for (int i = 0; i < bits_per_party[k]; ++i, ++g)
      if (inputs[k][i]) idx |= size_t{1} << g;
  return truth_table.at(idx);
}

std::vector<std::vector<VarRef>> anf_from_truth_table(const BooleanFunctionSpec& spec) {
  int t = spec.total_bits();
  if (spec.truth_table.size() != (size_t{1} << t))
    throw std::invalid_argument("truth table size must be 2^total_bits");
  std::vector<bool> a = spec.truth_table;
  // In-place GF(2) Moebius transform.
  for (int bit = 0; bit < t; ++bit) {
    size_t step = size_t{1} << bit;
    for (size_t mask = 0; mask < a.size(); ++mask)
      if (mask & step) a[mask] = a[mask] ^ a[mask ^ step];
  }
  // Map global bit positions back to (party, index).
  std::vector<VarRef> by_global(t);
  {
    int g = 0;
    for (int k = 0; k < spec.n_parties; ++k)
      for (int i = 0; i < spec.bits_per_party[k]; ++i) by_global[g++] = VarRef{k, i};
  }
  std::vector<std::vector<VarRef>> terms;
  for (size_t mask = 0; mask < a.size(); ++mask) {
    if (!a[mask]) continue;
    std::vector<VarRef> term;
    for (int g = 0; g < t; ++g)
      if ((mask >> g) & 1) term.push_back(by_global[g]);
    terms.push_back(std::move(term));
  }
  return terms;
}

namespace {

VarRef parse_var(const std::string& tok) {
  // Tokens look like x0_1: party 0, index 1. The letter is cosmetic.
  auto us = tok.find('_');
  if (us == std::string::npos || us < 2)
    throw std::invalid_argument("bad variable token '" + tok + "'");
  return VarRef{std::stoi(tok.substr(1, us - 1)), std::stoi(tok.substr(us + 1))};
}

std::string var_str(VarRef v) {
  return "x" + std::to_string(v.party) + "_" + std::to_string(v.index);
}

}  // namespace

BooleanFunctionSpec BooleanFunctionSpec::parse(const std::string& text) {
  BooleanFunctionSpec spec;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "parties") {
      ls >> spec.n_parties;
    } else if (tok == "bits") {
      int b;
      while (ls >> b) spec.bits_per_party.push_back(b);
    } else if (tok == "table") {
      std::string bits;
      ls >> bits;
      for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bad table bit");
        spec.truth_table.push_back(c == '1');
      }
    } else if (tok == "and" || tok == "lin") {
      std::vector<VarRef> term;
      std::string v;
      while (ls >> v) term.push_back(parse_var(v));
      if (tok == "lin" && term.size() != 1)
        throw std::invalid_argument("lin lines take exactly one variable");
      if (term.empty()) throw std::invalid_argument("empty term");
      spec.anf.push_back(std::move(term));
      spec.anf_given = true;
    } else if (tok == "const") {
      spec.anf.push_back({});
      spec.anf_given = true;
    } else {
      throw std::invalid_argument("unknown directive '" + tok + "'");
    }
  }
  if (spec.n_parties <= 0 || int(spec.bits_per_party.size()) != spec.n_parties)
    throw std::invalid_argument("missing parties/bits header");
  if (!spec.anf_given && spec.truth_table.size() != (size_t{1} << spec.total_bits()))
    throw std::invalid_argument("truth table size must be 2^total_bits");
  return spec;
}

std::string BooleanFunctionSpec::serialize() const {
  std::ostringstream os;
  os << "parties " << n_parties << "\nbits";
  for (int b : bits_per_party) os << ' ' << b;
  os << '\n';
  if (anf_given) {
    for (const auto& term : anf) {
      if (term.empty()) {
        os << "const\n";
      } else if (term.size() == 1) {
        os << "lin " << var_str(term[0]) << '\n';
      } else {
        os << "and";
        for (auto v : term) os << ' ' << var_str(v);
        os << '\n';
      }
    }
  } else {
    os << "table ";
    for (bool b : truth_table) os << (b ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

ConjunctionPlan plan_conjunctions(const BooleanFunctionSpec& spec) {
  if (spec.n_parties < 2) throw std::invalid_argument("the protocol needs at least two parties");
  std::vector<std::vector<VarRef>> raw =
      spec.anf_given ? spec.anf : anf_from_truth_table(spec);
  // Normalize over GF(2): repeated variables collapse, repeated terms cancel.
  std::map<std::vector<VarRef>, int> counts;
  for (auto term : raw) {
    std::sort(term.begin(), term.end());
    term.erase(std::unique(term.begin(), term.end()), term.end());
    counts[term] ^= 1;
  }
  std::vector<std::vector<VarRef>> terms;
  for (const auto& [term, parity] : counts)
    if (parity) terms.push_back(term);

  ConjunctionPlan plan;
  plan.n_parties = spec.n_parties;
  plan.linear_terms.resize(spec.n_parties);
  for (auto& term : terms) {
    std::map<int, std::vector<VarRef>> by_party;
    for (auto v : term) by_party[v.party].push_back(v);
    if (by_party.empty()) {
      plan.constant = !plan.constant;
    } else if (by_party.size() == 1) {
      plan.linear_terms[by_party.begin()->first].push_back(term);
    } else if (by_party.size() == 2) {
      auto it = by_party.begin();
      Conjunction c;
      c.party_a = it->first;
      c.monomial_a = it->second;
      ++it;
      c.party_b = it->first;
      c.monomial_b = it->second;
      plan.conjunctions.push_back(std::move(c));
    } else {
      throw unsupported_function_error(
          "ANF conjunction touches more than two parties after grouping");
    }
  }
  // Every party must hold at least one conjunction; pad with zero inputs.
  std::vector<bool> seen(spec.n_parties, false);
  for (const auto& c : plan.conjunctions) seen[c.party_a] = seen[c.party_b] = true;
  for (int k = 0; k < spec.n_parties; ++k) {
    if (seen[k]) continue;
    Conjunction c;
    c.party_a = k;
    c.party_b = (k + 1) % spec.n_parties;
    c.padding = true;
    seen[c.party_a] = seen[c.party_b] = true;
    plan.conjunctions.push_back(std::move(c));
  }
  plan.a_sets.assign(spec.n_parties, {});
  plan.b_sets.assign(spec.n_parties, {});
  for (size_t i = 0; i < plan.conjunctions.size(); ++i) {
    plan.a_sets[plan.conjunctions[i].party_a].push_back(int(i));
    plan.b_sets[plan.conjunctions[i].party_b].push_back(int(i));
  }
  // Protocol-level input width per party: distinct conjunction monomials
  // plus the linear bit.
  int m_eff = 1;
  for (int k = 0; k < spec.n_parties; ++k) {
    std::set<std::vector<VarRef>> monos;
    for (const auto& c : plan.conjunctions) {
      if (c.party_a == k) monos.insert(c.monomial_a);
      if (c.party_b == k) monos.insert(c.monomial_b);
    }
    m_eff = std::max(m_eff, int(monos.size()) + 1);
  }
  plan.effective_m = m_eff;
  double n2 = double(spec.n_parties) * (spec.n_parties - 1) / 2.0;
  if (double(plan.conjunctions.size()) > n2 * double(m_eff - 1) * double(m_eff - 1))
    throw std::logic_error("conjunction count exceeds the structural bound");
  return plan;
}

bool ConjunctionPlan::a_input(size_t slot, const std::vector<std::vector<bool>>& inputs) const {
  const auto& c = conjunctions.at(slot);
  if (c.padding) return false;
  bool v = true;
  for (auto var : c.monomial_a) v = v && inputs[var.party][var.index];
  return v;
}

bool ConjunctionPlan::b_input(size_t slot, const std::vector<std::vector<bool>>& inputs) const {
  const auto& c = conjunctions.at(slot);
  if (c.padding) return false;
  bool v = true;
  for (auto var : c.monomial_b) v = v && inputs[var.party][var.index];
  return v;
}

bool ConjunctionPlan::effective_z(int party, const std::vector<std::vector<bool>>& inputs) const {
  bool z = (party == 0) ? constant : false;
  for (const auto& term : linear_terms.at(party)) {
    bool v = true;
    for (auto var : term) v = v && inputs[var.party][var.index];
    z ^= v;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Stage I
// ---------------------------------------------------------------------------

ProtocolCopy make_ideal_copy(uint64_t seed) {
  GraphCircuit c = circuit_from_graph(spider_graph(), seed);
  ProtocolCopy copy{std::move(c.state), {}, PauliTerm(12)};
  for (int l = 1; l <= 12; ++l) copy.qubit_of_label[l] = size_t(l - 1);
  return copy;
}

ProtocolCopy copy_from_build(const BuildResult& b, bool apply_corrections) {
  ProtocolCopy copy{b.state, b.qubit_of_label, PauliTerm(b.state.num_qubits())};
  if (apply_corrections) {
    for (size_t q = 0; q < copy.state.num_qubits(); ++q) {
      bool x = b.byproduct_correction.x_bit(q), z = b.byproduct_correction.z_bit(q);
      if (x && z)
        copy.state.apply(GateKind::Y, q);
      else if (x)
        copy.state.apply(GateKind::X, q);
      else if (z)
        copy.state.apply(GateKind::Z, q);
    }
  } else {
    copy.frame = b.byproduct_correction;
  }
  return copy;
}

namespace {

struct Measurer {
  ProtocolCopy& copy;
  std::optional<uint32_t> bits;
  int used = 0;

  bool measure(int label, char basis) {
    PauliTerm obs =
        PauliTerm::single(copy.state.num_qubits(), copy.qubit_of_label[size_t(label)], basis);
    bool eps = !copy.frame.commutes_with(obs);
    MeasureResult r;
    if (bits.has_value() && !copy.state.deterministic_eigenvalue(obs).has_value()) {
      bool want = (*bits >> used) & 1;
      ++used;
      r = copy.state.measure_forced(obs, want ^ eps);
    } else {
      r = copy.state.measure(obs);
    }
    return r.outcome ^ eps;
  }

  void rotate_z(int label, bool on) {
    if (on) copy.state.apply(GateKind::Z, copy.qubit_of_label[size_t(label)]);
  }
};

const std::vector<StageStep> kCanonicalOrder = {StageStep::I1, StageStep::I2, StageStep::I3,
                                                StageStep::I4, StageStep::I5, StageStep::I6};

}  // namespace

StageOneOutcomes run_stage1(ProtocolCopy& copy, bool a, const std::vector<StageStep>& order,
                            std::optional<uint32_t> branch_bits) {
  const std::vector<StageStep>& steps = order.empty() ? kCanonicalOrder : order;
  {
    // The first-round measurements must all happen before the conditional ones.
    std::vector<StageStep> sorted = steps;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != kCanonicalOrder) throw std::invalid_argument("each stage step exactly once");
    int seen_early = 0;
    for (auto st : steps) {
      if (st == StageStep::I1 || st == StageStep::I2 || st == StageStep::I3) {
        ++seen_early;
      } else if (seen_early < 3) {
        throw protocol_order_error("steps I.1-I.3 must precede I.4-I.6");
      }
    }
  }
  Measurer mx{copy, branch_bits};
  StageOneOutcomes oc;
  for (auto st : steps) {
    switch (st) {
      case StageStep::I1:
        oc.m[1] = mx.measure(1, 'Z');
        oc.m[5] = mx.measure(5, 'Z');
        break;
      case StageStep::I2:
        oc.m[2] = mx.measure(2, 'X');
        oc.m[6] = mx.measure(6, 'X');
        oc.m[9] = mx.measure(9, 'X');
        break;
      case StageStep::I3:
        oc.m[3] = mx.measure(3, 'Z');
        oc.m[7] = mx.measure(7, 'Z');
        oc.m[10] = mx.measure(10, 'Z');
        break;
      case StageStep::I4:
        mx.rotate_z(4, oc.m[2]);
        oc.m[4] = mx.measure(4, a ? 'Y' : 'Z');
        oc.m[11] = mx.measure(11, a ? 'Y' : 'Z');
        break;
      case StageStep::I5:
        mx.rotate_z(8, oc.m[6]);
        oc.m[8] = mx.measure(8, oc.m[10] ? 'Y' : 'Z');
        break;
      case StageStep::I6:
        oc.m[12] = mx.measure(12, oc.m[9] ? 'Y' : 'X');
        break;
    }
  }
  oc.s = oc.m[9];
  // Exactly eight of the twelve measurements are random on a valid copy;
  // branch enumeration relies on that count.
  if (branch_bits.has_value() && mx.used != 8)
    throw std::logic_error("unexpected measurement randomness pattern");
  return oc;
}

bool compute_alpha(const StageOneOutcomes& oc, bool a, bool c_B) {
  return (c_B && a) ^ oc.m[4] ^ oc.m[11];
}

bool compute_beta(const StageOneOutcomes& oc, bool c_A) {
  return (c_A && oc.m[10]) ^ oc.m[8];
}

CopyTranscript run_copy(ProtocolCopy& copy, bool a, bool b,
                        std::optional<uint32_t> branch_bits) {
  CopyTranscript t;
  t.a = a;
  t.b = b;
  t.oc = run_stage1(copy, a, {}, branch_bits);
  t.c_A = t.oc.m[5] ^ a;
  t.c_B = t.oc.m[1] ^ b ^ 1;
  t.alpha = compute_alpha(t.oc, a, t.c_B);
  t.beta = compute_beta(t.oc, t.c_A);
  return t;
}

StageTwoResult run_stage2(const std::vector<CopyTranscript>& per_slot,
                          const ConjunctionPlan& plan,
                          const std::vector<std::vector<bool>>& inputs) {
  if (per_slot.size() != plan.r_conj())
    throw incomplete_transcript_error("transcript count does not match the plan");
  StageTwoResult out;
  out.gamma.assign(plan.n_parties, false);
  for (int k = 0; k < plan.n_parties; ++k) {
    bool g = plan.effective_z(k, inputs);
    for (int i : plan.a_sets[k]) g ^= per_slot[size_t(i)].alpha;
    for (int i : plan.b_sets[k]) g ^= per_slot[size_t(i)].beta;
    out.gamma[k] = g;
  }
  out.gamma_R = false;
  for (const auto& t : per_slot) out.gamma_R ^= t.oc.m[12];
  out.value = out.gamma_R;
  for (bool g : out.gamma) out.value ^= g;
  return out;
}

ProtocolRunResult run_protocol(const BooleanFunctionSpec& spec,
                               const std::vector<std::vector<bool>>& inputs, uint64_t seed,
                               const HeraldModel* build_herald) {
  ConjunctionPlan plan = plan_conjunctions(spec);
  Rng master(seed);
  ProtocolRunResult out;
  for (size_t i = 0; i < plan.r_conj(); ++i) {
    uint64_t copy_seed = master.split(i).next_u64();
    ProtocolCopy copy =
        build_herald
            ? copy_from_build(build_G(*build_herald, copy_seed), /*apply_corrections=*/false)
            : make_ideal_copy(copy_seed);
    out.copies.push_back(
        run_copy(copy, plan.a_input(i, inputs), plan.b_input(i, inputs)));
  }
  out.stage2 = run_stage2(out.copies, plan, inputs);
  out.expected = spec.eval(inputs);
  return out;
}

std::string transcripts_to_csv(const std::vector<CopyTranscript>& ts) {
  std::ostringstream os;
  os << "copy,field,value\n";
  for (size_t i = 0; i < ts.size(); ++i) {
    for (int l = 1; l <= 12; ++l)
      os << i << ",m" << l << "," << int(ts[i].oc.m[size_t(l)]) << '\n';
    os << i << ",c_A," << int(ts[i].c_A) << '\n';
    os << i << ",c_B," << int(ts[i].c_B) << '\n';
    os << i << ",alpha," << int(ts[i].alpha) << '\n';
    os << i << ",beta," << int(ts[i].beta) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Noise and repetition coding
// ---------------------------------------------------------------------------

std::vector<std::vector<SubIteration>> make_subiterations(const std::vector<bool>& ab_values,
                                                          int K, Rng& rng) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  std::vector<std::vector<SubIteration>> out(ab_values.size());
  for (size_t i = 0; i < ab_values.size(); ++i) {
    out[i].reserve(size_t(K));
    for (int j = 0; j < K; ++j) {
      bool alpha = rng.next_bit(), beta = rng.next_bit();
      out[i].push_back({bool(ab_values[i] ^ alpha ^ beta), alpha, beta});
    }
  }
  return out;
}

EcResult apply_noise_and_correct(const std::vector<std::vector<SubIteration>>& reps,
                                 double eps_star, Rng& rng) {
  if (eps_star < 0 || eps_star >= 0.5)
    throw std::invalid_argument("per-copy error probability out of range");
  EcResult out;
  out.gamma_R = false;
  for (const auto& subs : reps) {
    if (subs.empty()) throw incomplete_transcript_error("conjunction with no sub-iterations");
    int votes_one = 0;
    for (size_t j = 0; j < subs.size(); ++j) {
      bool noisy_m12 = subs[j].m12 ^ rng.next_bernoulli(eps_star);
      // Re-pad onto the first sub-iteration's private pads using the opened
      // differences alpha_1+alpha_j and beta_1+beta_j.
      bool repadded = noisy_m12 ^ (subs[0].alpha ^ subs[j].alpha) ^ (subs[0].beta ^ subs[j].beta);
      if (repadded) ++votes_one;
    }
    bool majority = votes_one * 2 > int(subs.size());
    out.majority.push_back(majority);
    out.gamma_R ^= majority;
  }
  return out;
}

ChooseKResult choose_K(double eps_star, size_t r_conj, double eps_f) {
  if (eps_star >= 0.5) throw std::domain_error("per-copy error rate 1/2 or more is uncorrectable");
  if (eps_star < 0 || eps_f <= 0 || r_conj == 0) throw std::invalid_argument("bad arguments");
  int k = -1;
  for (int cand = 1; cand <= 10000000; ++cand) {
    double margin = 0.5 - eps_star - 0.5 / cand;
    if (margin <= 0) continue;
    if (double(r_conj) * std::exp(-2.0 * cand * margin * margin) <= eps_f) {
      k = cand;
      break;
    }
  }
  if (k < 0) throw std::runtime_error("no repetition count satisfies the bound");
  double denom = (0.5 - eps_star) * (0.5 - eps_star);
  int closed = int(std::ceil(std::log(std::sqrt(double(r_conj) / eps_f)) / denom));
  return {k, std::max(closed, 1)};
}

double rate_lower_bound(int m_bits, int n_parties, double eps_f, double eps_star, double r0) {
  if (m_bits < 2 || n_parties < 2) throw std::invalid_argument("need M >= 2 and N >= 2");
  if (eps_star >= 0.5) throw std::domain_error("per-copy error rate 1/2 or more is uncorrectable");
  if (eps_f <= 0 || r0 <= 0) throw std::invalid_argument("bad arguments");
  double denom = (0.5 - eps_star) * (0.5 - eps_star);
  double inner = std::ceil(std::log((m_bits - 1) * n_parties / std::sqrt(2.0 * eps_f)) / denom);
  return r0 / (6.0 * (m_bits - 1) * (m_bits - 1) * double(n_parties) * n_parties * inner);
}

// ---------------------------------------------------------------------------
// Security traces
// ---------------------------------------------------------------------------

namespace {

struct TraceMeasurer {
  ProtocolCopy& copy;
  uint32_t bits;
  int used = 0;
  std::array<bool, 13> m{};

  bool measure(int label, char basis) {
    PauliTerm obs =
        PauliTerm::single(copy.state.num_qubits(), copy.qubit_of_label[size_t(label)], basis);
    MeasureResult r;
    if (!copy.state.deterministic_eigenvalue(obs).has_value()) {
      r = copy.state.measure_forced(obs, (bits >> used) & 1);
      ++used;
    } else {
      r = copy.state.measure(obs);
    }
    m[size_t(label)] = r.outcome;
    return r.outcome;
  }

  void rotate_z(int label, bool on) {
    if (on) copy.state.apply(GateKind::Z, copy.qubit_of_label[size_t(label)]);
  }
};

PauliTerm expected_term(const std::vector<int>& labels, bool sign,
                        std::initializer_list<std::pair<int, char>> ops) {
  PauliTerm p(labels.size());
  for (auto [label, op] : ops) {
    auto it = std::find(labels.begin(), labels.end(), label);
    p.set_op(size_t(it - labels.begin()), op);
  }
  p.set_neg(sign);
  return p;
}

}  // namespace

TraceReport trace_security_stabilizers(TraceScenario sc, bool collect) {
  TraceReport report;
  report.scenario = sc;
  switch (sc) {
    case TraceScenario::honest_B_R:
      report.idle_labels = {2, 4, 5, 11};
      break;
    case TraceScenario::honest_A_R:
      report.idle_labels = {1, 6, 8, 10};
      break;
    case TraceScenario::honest_P_S:
      report.idle_labels = {3, 7, 9, 12};
      break;
  }
  const int n_free = (sc == TraceScenario::honest_B_R) ? 7 : 8;
  const int n_inputs = (sc == TraceScenario::honest_B_R) ? 1 : 2;  // a basis choice
  for (int a_in = 0; a_in < n_inputs; ++a_in) {
    bool a = a_in != 0;
    for (uint32_t bits = 0; bits < (uint32_t{1} << n_free); ++bits) {
      ProtocolCopy copy = make_ideal_copy(0);
      TraceMeasurer mx{copy, bits};
      std::vector<PauliTerm> expect;
      const auto& L = report.idle_labels;
      if (sc == TraceScenario::honest_B_R) {
        // Honest B and R play the full sequence; A's qubits are untouched.
        mx.measure(1, 'Z');
        mx.measure(6, 'X');
        mx.measure(9, 'X');
        mx.measure(3, 'Z');
        mx.measure(7, 'Z');
        mx.measure(10, 'Z');
        mx.rotate_z(8, mx.m[6]);
        mx.measure(8, mx.m[10] ? 'Y' : 'Z');
        mx.measure(12, mx.m[9] ? 'Y' : 'X');
        bool s = mx.m[9];
        expect = {
            expected_term(L, mx.m[1] ^ mx.m[3], {{2, 'X'}}),
            expected_term(L, mx.m[6] ^ mx.m[7], {{5, 'Z'}}),
            expected_term(L, mx.m[3] ^ s, {{4, 'X'}, {11, 'X'}}),
            expected_term(L, ((mx.m[6] ^ mx.m[7]) && s) ^ mx.m[8] ^ mx.m[12],
                          {{4, 'Z'}, {11, 'Z'}}),
        };
      } else if (sc == TraceScenario::honest_A_R) {
        mx.measure(5, 'Z');
        mx.measure(2, 'X');
        mx.measure(9, 'X');
        mx.measure(3, 'Z');
        mx.measure(7, 'Z');
        mx.rotate_z(4, mx.m[2]);
        mx.measure(4, a ? 'Y' : 'Z');
        mx.measure(11, a ? 'Y' : 'Z');
        mx.measure(12, mx.m[9] ? 'Y' : 'X');
        bool s = mx.m[9];
        expect = {
            expected_term(L, mx.m[2] ^ mx.m[3], {{1, 'Z'}}),
            expected_term(L, mx.m[5] ^ mx.m[7], {{6, 'X'}}),
            expected_term(L, mx.m[9], {{10, 'Z'}}),
            expected_term(L,
                          (a && (mx.m[2] ^ mx.m[3] ^ s ^ 1)) ^ (mx.m[7] && s) ^ mx.m[4] ^
                              mx.m[11] ^ mx.m[12],
                          {{8, s ? 'Y' : 'Z'}}),
        };
      } else {
        mx.measure(1, 'Z');
        mx.measure(5, 'Z');
        mx.measure(2, 'X');
        mx.measure(6, 'X');
        mx.measure(10, 'Z');
        mx.rotate_z(4, mx.m[2]);
        mx.rotate_z(8, mx.m[6]);
        mx.measure(4, a ? 'Y' : 'Z');
        mx.measure(11, a ? 'Y' : 'Z');
        mx.measure(8, mx.m[10] ? 'Y' : 'Z');
        bool s = mx.m[10];
        expect = {
            expected_term(L, mx.m[1] ^ mx.m[2], {{3, 'Z'}}),
            expected_term(L, mx.m[5] ^ mx.m[6], {{7, 'Z'}}),
            expected_term(L, s, {{9, 'X'}}),
            expected_term(L,
                          (a && (mx.m[1] ^ s ^ 1)) ^ (mx.m[5] && s) ^ mx.m[4] ^ mx.m[8] ^
                              mx.m[11],
                          {{12, s ? 'Y' : 'X'}}),
        };
      }
      std::vector<size_t> qubits;
      for (int l : report.idle_labels) qubits.push_back(copy.qubit_of_label[size_t(l)]);
      auto got = copy.state.restricted_group(qubits);
      canonicalize_pauli_rows(expect, report.idle_labels.size());
      ++report.branches;
      if (got != expect) {
        ++report.mismatches;
        if (!collect)
          throw std::logic_error("security trace mismatch in branch " + std::to_string(bits));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// View distributions and simulators
// ---------------------------------------------------------------------------

void Distribution::add(const std::vector<bool>& key, uint64_t w) {
  counts[key] += w;
  total += w;
}

bool Distribution::uniform() const {
  if (counts.empty()) return false;
  size_t bits = counts.begin()->first.size();
  if (counts.size() != (size_t{1} << bits)) return false;
  uint64_t w = counts.begin()->second;
  for (const auto& [k, v] : counts)
    if (v != w) return false;
  return true;
}

double total_variation(const Distribution& a, const Distribution& b) {
  std::set<std::vector<bool>> keys;
  for (const auto& [k, _] : a.counts) keys.insert(k);
  for (const auto& [k, _] : b.counts) keys.insert(k);
  double tv = 0;
  for (const auto& k : keys) {
    double pa = a.counts.count(k) ? double(a.counts.at(k)) / double(a.total) : 0.0;
    double pb = b.counts.count(k) ? double(b.counts.at(k)) / double(b.total) : 0.0;
    tv += std::abs(pa - pb);
  }
  return tv / 2;
}

Distribution real_view_S_as_A(bool a, bool b, bool z_B, AdversaryRule c_A_rule) {
  Distribution dist;
  for (uint32_t bits = 0; bits < 256; ++bits) {
    ProtocolCopy copy = make_ideal_copy(0);
    CopyTranscript t = run_copy(copy, a, b, bits);
    // The colluding party S plays A: it sees its own outcomes and the honest
    // openings, then broadcasts an arbitrary message.
    std::vector<bool> mhat = {t.oc.m[2], t.oc.m[4], t.oc.m[5], t.oc.m[11]};
    bool c_A_hat = c_A_rule(mhat);
    bool beta = compute_beta(t.oc, c_A_hat);
    bool gamma_P = z_B ^ beta;   // honest P holds only the B role here
    bool gamma_R = t.oc.m[12];   // single copy
    dist.add({t.oc.m[2], t.oc.m[4], t.oc.m[5], t.oc.m[11], t.c_B, gamma_P, gamma_R});
  }
  return dist;
}

Distribution ideal_view_S_as_A(bool a, bool b, bool z_B, AdversaryRule c_A_rule) {
  // The simulator runs the adversary program (basis choice a plus the message
  // rule), samples the uniform view bits, submits the effective input
  // e = m5 + c_A_hat to the ideal functionality, and reconstructs the
  // referee's opening from the function value. When the adversary's opening
  // is inconsistent with its basis (e != a), the hidden pad bit decouples the
  // opening from the honest input entirely.
  Distribution dist;
  for (uint32_t bits = 0; bits < 128; ++bits) {
    bool m2 = bits & 1, m4 = (bits >> 1) & 1, m5 = (bits >> 2) & 1, m11 = (bits >> 3) & 1;
    bool c_B = (bits >> 4) & 1, gamma_P = (bits >> 5) & 1, pad = (bits >> 6) & 1;
    bool c_A_hat = c_A_rule({m2, m4, m5, m11});
    bool e_tilde = m5 ^ c_A_hat;
    bool f_out = (b && e_tilde) ^ z_B;  // f_ideal(x_tilde, e_tilde)
    bool gamma_R = f_out ^ ((a ^ e_tilde) && pad) ^ (a && c_B) ^ m4 ^ m11 ^ gamma_P;
    dist.add({m2, m4, m5, m11, c_B, gamma_P, gamma_R}, 2);  // 128 * 2 = 256
  }
  return dist;
}

Distribution real_view_R(bool a, bool b, bool z_A, bool z_B) {
  Distribution dist;
  for (uint32_t bits = 0; bits < 256; ++bits) {
    ProtocolCopy copy = make_ideal_copy(0);
    CopyTranscript t = run_copy(copy, a, b, bits);
    bool gamma_P = z_A ^ t.alpha;
    bool gamma_S = z_B ^ t.beta;
    // Correctness identity on every branch.
    bool f = (a && b) ^ z_A ^ z_B;
    if ((gamma_P ^ gamma_S ^ t.oc.m[12]) != f)
      throw std::logic_error("stage II correctness identity failed");
    dist.add({t.oc.m[3], t.oc.m[7], t.oc.m[9], t.oc.m[12], t.c_A, t.c_B, gamma_P, gamma_S});
  }
  return dist;
}

Distribution transcript_distribution(bool a, bool b, bool z_A, bool z_B, ViewParty who) {
  if (who == ViewParty::referee) return real_view_R(a, b, z_A, z_B);
  return real_view_S_as_A(a, b, z_B, [a](const std::vector<bool>& v) {
    return v[2] ^ a;  // the honest opening c_A = m5 + a
  });
}

Distribution ideal_view_R(bool a, bool b, bool z_A, bool z_B) {
  Distribution dist;
  bool f = (a && b) ^ z_A ^ z_B;
  for (uint32_t bits = 0; bits < 128; ++bits) {
    bool m3 = bits & 1, m7 = (bits >> 1) & 1, m9 = (bits >> 2) & 1, m12 = (bits >> 3) & 1;
    bool c_A = (bits >> 4) & 1, c_B = (bits >> 5) & 1, gamma_P = (bits >> 6) & 1;
    bool gamma_S = f ^ gamma_P ^ m12;
    dist.add({m3, m7, m9, m12, c_A, c_B, gamma_P, gamma_S}, 2);  // 128 * 2 = 256
  }
  return dist;
}

}  // namespace gsf
