// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities.
#include "doctest.h"
#include "dense_oracle.hpp"
#include "gsf/analysis.hpp"
#include "gsf/builder.hpp"
#include "gsf/channel.hpp"
#include "gsf/fock.hpp"
#include "gsf/graph.hpp"
#include "gsf/mpc.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace gsf;
using gsf_test::DenseState;

namespace {

struct Criterion {
  int id;
  const char* title;
  bool ok = true;
  std::string note;

  ~Criterion() {
    if (std::uncaught_exceptions() > 0) ok = false;  // aborted mid-criterion
    std::printf("ACCEPTANCE %02d %s: %s%s%s\n", id, ok ? "PASS" : "FAIL", title,
                note.empty() ? "" : " | ", note.c_str());
    std::fflush(stdout);
  }
  void expect(bool cond) {
    CHECK(cond);
    ok = ok && cond;
  }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

Graph random_graph(Rng& rng, size_t n) {
  std::vector<NodeId> ids;
  for (size_t i = 0; i < n; ++i) ids.push_back(NodeId(i + 1));
  Graph g(ids);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (rng.next_bit()) g.add_edge(ids[i], ids[j]);
  return g;
}

GraphBasisState random_state(Rng& rng, size_t n) {
  GraphBasisState s{random_graph(rng, n), {}};
  for (NodeId a : s.graph.nodes())
    if (rng.next_bit()) s.phases.insert(a);
  return s;
}

bool graph_op_matches_tableau(const GraphBasisState& in,
                              const std::vector<std::pair<PauliTerm, bool>>& ms,
                              const std::vector<LocalCorrection>& cs, const GraphBasisState& out) {
  GraphCircuit circ = circuit_from_state(in);
  for (auto& [obs, m] : ms) circ.state.measure_forced(obs, m);
  apply_all(circ.state, correction_gates(cs, circ));
  std::vector<size_t> qubits;
  for (NodeId a : out.graph.nodes()) qubits.push_back(circ.qubit_of(a));
  auto got = circ.state.restricted_group(qubits);
  auto expect = circuit_from_state(out).state.canonical_stabilizers();
  return got == expect;
}

PauliTerm obs_on(const GraphCircuit& circ, NodeId a, char p, bool negative = false) {
  return PauliTerm::single(circ.state.num_qubits(), circ.qubit_of(a), p, negative);
}

std::string run_cli_capture(const std::string& args, const std::string& outfile) {
  std::string cmd = std::string(GSF_CLI_PATH) + " " + args + " --out " + outfile;
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream f(outfile);
  REQUIRE(bool(f));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) { return std::string(GSF_TMP_DIR) + "/" + name; }

}  // namespace

TEST_CASE("acceptance 01: construction-time scaling") {
  Criterion c{1, "construction-time Monte Carlo matches analytic expectations"};
  double t0 = now_seconds();
  const uint64_t trials = 10000;
  Rng rng(20250801);
  for (double eta : {0.1, 0.5, 0.9}) {
    auto mc = mc_emit_build_times(100, eta, trials, rng.split());
    for (int n = 1; n <= 100; ++n) {
      double expect = expected_build_time(BuildScheme::emit_then_add, n, eta);
      const auto& est = mc[size_t(n - 1)];
      c.expect(std::abs(est.mean - expect) <= 3 * est.stderr_mean + 1e-9);
    }
    for (int n = 1; n <= 100; ++n) {
      double expect = expected_build_time(BuildScheme::deterministic, n, eta);
      if (expect > 20000) continue;
      auto est = mc_deterministic_build_time(n, eta, trials, rng.split());
      c.expect(std::abs(est.mean - expect) <= 3 * est.stderr_mean + 1e-9);
    }
  }
  // The headline point: emit-then-add at eta 0.1, 100 photons, 1000 cycles.
  auto head = mc_emit_build_times(100, 0.1, trials, rng.split())[99];
  c.expect(std::abs(head.mean - 1000.0) <= 3 * head.stderr_mean);
  double dt = now_seconds() - t0;
  c.expect(dt < 60.0);
  c.note = "emit(0.1,100) mean=" + std::to_string(head.mean) + " runtime=" +
           std::to_string(dt) + "s";
}

TEST_CASE("acceptance 02: fidelity cutoffs") {
  Criterion c{2, "max graph sizes at F_add in {0.99, 0.999, 0.9999}"};
  long n99 = max_graph_size(0.99);
  long n999 = max_graph_size(0.999);
  long n9999 = max_graph_size(0.9999);
  c.expect(n99 == 68);
  c.expect(n999 >= 600 && n999 <= 700);
  c.expect(n9999 >= 6900 && n9999 <= 7000);
  c.expect(std::pow(0.999, double(n999)) >= 0.5 && std::pow(0.999, double(n999 + 1)) < 0.5);
  c.expect(std::pow(0.9999, double(n9999)) >= 0.5 && std::pow(0.9999, double(n9999 + 1)) < 0.5);
  c.note = "68 / " + std::to_string(n999) + " / " + std::to_string(n9999);
}

TEST_CASE("acceptance 03: per-copy error of the 12-photon state") {
  Criterion c{3, "1 - F_G = 1 - 0.99^17 = 0.157 with dephasing neglected"};
  HardwareParams p;
  p.F_CZ = 0.99;  // F_add = 0.99 via its entangling-gate component
  double err = 1.0 - fidelity_G(p);
  c.expect(std::abs(err - 0.157) < 5e-4);
  c.expect(std::abs((1.0 - std::pow(0.99, 17)) - err) < 1e-12);
  c.note = "per-copy error = " + std::to_string(err);
}

TEST_CASE("acceptance 04: error-corrected rate lower bound") {
  Criterion c{4, "rate bound R0/792 at (M=2, N=2, eps_f=1e-3, eps*=0.157); curves monotone"};
  c.expect(rate_lower_bound(2, 2, 1e-3, 0.157, 1.0) == 1.0 / 792.0);
  c.expect(rate_lower_bound(2, 2, 1e-3, 0.157, 7.5) == 7.5 / 792.0);
  for (double eps_f : {1e-3, 1e-12}) {
    double prev = 1e300;
    for (int m = 2; m <= 41; ++m) {
      double r = rate_lower_bound(m, 2, eps_f, 0.157, 1.0);
      c.expect(r < prev);
      prev = r;
    }
  }
  c.note = "bound(2,2,1e-3,0.157) = R0/792";
}

TEST_CASE("acceptance 05: swap-model closed forms against the Fock oracle") {
  Criterion c{5, "P_t and P_s match the truncated-Fock oracle to 1e-6 over the grid"};
  double t0 = now_seconds();
  double worst = 0.0;
  for (double ee : {0.1, 0.325, 0.55, 0.775, 1.0})
    for (double es : {0.1, 0.325, 0.55, 0.775, 1.0})
      for (double ei : {0.1, 0.325, 0.55, 0.775, 1.0})
        for (double mu : {0.0, 1e-3})
          for (double xi : {0.005, 0.02, 0.05}) {
            HardwareParams p;
            p.eta_e = ee;
            p.eta_s = es;
            p.eta_i = ei;
            p.xi = xi;
            p.R_d = mu;
            p.t_exp = 1.0;
            auto r = fock_oracle(p, {8});
            double ct = p_true(p), cs = p_success(p);
            double rel_t = std::abs(ct - r.p_t) / std::max(ct, 1e-300);
            double rel_s = std::abs(cs - r.p_s) / std::max(cs, 1e-300);
            worst = std::max({worst, rel_t, rel_s});
            c.expect(rel_t <= 1e-6);
            c.expect(rel_s <= 1e-6);
            c.expect(r.p_t <= r.p_s + 1e-15);
          }
  // Unit efficiencies, zero dark counts: the swap is exact.
  HardwareParams ideal;
  ideal.xi = 0.03;
  c.expect(std::abs(f_swap(ideal) - 1.0) < 1e-12);
  double dt = now_seconds() - t0;
  c.expect(dt < 300.0);
  std::ostringstream note;
  note << "750 grid points, worst rel err " << worst << ", runtime " << dt << "s";
  c.note = note.str();
}

TEST_CASE("acceptance 06: stabilizer engine against the dense oracle") {
  Criterion c{6, "tableau vs statevector on 10^3 random Clifford+measurement circuits"};
  Rng meta(424242);
  static const GateKind one[] = {GateKind::H,         GateKind::S,         GateKind::S_dag,
                                 GateKind::X,         GateKind::Y,         GateKind::Z,
                                 GateKind::SqrtX_pos, GateKind::SqrtX_neg, GateKind::SqrtZ_pos,
                                 GateKind::SqrtZ_neg};
  for (int circuit = 0; circuit < 1000; ++circuit) {
    size_t n = 2 + meta.next_below(7);
    StabilizerState tab(n, Basis::all_plus, meta.next_u64());
    DenseState dense(n, Basis::all_plus);
    for (int g = 0; g < 30; ++g) {
      CliffordGate gate;
      if (n >= 2 && meta.next_below(3) == 0) {
        size_t a = meta.next_below(n), b = meta.next_below(n - 1);
        if (b >= a) ++b;
        gate = CliffordGate::two(meta.next_bit() ? GateKind::CZ : GateKind::CX, a, b);
      } else {
        gate = CliffordGate::one(one[meta.next_below(10)], meta.next_below(n));
      }
      tab.apply(gate);
      dense.apply(gate);
    }
    for (int mi = 0; mi < 2; ++mi) {
      PauliTerm obs(n);
      while (obs.is_identity_bits()) {
        for (size_t q = 0; q < n; ++q) {
          uint64_t v = meta.next_below(4);
          obs.set_x(q, v & 1);
          obs.set_z(q, (v >> 1) & 1);
        }
      }
      double p0 = dense.prob_zero(obs);
      auto det = tab.deterministic_eigenvalue(obs);
      if (det.has_value()) {
        c.expect(std::abs(p0 - (*det ? 0.0 : 1.0)) < 1e-9);
      } else {
        c.expect(std::abs(p0 - 0.5) < 1e-9);
      }
      auto r = tab.measure(obs);
      dense.project(obs, r.outcome);
      c.expect(dense.overlap_with(tab.to_statevector()) > 1.0 - 1e-9);
    }
  }
  c.note = "1000 circuits, probabilities in {0, 1/2, 1}, post-states equal";
}

TEST_CASE("acceptance 07: graph-state measurement rules against the tableau") {
  Criterion c{7, "Z/Y rules, chain Omega, and forks reproduce the tableau exactly"};
  Rng rng(777000);
  int graphs = 0;
  // Z and Y rules, both outcome branches, on random graphs.
  for (int t = 0; t < 500; ++t, ++graphs) {
    auto st = random_state(rng, 2 + rng.next_below(7));
    auto nodes = st.graph.nodes();
    NodeId a = nodes[rng.next_below(nodes.size())];
    GraphCircuit circ = circuit_from_state(st);
    for (bool m : {false, true}) {
      auto [oz, cz] = measure_graph_Z(st, a, m);
      c.expect(graph_op_matches_tableau(st, {{obs_on(circ, a, 'Z'), m}}, cz, oz));
      auto [oy, cy] = measure_graph_Y(st, a, m);
      c.expect(graph_op_matches_tableau(st, {{obs_on(circ, a, 'Y'), m}}, cy, oy));
    }
  }
  // Chains with every outcome branch on the measured path.
  for (int t = 0; t < 250; ++t, ++graphs) {
    size_t core_n = 2 + rng.next_below(3);
    auto st = random_state(rng, core_n);
    size_t len = 1 + rng.next_below(2);
    NodeId attach = st.graph.nodes()[rng.next_below(core_n)];
    std::vector<NodeId> chain;
    NodeId prev = attach;
    for (size_t i = 0; i < len; ++i) {
      NodeId node = NodeId(100 + i);
      st.graph.add_node(node);
      st.graph.add_edge(prev, node);
      if (rng.next_bit()) st.phases.insert(node);
      chain.push_back(node);
      prev = node;
    }
    std::reverse(chain.begin(), chain.end());
    for (uint32_t mbits = 0; mbits < (uint32_t{1} << len); ++mbits) {
      std::vector<bool> ms;
      for (size_t i = 0; i < len; ++i) ms.push_back((mbits >> i) & 1);
      auto res = transmit_chain(st, chain, attach, ms);
      bool omega = false;
      for (size_t i = 0; i < len; ++i) omega ^= st.phase(chain[i]) ^ ms[i];
      c.expect(res.omega == omega);
      GraphCircuit circ = circuit_from_state(st);
      std::vector<std::pair<PauliTerm, bool>> meas;
      meas.push_back({obs_on(circ, chain[0], 'Y'), ms[0]});
      for (size_t k = 1; k < chain.size(); ++k)
        meas.push_back({obs_on(circ, chain[k], 'X', true), ms[k]});
      c.expect(graph_op_matches_tableau(st, meas, res.corrections, res.state));
    }
  }
  // Forks, both bases, all four outcome branches.
  for (int t = 0; t < 250; ++t, ++graphs) {
    size_t core_n = 1 + rng.next_below(4);
    auto st = random_state(rng, core_n);
    NodeId hub = st.graph.nodes()[rng.next_below(core_n)];
    for (NodeId leaf : {NodeId(201), NodeId(202)}) {
      st.graph.add_node(leaf);
      st.graph.add_edge(hub, leaf);
      if (rng.next_bit()) st.phases.insert(leaf);
    }
    for (ForkBasis basis : {ForkBasis::YY, ForkBasis::ZZ}) {
      for (int mm = 0; mm < 4; ++mm) {
        bool ma = mm & 1, mb = (mm >> 1) & 1;
        auto out = fork_measure(st, 201, 202, basis, ma, mb);
        GraphCircuit circ = circuit_from_state(st);
        char p = basis == ForkBasis::YY ? 'Y' : 'Z';
        c.expect(graph_op_matches_tableau(
            st, {{obs_on(circ, 201, p), ma}, {obs_on(circ, 202, p), mb}}, {}, out));
      }
    }
  }
  c.note = std::to_string(graphs) + " random graphs, all outcome branches";
}

TEST_CASE("acceptance 08: the Build reaches the target adjacency") {
  Criterion c{8, "build_G: spider adjacency after byproduct correction, 17 = 13 + 4 gates"};
  auto perm = build_emission_to_label();
  Graph target = spider_graph();
  int builds = 0;
  for (double ps : {1.0, 0.55, 0.2}) {
    for (uint64_t seed = 0; seed < 8; ++seed, ++builds) {
      auto res = build_G({ps, 1.0, 0.25}, seed * 7919 + 13);
      c.expect(res.log.cz_count == 17);
      c.expect(res.log.pass_count == 13);
      c.expect(res.log.patch_count == 4);
      bool adjacency_ok = true;
      for (int p = 1; p <= 12; ++p)
        for (int q = p + 1; q <= 12; ++q)
          adjacency_ok &=
              target.has_edge(NodeId(perm[size_t(p)]), NodeId(perm[size_t(q)])) ==
              res.photon_graph.has_edge(NodeId(BuildSystem::photon_qubit(p)),
                                        NodeId(BuildSystem::photon_qubit(q)));
      c.expect(adjacency_ok);
      StabilizerState corrected = res.state;
      for (size_t q = 0; q < corrected.num_qubits(); ++q) {
        bool x = res.byproduct_correction.x_bit(q), z = res.byproduct_correction.z_bit(q);
        if (x && z)
          corrected.apply(GateKind::Y, q);
        else if (x)
          corrected.apply(GateKind::X, q);
        else if (z)
          corrected.apply(GateKind::Z, q);
      }
      std::vector<size_t> photons;
      for (int p = 1; p <= 12; ++p) photons.push_back(BuildSystem::photon_qubit(p));
      c.expect(corrected.restricted_group(photons) ==
               circuit_from_graph(res.photon_graph).state.canonical_stabilizers());
    }
  }
  c.note = std::to_string(builds) + " stochastic builds across herald probabilities";
}

TEST_CASE("acceptance 09: protocol correctness (Theorem 1)") {
  Criterion c{9, "Gamma_P + Gamma_S + Gamma_R = f over all inputs and branches"};
  uint64_t checks = 0;
  // Per-copy relation a b = m12 + alpha + beta, exhaustively over the 2^8
  // branch tree for each input pair. Every protocol copy is one of these.
  for (int ab = 0; ab < 4; ++ab) {
    bool a = ab & 1, b = (ab >> 1) & 1;
    for (uint32_t bits = 0; bits < 256; ++bits, ++checks) {
      ProtocolCopy copy = make_ideal_copy(0);
      CopyTranscript t = run_copy(copy, a, b, bits);
      c.expect((t.oc.m[12] ^ t.alpha ^ t.beta) == (a && b));
      c.expect((t.oc.m[1] ^ t.oc.m[2] ^ t.oc.m[3]) == false);
      c.expect((t.oc.m[5] ^ t.oc.m[6] ^ t.oc.m[7]) == false);
      c.expect(t.oc.m[9] == t.oc.m[10]);
    }
  }
  // f = ab: full protocol, exhaustive over inputs and the whole branch tree.
  BooleanFunctionSpec andf;
  andf.n_parties = 2;
  andf.bits_per_party = {1, 1};
  andf.anf = {{VarRef{0, 0}, VarRef{1, 0}}};
  andf.anf_given = true;
  auto and_plan = plan_conjunctions(andf);
  for (uint32_t in = 0; in < 4; ++in) {
    std::vector<std::vector<bool>> inputs = {{bool(in & 1)}, {bool((in >> 1) & 1)}};
    for (uint32_t bits = 0; bits < 256; ++bits, ++checks) {
      ProtocolCopy copy = make_ideal_copy(0);
      std::vector<CopyTranscript> ts = {
          run_copy(copy, and_plan.a_input(0, inputs), and_plan.b_input(0, inputs), bits)};
      auto r = run_stage2(ts, and_plan, inputs);
      c.expect(r.value == andf.eval(inputs));
    }
  }
  // Majority and random degree-2 functions: exhaustive inputs, sampled
  // branch combinations per copy (the per-copy tree is covered above).
  Rng rng(31337);
  BooleanFunctionSpec maj;
  maj.n_parties = 3;
  maj.bits_per_party = {1, 1, 1};
  maj.anf = {{VarRef{0, 0}, VarRef{1, 0}}, {VarRef{0, 0}, VarRef{2, 0}},
             {VarRef{1, 0}, VarRef{2, 0}}};
  maj.anf_given = true;
  std::vector<BooleanFunctionSpec> funcs = {maj};
  for (int trial = 0; trial < 4; ++trial) {
    BooleanFunctionSpec f;
    f.n_parties = 2;
    f.bits_per_party = {2, 2};
    f.anf_given = true;
    int r = 1 + int(rng.next_below(3));
    for (int i = 0; i < r; ++i)
      f.anf.push_back({VarRef{0, int(rng.next_below(2))}, VarRef{1, int(rng.next_below(2))}});
    if (rng.next_bit()) f.anf.push_back({VarRef{1, 0}});
    funcs.push_back(f);
  }
  for (const auto& f : funcs) {
    auto plan = plan_conjunctions(f);
    for (uint32_t in = 0; in < (uint32_t{1} << f.total_bits()); ++in) {
      std::vector<std::vector<bool>> inputs(f.n_parties);
      int g = 0;
      for (int k = 0; k < f.n_parties; ++k)
        for (int i = 0; i < f.bits_per_party[k]; ++i) inputs[k].push_back((in >> g++) & 1);
      for (int rep = 0; rep < 24; ++rep, ++checks) {
        std::vector<CopyTranscript> ts;
        for (size_t slot = 0; slot < plan.r_conj(); ++slot) {
          ProtocolCopy copy = make_ideal_copy(0);
          ts.push_back(run_copy(copy, plan.a_input(slot, inputs), plan.b_input(slot, inputs),
                                uint32_t(rng.next_below(256))));
        }
        auto res = run_stage2(ts, plan, inputs);
        c.expect(res.value == f.eval(inputs));
      }
    }
  }
  c.note = std::to_string(checks) + " checks, zero failures";
}

TEST_CASE("acceptance 10: security stabilizer traces") {
  Criterion c{10, "traced groups equal the outcome-signed generator sets on every branch"};
  auto ia = trace_security_stabilizers(TraceScenario::honest_B_R, true);
  auto ib = trace_security_stabilizers(TraceScenario::honest_A_R, true);
  auto ii = trace_security_stabilizers(TraceScenario::honest_P_S, true);
  c.expect(ia.branches == 128 && ia.mismatches == 0);
  c.expect(ib.branches == 512 && ib.mismatches == 0);
  c.expect(ii.branches == 512 && ii.mismatches == 0);
  c.note = "branches 128+512+512, zero sign mismatches";
}

TEST_CASE("acceptance 11: security view distributions") {
  Criterion c{11, "views uniform and input-independent; real vs simulator distance exactly 0"};
  // Uniform six-bit honest views, independent of the other party's input.
  for (bool a : {false, true}) {
    Distribution per_b[2];
    for (bool b : {false, true}) {
      for (uint32_t bits = 0; bits < 256; ++bits) {
        ProtocolCopy copy = make_ideal_copy(0);
        CopyTranscript t = run_copy(copy, a, b, bits);
        per_b[b].add({t.oc.m[2], t.oc.m[4], t.oc.m[5], t.oc.m[11], t.c_B, t.beta});
      }
      c.expect(per_b[b].uniform());
    }
    c.expect(total_variation(per_b[0], per_b[1]) == 0.0);
  }
  std::vector<AdversaryRule> rules = {
      [](const std::vector<bool>&) { return false; },
      [](const std::vector<bool>& v) { return v[0] ^ v[2]; },
      [](const std::vector<bool>& v) { return v[1] && v[3]; },
  };
  for (const auto& rule : rules)
    for (int cc = 0; cc < 8; ++cc) {
      bool a = cc & 1, b = (cc >> 1) & 1, z = (cc >> 2) & 1;
      c.expect(total_variation(real_view_S_as_A(a, b, z, rule),
                               ideal_view_S_as_A(a, b, z, rule)) == 0.0);
    }
  for (int cc = 0; cc < 16; ++cc) {
    bool a = cc & 1, b = (cc >> 1) & 1, zA = (cc >> 2) & 1, zB = (cc >> 3) & 1;
    c.expect(total_variation(real_view_R(a, b, zA, zB), ideal_view_R(a, b, zA, zB)) == 0.0);
  }
  c.note = "exact enumeration, total variation 0";
}

TEST_CASE("acceptance 12: repetition-code error correction") {
  Criterion c{12, "empirical output error under eps*=0.157 stays within eps_f=1e-3"};
  auto kk = choose_K(0.157, 4, 1e-3);
  c.expect(kk.k_closed_form == 36);
  Rng rng(5150);
  std::vector<bool> ab = {true, true, false, true};
  bool truth = true ^ true ^ false ^ true;
  int failures = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    auto reps = make_subiterations(ab, kk.k, rng);
    auto res = apply_noise_and_correct(reps, 0.157, rng);
    bool g = res.gamma_R;
    for (auto& subs : reps) g ^= subs[0].alpha ^ subs[0].beta;
    if (g != truth) ++failures;
  }
  // 95% upper confidence bound on the output error (normal-free, Poisson-ish).
  double upper = (failures + 3.0) / trials;
  c.expect(upper <= 1e-3);
  c.note = "K=" + std::to_string(kk.k) + " (closed form 36), failures " +
           std::to_string(failures) + "/100000";
}

TEST_CASE("acceptance 13: dephasing model identities") {
  Criterion c{13, "Markov composition, waiting-time resummation, mixture factors"};
  // Composition identity at double precision.
  for (double t1 : {0.1, 1.7})
    for (double t2 : {0.05, 2.9})
      for (double tau : {0.7, 31.0}) {
        double lhs = dephase_fidelity(t1, tau) * dephase_fidelity(t2, tau) +
                     (1 - dephase_fidelity(t1, tau)) * (1 - dephase_fidelity(t2, tau));
        c.expect(std::abs(lhs - dephase_fidelity(t1 + t2, tau)) < 1e-14);
      }
  // Exact aux form vs negative-binomial Monte Carlo.
  HardwareParams p;
  p.tau_s = 40.0;
  Rng rng(9182);
  const int samples = 100000;
  for (auto [r, ps] : {std::pair{3, 0.25}, std::pair{12, 0.6}}) {
    double acc = 0, acc2 = 0;
    for (int i = 0; i < samples; ++i) {
      long m = 0;
      for (int k = 0; k < r; ++k)
        do {
          ++m;
        } while (!rng.next_bernoulli(ps));
      double f = 0.5 * (1 + std::exp(-double(m) / p.tau_s));
      acc += f;
      acc2 += f * f;
    }
    double mean = acc / samples;
    double se = std::sqrt((acc2 / samples - mean * mean) / samples);
    c.expect(std::abs(mean - aux_dephasing_fidelity(r, ps, p, true)) < 3 * se + 1e-12);
  }
  // Join and extend mixture factors match the quoted closed forms.
  double tau = 11.0, tk = 0.8, tm = 2.3;
  auto join = mixture_dephase_bookkeeping({{MixtureVariant::join, tk, tm}}, tau);
  c.expect(std::abs(join.fidelity - 0.5 * (1 + std::exp(-(tk + tm) / tau))) < 1e-15);
  c.expect(join.classes.size() == 2);
  auto ext = mixture_dephase_bookkeeping({{MixtureVariant::extend, tk, tm}}, tau);
  c.expect(std::abs(ext.fidelity - 0.25 * (1 + std::exp(-tk / tau)) *
                                      (1 + std::exp(-tm / tau))) < 1e-15);
  c.expect(ext.classes.size() == 4);
  double total = 0;
  for (auto& cls : ext.classes) total += cls.probability;
  c.expect(std::abs(total - 1.0) < 1e-14);
  c.note = "all identities hold at double precision; MC within 3 sigma";
}

TEST_CASE("acceptance 14: reproducibility of CSV outputs") {
  Criterion c{14, "identical config and seed give byte-identical CSV"};
  std::string cfg = tmp_path("acc14.cfg");
  {
    std::ofstream f(cfg, std::ios::trunc);
    f << "np_max=10\ntrials=2000\n";
  }
  auto s1 = run_cli_capture("scaling --config " + cfg + " --seed 77", tmp_path("acc14a.csv"));
  auto s2 = run_cli_capture("scaling --config " + cfg + " --seed 77", tmp_path("acc14b.csv"));
  c.expect(!s1.empty() && s1 == s2);
  auto r1 = run_cli_capture("rate --seed 1", tmp_path("acc14c.csv"));
  auto r2 = run_cli_capture("rate --seed 1", tmp_path("acc14d.csv"));
  c.expect(!r1.empty() && r1 == r2);
  {
    std::ofstream f(tmp_path("acc14.fn"), std::ios::trunc);
    f << "parties 2\nbits 1 1\nand x0_0 x1_0\n";
  }
  {
    std::ofstream f(tmp_path("acc14m.cfg"), std::ios::trunc);
    f << "function_file=" << tmp_path("acc14.fn") << "\ninputs=1;0\n";
  }
  auto m1 = run_cli_capture("mpc-run --config " + tmp_path("acc14m.cfg") + " --seed 4",
                            tmp_path("acc14e.csv"));
  auto m2 = run_cli_capture("mpc-run --config " + tmp_path("acc14m.cfg") + " --seed 4",
                            tmp_path("acc14f.csv"));
  c.expect(!m1.empty() && m1 == m2);
  c.note = "scaling, rate, and mpc-run reruns byte-identical";
}
