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

#ifndef GSF_MPC_HPP
#define GSF_MPC_HPP

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsf/builder.hpp"
#include "gsf/graph.hpp"
#include "gsf/rng.hpp"
#include "gsf/tableau.hpp"

namespace gsf {

class unsupported_function_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class incomplete_transcript_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Boolean functions over parties
// ---------------------------------------------------------------------------

struct VarRef {
  int party;
  int index;
  auto operator<=>(const VarRef&) const = default;
};

/// An N-party Boolean function, given either as a truth table (variable order:
/// party 0's bits are least significant) or as an ANF term list.
struct BooleanFunctionSpec {
  int n_parties = 0;
  std::vector<int> bits_per_party;
  std::vector<bool> truth_table;             // empty when anf is given
  std::vector<std::vector<VarRef>> anf;      // each term: sorted distinct vars
  bool anf_given = false;

  int total_bits() const;
  size_t global_index(VarRef v) const;

  bool eval(const std::vector<std::vector<bool>>& inputs) const;

  /// Text format: "parties N", "bits m1 m2 ...", then either "table 0110..."
  /// or term lines "and x<p>_<i> y<p>_<i> ...", "lin z<p>_<i>", "const".
  static BooleanFunctionSpec parse(const std::string& text);
  std::string serialize() const;
};

/// GF(2) Moebius transform of the truth table; terms grouped per party.
std::vector<std::vector<VarRef>> anf_from_truth_table(const BooleanFunctionSpec& spec);

struct Conjunction {
  int party_a = -1, party_b = -1;
  std::vector<VarRef> monomial_a, monomial_b;  // local products; empty with padding = zero input
  bool padding = false;
};

/// Compiled protocol plan: one slot per two-party conjunction, local pure
/// terms folded into each party's effective linear bit, plus padding slots so
/// every party holds at least one conjunction.
struct ConjunctionPlan {
  int n_parties = 0;
  std::vector<Conjunction> conjunctions;
  std::vector<std::vector<std::vector<VarRef>>> linear_terms;  // per party
  bool constant = false;
  int effective_m = 1;  // max protocol-level input bits held by one party
  std::vector<std::vector<int>> a_sets, b_sets;  // per party: slot indices

  size_t r_conj() const { return conjunctions.size(); }
  bool a_input(size_t slot, const std::vector<std::vector<bool>>& inputs) const;
  bool b_input(size_t slot, const std::vector<std::vector<bool>>& inputs) const;
  bool effective_z(int party, const std::vector<std::vector<bool>>& inputs) const;
};

ConjunctionPlan plan_conjunctions(const BooleanFunctionSpec& spec);

// ---------------------------------------------------------------------------
// Stage I on copies of the 12-qubit state
// ---------------------------------------------------------------------------

/// One distributed copy: the tableau, the label map, and the Pauli frame of
/// the Source's published byproducts (identity once corrections are applied).
struct ProtocolCopy {
  StabilizerState state;
  std::array<size_t, 13> qubit_of_label;
  PauliTerm frame;
};

/// Copy prepared directly as the graph state of the protocol adjacency.
ProtocolCopy make_ideal_copy(uint64_t seed);

/// Copy taken from an emit-then-add build; either with corrections applied
/// (clean state, identity frame) or carrying the published byproduct frame.
ProtocolCopy copy_from_build(const BuildResult& b, bool apply_corrections);

struct StageOneOutcomes {
  std::array<bool, 13> m{};  // 1-indexed measurement outcomes
  bool s = false;            // m9 (= m10 in honest runs)
};

enum class StageStep { I1, I2, I3, I4, I5, I6 };

/// Honest Stage I measurement sequence with input a (the B-side input enters
/// only in Stage II). Outcomes are corrected by the copy's byproduct frame.
/// `order` permutes the steps; I.1-I.3 must precede I.4-I.6 or a
/// protocol_order_error is thrown. `branch_bits`, when given, forces the
/// corrected outcome of the k-th random measurement to bit k (exhaustive
/// branch enumeration); exactly eight measurements are random.
StageOneOutcomes run_stage1(ProtocolCopy& copy, bool a,
                            const std::vector<StageStep>& order = {},
                            std::optional<uint32_t> branch_bits = std::nullopt);

bool compute_alpha(const StageOneOutcomes& oc, bool a, bool c_B);
bool compute_beta(const StageOneOutcomes& oc, bool c_A);

struct CopyTranscript {
  bool a = false, b = false;
  StageOneOutcomes oc;
  bool c_A = false, c_B = false;
  bool alpha = false, beta = false;
};

/// Full per-copy run: Stage I plus the copy's openings and local values.
CopyTranscript run_copy(ProtocolCopy& copy, bool a, bool b,
                        std::optional<uint32_t> branch_bits = std::nullopt);

struct StageTwoResult {
  std::vector<bool> gamma;  // per-party openings Gamma_k
  bool gamma_R = false;
  bool value = false;
};

/// Stage II broadcast rounds: openings, per-party sums, and the output.
StageTwoResult run_stage2(const std::vector<CopyTranscript>& per_slot,
                          const ConjunctionPlan& plan,
                          const std::vector<std::vector<bool>>& inputs);

struct ProtocolRunResult {
  std::vector<CopyTranscript> copies;
  StageTwoResult stage2;
  bool expected = false;
};

/// Runs the whole protocol with per-copy child seeds (so streaming and batch
/// interleavings produce identical transcripts). Copies are prepared
/// directly as graph states, or — when a herald model is supplied — by full
/// emit-then-add builds whose published byproduct bits are commuted
/// classically through the measurements.
ProtocolRunResult run_protocol(const BooleanFunctionSpec& spec,
                               const std::vector<std::vector<bool>>& inputs, uint64_t seed,
                               const HeraldModel* build_herald = nullptr);

/// Transcript CSV: one row per (copy, qubit) outcome plus opening rows.
std::string transcripts_to_csv(const std::vector<CopyTranscript>& ts);

// ---------------------------------------------------------------------------
// Noise and repetition coding
// ---------------------------------------------------------------------------

struct NoiseAndRepetition {
  double eps_star = 0.0;
  int K = 1;
  double eps_f = 1e-3;
};

struct SubIteration {
  bool m12, alpha, beta;  // additive shares: m12 = ab + alpha + beta (+ noise)
};

/// Clean sub-iteration shares for each conjunction: fresh uniform pads.
std::vector<std::vector<SubIteration>> make_subiterations(const std::vector<bool>& ab_values,
                                                          int K, Rng& rng);

struct EcResult {
  bool gamma_R;
  std::vector<bool> majority;  // per conjunction, after re-padding and voting
};

/// Applies the per-copy noise flips, re-pads sub-iterations 2..K with the
/// opened pad differences, majority-votes, and sums the corrected results.
EcResult apply_noise_and_correct(const std::vector<std::vector<SubIteration>>& reps,
                                 double eps_star, Rng& rng);

struct ChooseKResult {
  int k;              // smallest K satisfying the full Hoeffding bound
  int k_closed_form;  // the printed ceiling, reported for comparison
};

ChooseKResult choose_K(double eps_star, size_t r_conj, double eps_f);

/// Error-corrected computation rate lower bound, in units of R0.
double rate_lower_bound(int m_bits, int n_parties, double eps_f, double eps_star, double r0);

// ---------------------------------------------------------------------------
// Security traces and simulators
// ---------------------------------------------------------------------------

enum class TraceScenario { honest_B_R, honest_A_R, honest_P_S };

struct TraceReport {
  TraceScenario scenario;
  std::vector<int> idle_labels;
  size_t branches = 0;
  size_t mismatches = 0;
};

/// Runs the honest parties' measurements of the scenario over every branch of
/// the outcome tree and checks the idle party's stabilizer group against the
/// outcome-signed generator formulas. Throws on mismatch unless `collect`.
TraceReport trace_security_stabilizers(TraceScenario sc, bool collect = false);

/// Exact distribution over view-bit tuples, counted over equally likely
/// measurement branches.
struct Distribution {
  std::map<std::vector<bool>, uint64_t> counts;
  uint64_t total = 0;

  void add(const std::vector<bool>& key, uint64_t w = 1);
  bool uniform() const;
};

double total_variation(const Distribution& a, const Distribution& b);

/// Deterministic adversary message rule: bit from the visible view bits.
using AdversaryRule = std::function<bool(const std::vector<bool>& view)>;

/// Scenario I real-world view of S playing A on one copy (honest B and R):
/// (m2, m4, m5, m11, c_B, beta, Gamma_P, Gamma_R) enumerated exactly.
Distribution real_view_S_as_A(bool a, bool b, bool z_B, AdversaryRule c_A_rule);

/// Ideal-world simulator for the same view; f_ab is the ideal single-copy
/// functionality a*b (+ z terms handled by the caller's inputs).
Distribution ideal_view_S_as_A(bool a, bool b, bool z_B, AdversaryRule c_A_rule);

/// Scenario II views of a cheating Referee on one copy (honest A and B):
/// (m3, m7, m9, m12, c_A, c_B, Gamma_P, Gamma_S).
Distribution real_view_R(bool a, bool b, bool z_A, bool z_B);
Distribution ideal_view_R(bool a, bool b, bool z_A, bool z_B);

enum class ViewParty { adversary_as_A, referee };

/// Exact single-copy view distribution of the named party under honest play.
Distribution transcript_distribution(bool a, bool b, bool z_A, bool z_B, ViewParty who);

}  // namespace gsf

#endif  // GSF_MPC_HPP
