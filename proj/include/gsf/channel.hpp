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

#ifndef GSF_CHANNEL_HPP
#define GSF_CHANNEL_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gsf/rng.hpp"
#include "gsf/tableau.hpp"

namespace gsf {

/// Scalar device parameters. Times share one unit (multiples of t_rep in the
/// analysis layer); coherence times default to infinity (dephasing off).
struct HardwareParams {
  double eta_e = 1.0;  // emitter collection/detection efficiency
  double eta_s = 1.0;  // signal-arm efficiency
  double eta_i = 1.0;  // idler-arm efficiency
  double xi = 0.0;     // SPDC pair parameter tanh^2 r
  double R_d = 0.0;    // dark counts per second
  double t_exp = 0.0;  // detector exposure per cycle
  double t_rep = 1.0;
  double t_add = 0.0;
  double tau_e = std::numeric_limits<double>::infinity();
  double tau_s = std::numeric_limits<double>::infinity();
  double F_e = 1.0;  // carried but fixed to 1 by default
  double F_p = 1.0;
  double F_CZ = 1.0;
  double F_MCMR = 1.0;

  /// Collective fidelity of adding one photon; always derived, never stored.
  double f_add() const { return F_p * F_CZ * F_MCMR; }

  void validate() const;

  /// key=value lines, keys exactly the field names; unknown keys rejected.
  static HardwareParams parse(const std::string& text);
  std::string serialize() const;
};

/// Poisson dark-count probability P_d(n_d) with mean R_d * t_exp.
double dark_count_prob(int n_d, const HardwareParams& p);

/// Probability of projecting emitter and idler onto a Bell state per attempt.
double p_true(const HardwareParams& p);

/// Probability of a heralded "success" click pattern per attempt.
double p_success(const HardwareParams& p);

/// Swap fidelity P_t / P_s. If the ratio exceeds 1 by more than 1e-12 the
/// value is clamped and, when provided, *clamped is set (inconsistency flag).
double f_swap(const HardwareParams& p, bool* clamped = nullptr);

/// Identity-branch probability (1 + e^{-t/tau}) / 2 of the dephasing map.
double dephase_fidelity(double t, double tau);

/// The dephasing map as a stochastic Z flip on a stabilizer state.
void apply_dephasing(StabilizerState& s, size_t qubit, double t, double tau, Rng& rng);

/// Emitter contribution ((1 + e^{-(t_rep+t_add)/tau_e})/2)^{n_p}; the
/// bare-cycle form without the add time is selected by t_add = 0.
double emitter_dephasing_fidelity(int n_p, const HardwareParams& p);

/// Mean auxiliary-spin fidelity after r heralded additions at success
/// probability ps. `exact` selects the negative-binomial resummation; the
/// approximate form is (1 + e^{-r t/(ps tau_s)})/2. The MCMR shift
/// t_rep -> t_rep + ps * t_add is applied in both.
double aux_dephasing_fidelity(int r, double ps, const HardwareParams& p, bool exact = true);

/// Negative-binomial herald waiting time: probability that m trials yield
/// r successes, C(m-1, r-1) ps^r (1-ps)^{m-r}; zero for m < r.
double herald_waiting_pmf(long m, long r, double ps);

/// Fidelity to build an n_p-photon graph state on a single auxiliary spin:
/// (F_add F_swap)^{n_p} F_D^(e)(n_p) <F_D^(s)(n_p, P_s)>.
double fidelity_single_spin(const HardwareParams& p, int n_p, bool exact_aux = true);

/// Fidelity to produce one copy of the 12-photon protocol state in the
/// destructive-measurement scheme (P_s = eta_e):
/// F_add^12 F_CZ^5 F_D^(e)(12) <F_D^(s1)(12)> <F_D^(s2)(4)>^2.
double fidelity_G(const HardwareParams& p);

struct OptimizeResult {
  double xi;
  double value;
  bool grid_override;  // set when the dense-grid check rejected the bracket
};

/// Golden-section maximization over xi in (lo, hi), cross-checked against a
/// 10^4-point grid; an eps_of_optimum > 0 allows early stop once the bracket
/// values are within that range of each other.
OptimizeResult optimize_xi(const std::function<double(double)>& objective, double lo, double hi,
                           double tol, double eps_of_optimum = 0.0);

enum class MixtureVariant { join, extend };

struct MixtureStep {
  MixtureVariant variant;
  double t_k;  // dephasing time accumulated on the earlier member of the pair
  double t_m;  // and on the later one
};

struct SignClass {
  std::vector<bool> bits;
  double probability;
};

/// Stabilizer-sign ensemble of a join/extend trace under spin dephasing.
/// Join steps merge symmetric sign pairs into one class with weight
/// (1 + e^{-(t_k+t_m)/tau})/2; extend steps double the ensemble with
/// independent per-time weights. `fidelity` is the all-trivial class weight.
struct MixtureEnsemble {
  std::vector<SignClass> classes;
  double fidelity;
  std::vector<double> step_factors;
};

MixtureEnsemble mixture_dephase_bookkeeping(const std::vector<MixtureStep>& steps, double tau);

}  // namespace gsf

#endif  // GSF_CHANNEL_HPP
