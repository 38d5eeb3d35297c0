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

#ifndef GSF_FOCK_HPP
#define GSF_FOCK_HPP

#include "gsf/channel.hpp"

namespace gsf {

/// Truncated-Fock-space configuration for the entanglement-swap oracle:
/// emitter qubit, two emitter-photon modes, two signal and two idler modes,
/// pair number cut at n_max.
struct FockConfig {
  int n_max = 8;
};

struct SwapOracleResult {
  double p_t;                // Bell-projection probability per attempt
  double p_s;                // heralded success-pattern probability
  double spdc_trace;         // trace of the truncated SPDC density operator
  double truncation_bound;   // ~ (n_max + 2) xi^{n_max + 1}
  double emitter_fidelity;   // <Psi_E| rho_E |Psi_E>
  double pair_fidelity;      // <Psi_P| rho_SPDC |Psi_P>
  double routing_weight;     // ideal beamsplitter weight into success patterns
  double min_bell_fidelity;  // worst per-pattern Bell fidelity of ideal inputs
};

/// Numeric oracle for P_t and P_s: builds the lossy emitter and SPDC states,
/// applies the 50:50 beamsplitter mode transform, convolves detector
/// outcomes with the Poisson dark-count distribution classically, and sums
/// the four success click patterns.
SwapOracleResult fock_oracle(const HardwareParams& p, const FockConfig& cfg);

}  // namespace gsf

#endif  // GSF_FOCK_HPP
