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

#include "gsf/fock.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace gsf {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

// Amplitude of transmitting n-k photons and reflecting k at efficiency eta.
double loss_amp(int n, int k, double eta) {
  return std::sqrt(binom(n, k) * std::pow(eta, n - k) * std::pow(1 - eta, k));
}

// <j, a+g-j | BS | a, g> for the 50:50 beamsplitter a^ -> (c^+d^)/sqrt2,
// b^ -> (c^-d^)/sqrt2.
double bs_amp(int a, int g, int j) {
  int total = a + g;
  if (j < 0 || j > total) return 0.0;
  double sum = 0.0;
  for (int p = 0; p <= a; ++p) {
    int q = j - p;
    if (q < 0 || q > g) continue;
    double term = binom(a, p) * binom(g, q);
    if ((g - q) & 1) term = -term;
    sum += term;
  }
  return sum * std::sqrt(factorial(j) * factorial(total - j)) /
         std::sqrt(std::pow(2.0, total) * factorial(a) * factorial(g));
}

// Ideal two-photon routing: |Psi_E> |Psi_P> through the beamsplitter,
// projected on the four success click patterns, scored against the
// corresponding Bell state of (emitter, idler).
struct Routing {
  double weight;
  double min_bell_fidelity;
};

Routing ideal_routing() {
  // State terms: (e, pe_u, pe_v, s_u, s_v, i_u, i_v) with amplitude.
  struct Term {
    int e, pu, pv, su, sv, iu, iv;
    double amp;
  };
  std::vector<Term> terms = {
      {0, 1, 0, 1, 0, 0, 1, 0.5},  {0, 1, 0, 0, 1, 1, 0, -0.5},
      {1, 0, 1, 1, 0, 0, 1, -0.5}, {1, 0, 1, 0, 1, 1, 0, 0.5},
  };
  // Output amplitude map keyed by (jcu, jcv, jdu, jdv, e, iu, iv).
  std::map<std::array<int, 7>, double> out;
  for (const auto& t : terms) {
    for (int jcu = 0; jcu <= t.pu + t.su; ++jcu) {
      double au = bs_amp(t.pu, t.su, jcu);
      if (au == 0.0) continue;
      for (int jcv = 0; jcv <= t.pv + t.sv; ++jcv) {
        double av = bs_amp(t.pv, t.sv, jcv);
        if (av == 0.0) continue;
        std::array<int, 7> key{jcu, jcv, t.pu + t.su - jcu, t.pv + t.sv - jcv, t.e, t.iu, t.iv};
        out[key] += t.amp * au * av;
      }
    }
  }
  // Success patterns and their Bell targets: same-port double clicks herald
  // Psi+, opposite-port clicks herald Psi-.
  struct Pattern {
    std::array<int, 4> clicks;
    double bell_sign;  // Psi_pm = (|0,iu=1> pm |1,iv=1>)/sqrt2 in this basis
  };
  const std::vector<Pattern> patterns = {
      {{1, 1, 0, 0}, +1}, {{0, 0, 1, 1}, +1}, {{1, 0, 0, 1}, -1}, {{0, 1, 1, 0}, -1}};
  double weight = 0.0, min_fid = 1.0;
  for (const auto& pat : patterns) {
    // Collect the (e, iu, iv) amplitudes behind this click pattern.
    double a0 = 0, a1 = 0, norm = 0;  // a0: e=0,(iu,iv)=(1,0); a1: e=1,(0,1)
    for (const auto& [key, amp] : out) {
      if (key[0] != pat.clicks[0] || key[1] != pat.clicks[1] || key[2] != pat.clicks[2] ||
          key[3] != pat.clicks[3])
        continue;
      norm += amp * amp;
      if (key[4] == 0 && key[5] == 1 && key[6] == 0) a0 += amp;
      if (key[4] == 1 && key[5] == 0 && key[6] == 1) a1 += amp;
    }
    double bell = (a0 + pat.bell_sign * a1) / std::sqrt(2.0);
    weight += bell * bell;
    if (norm > 1e-15) min_fid = std::min(min_fid, bell * bell / norm);
  }
  return {weight, min_fid};
}

}  // namespace

SwapOracleResult fock_oracle(const HardwareParams& p, const FockConfig& cfg) {
  p.validate();
  if (cfg.n_max < 2 || cfg.n_max > 10)
    throw std::length_error("fock oracle supports 2 <= n_max <= 10");
  const int N = cfg.n_max;
  const double xi = p.xi;
  const double norm2 = (1 - xi) * (1 - xi);

  // --- Herald probability P_s --------------------------------------------
  // Success records live in the source-mode basis: the counts over the four
  // herald channels (pe_u, pe_v, ps_u, ps_v) must reconstruct one of the
  // three configurations that swap entanglement. Dark counts are convolved
  // per channel. With no dark counts this coincides with click-pattern
  // counting behind the beamsplitter, since each success configuration
  // routes entirely onto the orthonormal two-click patterns.
  // Transmitted-signal count distribution T(su, sv) for su, sv <= 1.
  double T[2][2] = {};
  double spdc_trace = 0.0;
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m <= n; ++m) {
      double base = norm2 * std::pow(xi, n);
      spdc_trace += base;
      int su0 = n - m, sv0 = m;
      for (int su = 0; su <= 1 && su <= su0; ++su) {
        double wu = binom(su0, su0 - su) * std::pow(p.eta_s, su) * std::pow(1 - p.eta_s, su0 - su);
        for (int sv = 0; sv <= 1 && sv <= sv0; ++sv) {
          double wv =
              binom(sv0, sv0 - sv) * std::pow(p.eta_s, sv) * std::pow(1 - p.eta_s, sv0 - sv);
          T[su][sv] += base * wu * wv;
        }
      }
    }
  }
  // Emitter-channel count distribution (photon kept in u, kept in v, lost).
  double E[2][2] = {};
  E[1][0] = p.eta_e / 2;
  E[0][1] = p.eta_e / 2;
  E[0][0] = 1 - p.eta_e;

  const std::array<std::array<int, 4>, 3> success_records{
      {{1, 0, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}}};
  double pd[2] = {dark_count_prob(0, p), dark_count_prob(1, p)};
  double p_s = 0.0;
  for (const auto& R : success_records) {
    for (int pu = 0; pu <= R[0]; ++pu)
      for (int pv = 0; pv <= R[1]; ++pv)
        for (int su = 0; su <= R[2]; ++su)
          for (int sv = 0; sv <= R[3]; ++sv)
            p_s += E[pu][pv] * T[su][sv] * pd[R[0] - pu] * pd[R[1] - pv] * pd[R[2] - su] *
                   pd[R[3] - sv];
  }

  // --- Fidelity factors for P_t ------------------------------------------
  // <Psi_E| rho_E |Psi_E>: only the kept branch overlaps.
  double fe = p.eta_e;

  // <Psi_P| rho_SPDC |Psi_P>: coherent overlap per loss branch, then |.|^2.
  std::map<std::array<int, 4>, double> overlap;  // key: (ksu, ksv, kiu, kiv)
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; m <= n; ++m) {
      double c = (1 - xi) * std::pow(std::sqrt(xi), n) * ((m & 1) ? -1.0 : 1.0);
      int su0 = n - m, sv0 = m, iu0 = m, iv0 = n - m;
      // Component |1;0>_s |0;1>_i of Psi_P: transmitted (1,0,0,1).
      if (su0 >= 1 && iv0 >= 1) {
        int ksu = su0 - 1, ksv = sv0, kiu = iu0, kiv = iv0 - 1;
        double a = c * loss_amp(su0, ksu, p.eta_s) * loss_amp(sv0, ksv, p.eta_s) *
                   loss_amp(iu0, kiu, p.eta_i) * loss_amp(iv0, kiv, p.eta_i);
        overlap[{ksu, ksv, kiu, kiv}] += a / std::sqrt(2.0);
      }
      // Component -|0;1>_s |1;0>_i: transmitted (0,1,1,0).
      if (sv0 >= 1 && iu0 >= 1) {
        int ksu = su0, ksv = sv0 - 1, kiu = iu0 - 1, kiv = iv0;
        double a = c * loss_amp(su0, ksu, p.eta_s) * loss_amp(sv0, ksv, p.eta_s) *
                   loss_amp(iu0, kiu, p.eta_i) * loss_amp(iv0, kiv, p.eta_i);
        overlap[{ksu, ksv, kiu, kiv}] -= a / std::sqrt(2.0);
      }
    }
  }
  double fp = 0.0;
  for (const auto& [k, a] : overlap) fp += a * a;

  Routing routing = ideal_routing();
  double p_t = fe * fp * routing.weight * std::pow(pd[0], 4);

  return {p_t,
          p_s,
          spdc_trace,
          (N + 2) * std::pow(xi, N + 1),
          fe,
          fp,
          routing.weight,
          routing.min_bell_fidelity};
}

}  // namespace gsf
