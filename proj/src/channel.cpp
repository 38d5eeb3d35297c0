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

#include "gsf/channel.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gsf {

namespace {

void check_unit(double v, const char* name, bool open_left = false, bool open_right = false) {
  bool lo_ok = open_left ? v > 0.0 : v >= 0.0;
  bool hi_ok = open_right ? v < 1.0 : v <= 1.0;
  if (!(lo_ok && hi_ok)) throw std::invalid_argument(std::string(name) + " out of range");
}

}  // namespace

void HardwareParams::validate() const {
  check_unit(eta_e, "eta_e");
  check_unit(eta_s, "eta_s");
  check_unit(eta_i, "eta_i");
  check_unit(xi, "xi", false, /*open_right=*/true);
  if (R_d < 0) throw std::invalid_argument("R_d out of range");
  if (t_exp < 0) throw std::invalid_argument("t_exp out of range");
  if (t_rep <= 0) throw std::invalid_argument("t_rep out of range");
  if (t_add < 0) throw std::invalid_argument("t_add out of range");
  if (!(tau_e > 0) || !(tau_s > 0)) throw std::invalid_argument("coherence time out of range");
  check_unit(F_e, "F_e", /*open_left=*/true);
  check_unit(F_p, "F_p", true);
  check_unit(F_CZ, "F_CZ", true);
  check_unit(F_MCMR, "F_MCMR", true);
}

HardwareParams HardwareParams::parse(const std::string& text) {
  HardwareParams p;
  std::map<std::string, double*> fields{
      {"eta_e", &p.eta_e}, {"eta_s", &p.eta_s},   {"eta_i", &p.eta_i}, {"xi", &p.xi},
      {"R_d", &p.R_d},     {"t_exp", &p.t_exp},   {"t_rep", &p.t_rep}, {"t_add", &p.t_add},
      {"tau_e", &p.tau_e}, {"tau_s", &p.tau_s},   {"F_e", &p.F_e},     {"F_p", &p.F_p},
      {"F_CZ", &p.F_CZ},   {"F_MCMR", &p.F_MCMR},
  };
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto it = fields.find(key);
    if (it == fields.end())
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" + key +
                                  "'");
    if (val == "inf") {
      *it->second = std::numeric_limits<double>::infinity();
    } else {
      size_t used = 0;
      *it->second = std::stod(val, &used);
      if (used != val.size())
        throw std::invalid_argument("line " + std::to_string(lineno) + ": bad value '" + val +
                                    "'");
    }
  }
  p.validate();
  return p;
}

std::string HardwareParams::serialize() const {
  std::ostringstream os;
  os.precision(17);
  auto put = [&](const char* k, double v) {
    os << k << "=";
    if (std::isinf(v))
      os << "inf";
    else
      os << v;
    os << '\n';
  };
  put("eta_e", eta_e);
  put("eta_s", eta_s);
  put("eta_i", eta_i);
  put("xi", xi);
  put("R_d", R_d);
  put("t_exp", t_exp);
  put("t_rep", t_rep);
  put("t_add", t_add);
  put("tau_e", tau_e);
  put("tau_s", tau_s);
  put("F_e", F_e);
  put("F_p", F_p);
  put("F_CZ", F_CZ);
  put("F_MCMR", F_MCMR);
  return os.str();
}

double dark_count_prob(int n_d, const HardwareParams& p) {
  if (n_d < 0) throw std::invalid_argument("dark count must be nonnegative");
  if (p.R_d < 0 || p.t_exp < 0) throw std::invalid_argument("negative dark-count rate");
  double mu = p.R_d * p.t_exp;
  double out = std::exp(-mu);
  for (int k = 1; k <= n_d; ++k) out *= mu / k;
  return out;
}

double p_true(const HardwareParams& p) {
  p.validate();
  double es = 1 - p.eta_s, ei = 1 - p.eta_i;
  double pd0 = dark_count_prob(0, p);
  double denom = 1 - es * ei * p.xi;
  return 0.5 * p.eta_e * p.eta_s * p.eta_i * p.xi * (es * ei * p.xi + 2) / std::pow(denom, 4) *
         (1 - p.xi) * (1 - p.xi) * std::pow(pd0, 4);
}

double p_success(const HardwareParams& p) {
  p.validate();
  double ee = 1 - p.eta_e, es = 1 - p.eta_s;
  double pd0 = dark_count_prob(0, p);
  double pd1 = dark_count_prob(1, p);
  double d = 1 - es * p.xi;
  double one_minus_xi_sq = (1 - p.xi) * (1 - p.xi);
  double term1 = 3 * ee / (d * d) * one_minus_xi_sq * pd1 * pd1 * pd0 * pd0;
  double term2 = (p.eta_e / (d * d) + 4 * ee * p.eta_s * p.xi / (d * d * d)) * one_minus_xi_sq *
                 pd1 * pd0 * pd0 * pd0;
  double term3 = (p.eta_e * p.eta_s * p.xi / (d * d * d) +
                  ee * p.eta_s * p.eta_s * p.xi * p.xi / (d * d * d * d)) *
                 one_minus_xi_sq * std::pow(pd0, 4);
  return term1 + term2 + term3;
}

double f_swap(const HardwareParams& p, bool* clamped) {
  double ps = p_success(p);
  if (ps <= 0) throw std::domain_error("undefined swap fidelity: P_s is zero");
  double ratio = p_true(p) / ps;
  if (clamped) *clamped = false;
  if (ratio > 1.0 + 1e-12) {
    if (clamped) *clamped = true;
    return 1.0;
  }
  return std::min(ratio, 1.0);
}

double dephase_fidelity(double t, double tau) {
  if (t < 0 || !(tau > 0)) throw std::invalid_argument("bad dephasing arguments");
  return 0.5 * (1.0 + std::exp(-t / tau));
}

void apply_dephasing(StabilizerState& s, size_t qubit, double t, double tau, Rng& rng) {
  if (rng.next_double() >= dephase_fidelity(t, tau)) s.apply(GateKind::Z, qubit);
}

double emitter_dephasing_fidelity(int n_p, const HardwareParams& p) {
  if (n_p < 0) throw std::invalid_argument("photon count must be nonnegative");
  return std::pow(dephase_fidelity(p.t_rep + p.t_add, p.tau_e), n_p);
}

double aux_dephasing_fidelity(int r, double ps, const HardwareParams& p, bool exact) {
  if (r < 0) throw std::invalid_argument("photon count must be nonnegative");
  if (!(ps > 0 && ps <= 1)) throw std::invalid_argument("success probability out of range");
  if (r == 0) return 1.0;
  double t = p.t_rep + ps * p.t_add;  // MCMR operations fire only on heralds
  if (std::isinf(p.tau_s)) return 1.0;
  if (exact) {
    double g = ps / (ps + std::exp(t / p.tau_s) - 1.0);
    return 0.5 * (1.0 + std::pow(g, r));
  }
  return 0.5 * (1.0 + std::exp(-double(r) * t / (ps * p.tau_s)));
}

double herald_waiting_pmf(long m, long r, double ps) {
  if (r < 1) throw std::invalid_argument("need at least one success");
  if (!(ps > 0 && ps <= 1)) throw std::invalid_argument("success probability out of range");
  if (m < r) return 0.0;
  // C(m-1, r-1) ps^r (1-ps)^{m-r}, evaluated in log space for stability.
  double lg = std::lgamma(double(m)) - std::lgamma(double(r)) - std::lgamma(double(m - r + 1));
  double term = lg + r * std::log(ps);
  if (m > r) term += (m - r) * std::log1p(-ps);
  return std::exp(term);
}

double fidelity_single_spin(const HardwareParams& p, int n_p, bool exact_aux) {
  if (n_p < 1) throw std::invalid_argument("need at least one photon");
  double ps = p_success(p);
  double per_photon = p.f_add() * f_swap(p);
  return std::pow(per_photon, n_p) * emitter_dephasing_fidelity(n_p, p) *
         aux_dephasing_fidelity(n_p, ps, p, exact_aux);
}

double fidelity_G(const HardwareParams& p) {
  p.validate();
  // Destructive-measurement scheme: the herald probability is the emitter
  // collection efficiency itself.
  double ps = p.eta_e;
  double aux1 = aux_dephasing_fidelity(12, ps, p, true);
  double aux2 = aux_dephasing_fidelity(4, ps, p, true);
  return std::pow(p.f_add(), 12) * std::pow(p.F_CZ, 5) * emitter_dephasing_fidelity(12, p) *
         aux1 * aux2 * aux2;
}

OptimizeResult optimize_xi(const std::function<double(double)>& objective, double lo, double hi,
                           double tol, double eps_of_optimum) {
  if (!(lo < hi)) throw std::invalid_argument("empty bracket");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > tol) {
    if (eps_of_optimum > 0 && std::abs(fc - fd) <= eps_of_optimum && b - a < 0.25 * (hi - lo))
      break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = objective(d);
    }
  }
  OptimizeResult out{0.5 * (a + b), objective(0.5 * (a + b)), false};

  // Dense-grid cross-check guards against non-unimodal objectives.
  const int kGrid = 10000;
  double best_x = lo, best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    double x = lo + (hi - lo) * double(i) / kGrid;
    double v = objective(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double grid_step = (hi - lo) / kGrid;
  if (best_v > out.value && std::abs(best_x - out.xi) > std::max(tol, grid_step)) {
    out = {best_x, best_v, true};
  }
  return out;
}

MixtureEnsemble mixture_dephase_bookkeeping(const std::vector<MixtureStep>& steps, double tau) {
  if (!(tau > 0)) throw std::invalid_argument("coherence time out of range");
  MixtureEnsemble out;
  out.classes.push_back({{}, 1.0});
  out.fidelity = 1.0;
  auto p_id = [&](double t) { return dephase_fidelity(t, tau); };
  for (const auto& st : steps) {
    if (st.t_k < 0 || st.t_m < 0) throw std::invalid_argument("malformed trace: negative time");
    double factor;
    std::vector<SignClass> next;
    if (st.variant == MixtureVariant::join) {
      // Symmetric pairs merge: one class bit d = b_k + b_m with
      // P(d=0) = (1 + e^{-(t_k+t_m)/tau})/2.
      factor = p_id(st.t_k + st.t_m);
      for (const auto& cls : out.classes) {
        for (bool d : {false, true}) {
          SignClass c = cls;
          c.bits.push_back(d);
          c.probability *= d ? 1 - factor : factor;
          next.push_back(std::move(c));
        }
      }
    } else {
      // The ensemble doubles: independent bits for both pair members.
      factor = p_id(st.t_k) * p_id(st.t_m);
      for (const auto& cls : out.classes) {
        for (int bb = 0; bb < 4; ++bb) {
          bool bk = bb & 1, bm = (bb >> 1) & 1;
          SignClass c = cls;
          c.bits.push_back(bk);
          c.bits.push_back(bm);
          c.probability *= (bk ? 1 - p_id(st.t_k) : p_id(st.t_k)) *
                           (bm ? 1 - p_id(st.t_m) : p_id(st.t_m));
          next.push_back(std::move(c));
        }
      }
    }
    if (next.size() > (size_t{1} << 20)) throw std::length_error("ensemble too large");
    out.classes = std::move(next);
    out.step_factors.push_back(factor);
    out.fidelity *= factor;
  }
  return out;
}

}  // namespace gsf
