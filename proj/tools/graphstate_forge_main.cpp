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

// Batch experiment driver: construction-time scaling, fidelity cutoffs,
// swap-model scans, xi optimization, builds, protocol runs, security
// reports, and rate curves, all emitted as CSV with provenance headers.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gsf/analysis.hpp"
#include "gsf/builder.hpp"
#include "gsf/channel.hpp"
#include "gsf/fock.hpp"
#include "gsf/graph.hpp"
#include "gsf/mpc.hpp"

using namespace gsf;

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  uint64_t seed = 0;
  uint64_t trials = 10000;
  bool trials_given = false;
  std::string format = "csv";
};

struct Config {
  std::map<std::string, std::string> kv;
  HardwareParams params;

  bool has(const std::string& k) const { return kv.count(k) != 0; }
  std::string get(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  }
  double get_d(const std::string& k, double dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : std::stod(it->second);
  }
  long get_l(const std::string& k, long dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : std::stol(it->second);
  }
  std::vector<double> get_list(const std::string& k, const std::string& dflt) const {
    std::vector<double> out;
    std::stringstream ss(get(k, dflt));
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
  }
};

const std::set<std::string> kParamKeys = {"eta_e", "eta_s", "eta_i", "xi",    "R_d",
                                          "t_exp", "t_rep", "t_add", "tau_e", "tau_s",
                                          "F_e",   "F_p",   "F_CZ",  "F_MCMR"};

Config load_config(const std::string& path, int line_diag = 1) {
  Config cfg;
  std::string param_text;
  if (!path.empty()) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": expected key=value, got '" + line + "'");
      auto trim = [](std::string s) {
        auto x = s.find_first_not_of(" \t\r");
        auto y = s.find_last_not_of(" \t\r");
        return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
      };
      std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
      if (key.empty() || val.empty())
        throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
      if (kParamKeys.count(key)) {
        param_text += key + "=" + val + "\n";
      } else {
        cfg.kv[key] = val;
      }
    }
  }
  (void)line_diag;
  if (!param_text.empty()) cfg.params = HardwareParams::parse(param_text);
  return cfg;
}

std::vector<std::string> provenance(const std::string& command, const Options& opt,
                                    const Config& cfg) {
  std::vector<std::string> out;
  out.push_back(std::string(kVersion));
  out.push_back("command=" + command);
  out.push_back("seed=" + std::to_string(opt.seed));
  out.push_back("trials=" + std::to_string(opt.trials));
  for (const auto& [k, v] : cfg.kv) out.push_back("config " + k + "=" + v);
  std::istringstream ps(cfg.params.serialize());
  std::string line;
  while (std::getline(ps, line)) out.push_back("param " + line);
  return out;
}

void emit(const CsvTable& table, const Options& opt) {
  if (opt.out_path.empty()) {
    std::cout << table.text();
  } else {
    table.write_atomic(opt.out_path);
  }
}

// ---------------------------------------------------------------------------

CsvTable cmd_scaling(const Options& opt, const Config& cfg) {
  CsvTable t;
  t.header = "scheme,eta_e,n_p,expected_cycles,powerlaw_cycles,mc_cycles,mc_stderr";
  auto etas = cfg.get_list("eta_list", "0.1,0.5,0.9");
  int np_max = int(cfg.get_l("np_max", 100));
  double mc_cap = cfg.get_d("mc_max_expected", 20000.0);

  // Parameter points are independent; per-point seeds are derived statelessly
  // so the worker pool cannot change the output.
  std::vector<std::vector<McEstimate>> emit_mc(etas.size());
  parallel_for(etas.size(), [&](size_t e) {
    emit_mc[e] = mc_emit_build_times(np_max, etas[e], opt.trials,
                                     Rng::derive(opt.seed, e));
  });
  std::vector<std::vector<McEstimate>> det_mc(etas.size(),
                                              std::vector<McEstimate>(size_t(np_max)));
  std::vector<std::pair<size_t, int>> det_points;
  for (size_t e = 0; e < etas.size(); ++e)
    for (int n = 1; n <= np_max; ++n)
      if (expected_build_time(BuildScheme::deterministic, n, etas[e]) <= mc_cap)
        det_points.emplace_back(e, n);
  parallel_for(det_points.size(), [&](size_t i) {
    auto [e, n] = det_points[i];
    det_mc[e][size_t(n - 1)] = mc_deterministic_build_time(
        n, etas[e], opt.trials, Rng::derive(opt.seed, 1000 + e * 4096 + size_t(n)));
  });

  for (size_t e = 0; e < etas.size(); ++e) {
    double eta = etas[e];
    for (int n = 1; n <= np_max; ++n) {
      const auto& est = emit_mc[e][size_t(n - 1)];
      std::ostringstream row;
      row << "emit_then_add," << fmt_double(eta) << ',' << n << ','
          << fmt_double(expected_build_time(BuildScheme::emit_then_add, n, eta)) << ",,"
          << fmt_double(est.mean) << ',' << fmt_double(est.stderr_mean);
      t.rows.push_back(row.str());
    }
    for (int n = 1; n <= np_max; ++n) {
      double expect = expected_build_time(BuildScheme::deterministic, n, eta);
      std::ostringstream row;
      row << "deterministic," << fmt_double(eta) << ',' << n << ',' << fmt_double(expect) << ','
          << fmt_double(powerlaw_build_time(n, eta)) << ',';
      if (det_mc[e][size_t(n - 1)].trials > 0) {
        row << fmt_double(det_mc[e][size_t(n - 1)].mean) << ','
            << fmt_double(det_mc[e][size_t(n - 1)].stderr_mean);
      } else {
        row << ',';
      }
      t.rows.push_back(row.str());
    }
  }
  return t;
}

CsvTable cmd_cutoffs(const Options&, const Config& cfg) {
  CsvTable t;
  t.header = "f_add,n_max,n_max_full_model";
  bool full = cfg.get_l("full_model", 0) != 0;
  for (double f : cfg.get_list("f_add_list", "0.99,0.999,0.9999")) {
    std::ostringstream row;
    row << fmt_double(f) << ',' << max_graph_size(f) << ',';
    if (full) {
      // Full model: largest n with the single-spin fidelity at least 1/2,
      // with F_add supplied through the CZ component. Without a pair source
      // (xi = 0) the herald is the emitter collection itself, so the swap
      // factor drops out.
      HardwareParams p = cfg.params;
      p.F_CZ = f;
      auto fidelity_n = [&](int n) {
        if (p.xi > 0) return fidelity_single_spin(p, n);
        return std::pow(p.f_add(), n) * emitter_dephasing_fidelity(n, p) *
               aux_dephasing_fidelity(n, p.eta_e, p);
      };
      long n = 0;
      while (n < 1000000 && fidelity_n(int(n + 1)) >= 0.5) ++n;
      row << n;
    }
    t.rows.push_back(row.str());
  }
  return t;
}

CsvTable cmd_swap_model(const Options&, const Config& cfg) {
  CsvTable t;
  bool oracle = cfg.get_l("oracle", 0) != 0;
  t.header = "eta_e,eta_s,eta_i,xi,rd_t_exp,p_t,p_s,f_swap";
  if (oracle) t.header += ",p_t_oracle,p_s_oracle,rel_err_t,rel_err_s";
  int n_max = int(cfg.get_l("n_max", 8));
  for (double ee : cfg.get_list("eta_e_list", "0.1,0.325,0.55,0.775,1.0"))
    for (double es : cfg.get_list("eta_s_list", "0.1,0.325,0.55,0.775,1.0"))
      for (double ei : cfg.get_list("eta_i_list", "0.1,0.325,0.55,0.775,1.0"))
        for (double mu : cfg.get_list("rdtexp_list", "0,0.001"))
          for (double xi : cfg.get_list("xi_list", "0.005,0.02,0.05")) {
            HardwareParams p = cfg.params;
            p.eta_e = ee;
            p.eta_s = es;
            p.eta_i = ei;
            p.xi = xi;
            p.R_d = mu;
            p.t_exp = 1.0;
            double pt = p_true(p), ps = p_success(p);
            std::ostringstream row;
            row << fmt_double(ee) << ',' << fmt_double(es) << ',' << fmt_double(ei) << ','
                << fmt_double(xi) << ',' << fmt_double(mu) << ',' << fmt_double(pt) << ','
                << fmt_double(ps) << ',' << fmt_double(ps > 0 ? f_swap(p) : 0.0);
            if (oracle) {
              auto r = fock_oracle(p, {n_max});
              row << ',' << fmt_double(r.p_t) << ',' << fmt_double(r.p_s) << ','
                  << fmt_double(pt > 0 ? std::abs(pt - r.p_t) / pt : std::abs(r.p_t)) << ','
                  << fmt_double(ps > 0 ? std::abs(ps - r.p_s) / ps : std::abs(r.p_s));
            }
            t.rows.push_back(row.str());
          }
  return t;
}

CsvTable cmd_optimize_xi(const Options&, const Config& cfg) {
  CsvTable t;
  t.header = "eta_e,n_p,xi_star,fidelity,grid_override";
  int n_p = int(cfg.get_l("n_p", 12));
  double lo = cfg.get_d("xi_lo", 1e-9), hi = cfg.get_d("xi_hi", 0.999);
  double tol = cfg.get_d("tol", 1e-6), eps = cfg.get_d("eps_opt", 0.0);
  HardwareParams base = cfg.params;
  auto objective = [&](double x) {
    HardwareParams q = base;
    q.xi = x;
    return fidelity_single_spin(q, n_p);
  };
  auto res = optimize_xi(objective, lo, hi, tol, eps);
  std::ostringstream row;
  row << fmt_double(base.eta_e) << ',' << n_p << ',' << fmt_double(res.xi) << ','
      << fmt_double(res.value) << ',' << int(res.grid_override);
  t.rows.push_back(row.str());
  return t;
}

CsvTable cmd_build_graph(const Options& opt, const Config& cfg) {
  CsvTable t;
  t.header = "record,value";
  HeraldModel herald{cfg.get_d("p_success", cfg.params.eta_e), cfg.params.t_rep,
                     cfg.params.t_add};
  auto res = build_G(herald, opt.seed);
  auto perm = build_emission_to_label();
  std::vector<int> label_of_qubit(16, 0);
  for (int p = 1; p <= 12; ++p) label_of_qubit[BuildSystem::photon_qubit(p)] = perm[size_t(p)];
  for (auto [a, b] : res.photon_graph.edges()) {
    int la = label_of_qubit[a], lb = label_of_qubit[b];
    std::ostringstream row;
    row << "edge," << std::min(la, lb) << ' ' << std::max(la, lb);
    t.rows.push_back(row.str());
  }
  for (int p = 1; p <= 12; ++p)
    t.rows.push_back("emission_to_label,p" + std::to_string(p) + " -> " +
                     std::to_string(perm[size_t(p)]));
  for (auto [photon, c] : res.byproducts)
    t.rows.push_back("byproduct,p" + std::to_string(photon) + " c=" + std::to_string(int(c)));
  {
    std::istringstream ls(res.log.text());
    std::string line;
    while (std::getline(ls, line)) t.rows.push_back("log," + line);
  }
  return t;
}

BooleanFunctionSpec load_function(const Config& cfg) {
  std::string path = cfg.get("function_file", "");
  if (path.empty()) throw std::runtime_error("mpc commands need function_file=PATH in the config");
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open function file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return BooleanFunctionSpec::parse(ss.str());
}

std::vector<std::vector<bool>> parse_inputs(const BooleanFunctionSpec& spec,
                                            const std::string& text) {
  std::vector<std::vector<bool>> inputs;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    std::vector<bool> bits;
    for (char c : tok) {
      if (c != '0' && c != '1') throw std::runtime_error("inputs must be bitstrings");
      bits.push_back(c == '1');
    }
    inputs.push_back(bits);
  }
  if (int(inputs.size()) != spec.n_parties)
    throw std::runtime_error("inputs= needs one bitstring per party, separated by ';'");
  return inputs;
}

CsvTable cmd_mpc_run(const Options& opt, const Config& cfg) {
  auto spec = load_function(cfg);
  auto inputs = parse_inputs(spec, cfg.get("inputs", ""));
  HeraldModel herald{cfg.get_d("p_success", cfg.params.eta_e), cfg.params.t_rep,
                     cfg.params.t_add};
  bool use_builder = cfg.get_l("use_builder", 0) != 0;
  auto res = run_protocol(spec, inputs, opt.seed, use_builder ? &herald : nullptr);

  CsvTable t;
  t.header = "copy,field,value";
  std::istringstream body(transcripts_to_csv(res.copies));
  std::string line;
  std::getline(body, line);  // drop the inner header
  while (std::getline(body, line)) t.rows.push_back(line);
  for (size_t k = 0; k < res.stage2.gamma.size(); ++k)
    t.rows.push_back("-,gamma_" + std::to_string(k) + "," +
                     std::to_string(int(res.stage2.gamma[k])));
  t.rows.push_back("-,gamma_R," + std::to_string(int(res.stage2.gamma_R)));
  t.rows.push_back("-,output," + std::to_string(int(res.stage2.value)));
  t.rows.push_back("-,expected," + std::to_string(int(res.expected)));

  double eps_star = cfg.get_d("eps_star", 0.0);
  if (eps_star > 0) {
    auto plan = plan_conjunctions(spec);
    auto kk = choose_K(eps_star, plan.r_conj(), cfg.get_d("eps_f", 1e-3));
    int K = int(cfg.get_l("k_reps", kk.k));
    std::vector<bool> ab;
    for (size_t i = 0; i < plan.r_conj(); ++i)
      ab.push_back(plan.a_input(i, inputs) && plan.b_input(i, inputs));
    Rng rng(opt.seed + 1);
    auto reps = make_subiterations(ab, K, rng);
    auto ec = apply_noise_and_correct(reps, eps_star, rng);
    bool g = ec.gamma_R;
    for (auto& subs : reps) g ^= subs[0].alpha ^ subs[0].beta;
    t.rows.push_back("-,ec_K," + std::to_string(K));
    t.rows.push_back("-,ec_sum," + std::to_string(int(g)));
  }
  return t;
}

CsvTable cmd_mpc_security(const Options&, const Config&) {
  CsvTable t;
  t.header = "check,detail,value";
  for (auto [sc, name] :
       {std::pair{TraceScenario::honest_B_R, "honest_B_R"},
        std::pair{TraceScenario::honest_A_R, "honest_A_R"},
        std::pair{TraceScenario::honest_P_S, "honest_P_S"}}) {
    auto rep = trace_security_stabilizers(sc, /*collect=*/true);
    t.rows.push_back(std::string("trace_branches,") + name + "," + std::to_string(rep.branches));
    t.rows.push_back(std::string("trace_mismatches,") + name + "," +
                     std::to_string(rep.mismatches));
  }
  std::vector<std::pair<std::string, AdversaryRule>> rules = {
      {"const0", [](const std::vector<bool>&) { return false; }},
      {"parity", [](const std::vector<bool>& v) { return v[0] ^ v[1] ^ v[2] ^ v[3]; }},
  };
  for (auto& [rulename, rule] : rules) {
    for (int c = 0; c < 8; ++c) {
      bool a = c & 1, b = (c >> 1) & 1, z = (c >> 2) & 1;
      double tv = total_variation(real_view_S_as_A(a, b, z, rule),
                                  ideal_view_S_as_A(a, b, z, rule));
      std::ostringstream row;
      row << "tvd_S_as_A," << rulename << " a=" << a << " b=" << b << " z=" << z << ','
          << fmt_double(tv);
      t.rows.push_back(row.str());
    }
  }
  for (int c = 0; c < 16; ++c) {
    bool a = c & 1, b = (c >> 1) & 1, zA = (c >> 2) & 1, zB = (c >> 3) & 1;
    double tv = total_variation(real_view_R(a, b, zA, zB), ideal_view_R(a, b, zA, zB));
    std::ostringstream row;
    row << "tvd_R,a=" << a << " b=" << b << " zA=" << zA << " zB=" << zB << ','
        << fmt_double(tv);
    t.rows.push_back(row.str());
  }
  return t;
}

CsvTable cmd_rate(const Options&, const Config& cfg) {
  CsvTable t;
  t.header = "eps_f,eps_star,m_bits,r_conj,k_closed,k_bound,rate_r0_units,rate_rrep_units";
  double eps_star = cfg.get_d("eps_star", 0.157);
  int n = int(cfg.get_l("n_parties", 2));
  long m_min = cfg.get_l("m_min", 2), m_max = cfg.get_l("m_max", 40);
  double r0_rrep = cfg.get_d("r0", cfg.params.eta_e);  // R0 = eta_e * R_rep
  for (double eps_f : cfg.get_list("eps_f_list", "1e-3,1e-12")) {
    for (long m = m_min; m <= m_max; ++m) {
      long r_conj = (m - 1) * (m - 1);  // two-party conversion between axes
      auto kk = choose_K(eps_star, size_t(std::max(r_conj, 1L)), eps_f);
      double rate = rate_lower_bound(int(m), n, eps_f, eps_star, 1.0);
      std::ostringstream row;
      row << fmt_double(eps_f) << ',' << fmt_double(eps_star) << ',' << m << ',' << r_conj << ','
          << kk.k_closed_form << ',' << kk.k << ',' << fmt_double(rate) << ','
          << fmt_double(rate * r0_rrep);
      t.rows.push_back(row.str());
    }
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded photonic graph-state toolkit: construction scaling, swap-model "
               "analysis, builds of the 12-photon protocol state, and the two-party "
               "computation protocol."};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "key=value config file");
  app.add_option("--seed", opt.seed, "random seed (default 0)");
  app.add_option("--out", opt.out_path, "output CSV path (stdout when omitted)");
  auto* trials_opt = app.add_option("--trials", opt.trials, "Monte Carlo trials");
  app.add_option("--format", opt.format, "output format (csv)");

  struct Command {
    CsvTable (*fn)(const Options&, const Config&);
    std::set<std::string> keys;
  };
  std::map<std::string, Command> handlers = {
      {"scaling", {cmd_scaling, {"eta_list", "np_max", "mc_max_expected", "trials"}}},
      {"cutoffs", {cmd_cutoffs, {"f_add_list", "full_model"}}},
      {"swap-model",
       {cmd_swap_model,
        {"eta_e_list", "eta_s_list", "eta_i_list", "xi_list", "rdtexp_list", "oracle", "n_max"}}},
      {"optimize-xi", {cmd_optimize_xi, {"n_p", "xi_lo", "xi_hi", "tol", "eps_opt"}}},
      {"build-graph", {cmd_build_graph, {"p_success"}}},
      {"mpc-run",
       {cmd_mpc_run,
        {"function_file", "inputs", "eps_star", "eps_f", "k_reps", "use_builder", "p_success"}}},
      {"mpc-security", {cmd_mpc_security, {}}},
      {"rate",
       {cmd_rate, {"eps_f_list", "eps_star", "m_min", "m_max", "n_parties", "r0"}}},
  };
  for (auto& [name, cmd] : handlers) {
    (void)cmd;
    app.add_subcommand(name);
  }

  CLI11_PARSE(app, argc, argv);
  opt.trials_given = trials_opt->count() > 0;

  try {
    if (opt.format != "csv") throw std::runtime_error("only --format csv is supported");
    Config cfg = load_config(opt.config_path);
    if (!opt.trials_given && cfg.has("trials")) opt.trials = uint64_t(cfg.get_l("trials", 10000));
    std::string name = app.get_subcommands().front()->get_name();
    const Command& cmd = handlers.at(name);
    for (const auto& [k, v] : cfg.kv) {
      (void)v;
      if (!cmd.keys.count(k))
        throw std::runtime_error("config key '" + k + "' is not used by " + name);
    }
    CsvTable table = cmd.fn(opt, cfg);
    table.provenance = provenance(name, opt, cfg);
    emit(table, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
