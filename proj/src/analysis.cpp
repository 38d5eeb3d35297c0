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

#include "gsf/analysis.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace gsf {

const char* const kVersion = "graphstate-forge 0.1.0";

double expected_build_time(BuildScheme scheme, int n_p, double eta_e) {
  if (n_p < 1) throw std::invalid_argument("need at least one photon");
  if (!(eta_e > 0.0 && eta_e <= 1.0)) {
    if (eta_e == 0.0) throw std::domain_error("zero efficiency: divergent build time");
    throw std::invalid_argument("efficiency out of range");
  }
  if (scheme == BuildScheme::emit_then_add) return double(n_p) / eta_e;
  if (eta_e == 1.0) return double(n_p);
  return (std::pow(eta_e, -double(n_p)) - 1.0) / (1.0 - eta_e);
}

double powerlaw_build_time(int n_p, double eta_e) {
  if (n_p < 1) throw std::invalid_argument("need at least one photon");
  if (!(eta_e > 0.0 && eta_e <= 1.0)) throw std::domain_error("efficiency out of range");
  return std::pow(eta_e, -double(n_p));
}

long max_graph_size(double f_add) {
  if (!(f_add > 0.0 && f_add <= 1.0)) throw std::invalid_argument("F_add out of range");
  if (f_add == 1.0) return -1;  // unbounded
  long n = long(std::floor(std::log(0.5) / std::log(f_add)));
  // Guard the floating-point boundary exactly.
  while (n >= 1 && n * std::log(f_add) < std::log(0.5)) --n;
  while ((n + 1) * std::log(f_add) >= std::log(0.5)) ++n;
  return std::max(n, 0L);
}

std::vector<McEstimate> mc_emit_build_times(int n_max, double eta_e, uint64_t trials, Rng rng) {
  if (n_max < 1 || trials == 0) throw std::invalid_argument("bad Monte Carlo arguments");
  std::vector<double> sum(size_t(n_max) + 1, 0.0), sumsq(size_t(n_max) + 1, 0.0);
  for (uint64_t t = 0; t < trials; ++t) {
    double cycles = 0;
    for (int n = 1; n <= n_max; ++n) {
      // Geometric herald wait, drawn by inversion.
      double u = rng.next_double();
      double wait = eta_e >= 1.0 ? 1.0 : std::floor(std::log1p(-u) / std::log1p(-eta_e)) + 1.0;
      cycles += wait;
      sum[size_t(n)] += cycles;
      sumsq[size_t(n)] += cycles * cycles;
    }
  }
  std::vector<McEstimate> out;
  for (int n = 1; n <= n_max; ++n) {
    double mean = sum[size_t(n)] / double(trials);
    double var = sumsq[size_t(n)] / double(trials) - mean * mean;
    out.push_back({mean, std::sqrt(std::max(var, 0.0) / double(trials)), trials});
  }
  return out;
}

McEstimate mc_deterministic_build_time(int n_p, double eta_e, uint64_t trials, Rng rng) {
  if (n_p < 1 || trials == 0) throw std::invalid_argument("bad Monte Carlo arguments");
  double sum = 0, sumsq = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    uint64_t cycles = 0;
    int run = 0;
    while (run < n_p) {
      ++cycles;
      run = rng.next_bernoulli(eta_e) ? run + 1 : 0;
    }
    sum += double(cycles);
    sumsq += double(cycles) * double(cycles);
  }
  double mean = sum / double(trials);
  double var = sumsq / double(trials) - mean * mean;
  return {mean, std::sqrt(std::max(var, 0.0) / double(trials)), trials};
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  size_t workers = std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvTable::text() const {
  std::string out;
  for (const auto& c : provenance) {
    out += "# ";
    out += c;
    out += '\n';
  }
  out += header;
  out += '\n';
  for (const auto& r : rows) {
    out += r;
    out += '\n';
  }
  return out;
}

void CsvTable::write_atomic(const std::string& path) const {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp);
    f << text();
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move results into place at " + path);
}

}  // namespace gsf
