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

#ifndef GSF_ANALYSIS_HPP
#define GSF_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gsf/rng.hpp"

namespace gsf {

enum class BuildScheme { deterministic, emit_then_add };

/// Expected construction time in repetition cycles. The deterministic scheme
/// restarts from scratch on any failed detection: (eta^{-n} - 1)/(1 - eta);
/// emit-then-add retries only the photon: n / eta.
double expected_build_time(BuildScheme scheme, int n_p, double eta_e);

/// Pure power-law form eta^{-n} of the deterministic curve, emitted alongside
/// the exact expected restart time for comparison.
double powerlaw_build_time(int n_p, double eta_e);

/// Largest n with F_add^n >= 1/2; -1 signals unbounded (F_add = 1).
long max_graph_size(double f_add);

struct McEstimate {
  double mean = 0;
  double stderr_mean = 0;
  uint64_t trials = 0;
};

/// Monte Carlo build times for emit-then-add, one estimate per photon count
/// 1..n_max (prefix sums share one stream of heralds per trial).
std::vector<McEstimate> mc_emit_build_times(int n_max, double eta_e, uint64_t trials, Rng rng);

/// Monte Carlo of the restart scheme; attempt-level simulation.
McEstimate mc_deterministic_build_time(int n_p, double eta_e, uint64_t trials, Rng rng);

/// Runs fn(0..n-1) on a small worker pool. Tasks must be independent;
/// callers keep determinism by deriving per-index seeds.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

struct CsvTable {
  std::vector<std::string> provenance;  // emitted as '#'-prefixed lines
  std::string header;
  std::vector<std::string> rows;

  std::string text() const;
  /// Writes through a temporary file and renames, so partial results never
  /// appear at the target path.
  void write_atomic(const std::string& path) const;
};

/// Fixed-format double with enough digits for bit-exact round trips.
std::string fmt_double(double v);

extern const char* const kVersion;

}  // namespace gsf

#endif  // GSF_ANALYSIS_HPP
