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

#ifndef GSF_RNG_HPP
#define GSF_RNG_HPP

#include <cstdint>

namespace gsf {

/// Counter-based SplitMix64 stream. Deterministic across platforms, and
/// splittable: child streams derived with `split` are independent of the
/// parent's future output, so parallel Monte Carlo loops reproduce exactly
/// under any scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  bool next_bit() { return (next_u64() >> 63) != 0; }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Bernoulli trial with success probability p.
  bool next_bernoulli(double p) { return next_double() < p; }

  /// Uniform integer in [0, bound).
  uint64_t next_below(uint64_t bound) { return next_u64() % bound; }

  /// Derives an independent child stream keyed by `salt`.
  Rng split(uint64_t salt = 0) {
    uint64_t mixed = next_u64() ^ (salt + 0xD1B54A32D192ED03ULL) * 0x9E3779B97F4A7C15ULL;
    return Rng(mixed);
  }

  /// Stateless child derivation: the stream for (seed, tag) is fixed no
  /// matter when or on which worker it is drawn.
  static Rng derive(uint64_t seed, uint64_t tag) {
    Rng r(seed ^ (tag + 1) * 0xD1B54A32D192ED03ULL);
    r.next_u64();
    return r;
  }

 private:
  uint64_t state_;
};

}  // namespace gsf

#endif  // GSF_RNG_HPP
