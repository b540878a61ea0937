// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace frobevo {

// Seedable RNG with platform-independent draws. The engine is std::mt19937_64,
// whose output sequence is fixed by the C++ standard; bounded draws use plain
// modulo reduction and probability draws use the top 53 bits, so identical
// seeds reproduce identical runs on every platform. Distributions from
// <random> are deliberately avoided (their streams are implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) { return engine_() % n; }

  /// True with probability p (p in [0, 1]).
  bool chance(double p) {
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u < p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace frobevo
