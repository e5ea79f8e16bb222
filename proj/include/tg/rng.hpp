#pragma once

#include <cstdint>

#include "tg/expr.hpp"

namespace tg {

/// Deterministic 64-bit linear congruential generator (Knuth MMIX constants):
///   state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)
/// Doubles take the top 53 bits of the state. Every randomized sweep in the
/// library and the test suites draws from this generator, so runs with equal
/// seeds are reproducible byte for byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi] (inclusive).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

/// Random polynomial of total degree <= max_degree with coefficients in
/// [coeff_lo, coeff_hi]; monomials are enumerated in a fixed order so the
/// result depends only on the generator state.
ScalarField random_polynomial(Rng& rng, int dimension, int max_degree, double coeff_lo,
                              double coeff_hi);

}  // namespace tg
