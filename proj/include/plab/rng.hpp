#pragma once

#include <cstdint>
#include <random>

namespace plab {

/// Uniform integer in [0, n) from raw mt19937_64 draws by rejection, so a
/// seed gives the same stream with every standard library.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

/// Uniform integer in [lo, hi].
inline std::uint64_t uniform_in(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + uniform_below(rng, hi - lo + 1);
}

}  // namespace plab
