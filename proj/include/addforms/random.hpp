#pragma once

#include <cstdint>
#include <random>

namespace addforms {

/// Seeded 64-bit engine for stream `stream` of a run seeded with `seed`.
/// std::mt19937_64 and std::seed_seq are fully specified by the standard, so
/// streams are identical on every platform.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform integer in [0, bound) by rejection; unlike the std distributions
/// this is portable across standard library implementations.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

}  // namespace addforms
