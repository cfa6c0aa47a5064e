#pragma once

#include <cstdint>

namespace pacbayes {

/// What a derived seed is used for. Distinct purposes get independent streams.
enum class SeedPurpose : std::uint64_t {
  data = 1,
  test_data = 2,
  monte_carlo = 3,
  folds = 4,
  holdout = 5,
  holdout_monte_carlo = 6,
  training = 7,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

/// Seed for one (sample size, run, purpose) cell of a sweep.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n, std::uint64_t run,
                                    SeedPurpose purpose) noexcept {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ n);
  s = splitmix64(s ^ run);
  return splitmix64(s ^ static_cast<std::uint64_t>(purpose));
}

}  // namespace pacbayes
