#pragma once

// Minimal seeded property runner for gtest. Each case gets the shared engine
// and a trace line naming the case index, so a failure can be replayed.

#include <cstdint>
#include <random>

#include <gtest/gtest.h>

namespace pacbayes::testing {

template <typename Fn>
void for_all(std::size_t cases, std::uint64_t seed, Fn&& fn) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    SCOPED_TRACE(::testing::Message() << "property case " << i << " (seed " << seed << ")");
    fn(rng);
    if (::testing::Test::HasFailure()) return;
  }
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace pacbayes::testing
