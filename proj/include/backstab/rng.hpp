#pragma once

#include <cstdint>
#include <random>
#include <vector>
#include <stdexcept>

namespace backstab {

/// Every game, enumeration sample stream and tie-break owns one of these.
using Rng = std::mt19937_64;

/// Seed for stream `index` under `master`. Pure function, so per-game seeds do
/// not depend on which worker ran the game.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl-sequence step
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform integer in [0, bound).
inline int uniform_index(Rng& rng, int bound) {
  if (bound <= 0) throw std::invalid_argument("uniform_index: empty range");
  return std::uniform_int_distribution<int>(0, bound - 1)(rng);
}

template <typename T>
const T& uniform_pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(uniform_index(rng, static_cast<int>(items.size())))];
}

}  // namespace backstab
