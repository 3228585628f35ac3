#pragma once

// Exhaustive enumeration of Faithful vote profiles when the m Traitors vote
// as one bloc on Faithful player 0.
//
// Faithful occupy seats 0..f-1 (f = n - m), Traitors f..n-1. A profile assigns
// each Faithful one of the n-1 other players, so there are (n-1)^f profiles,
// indexed in mixed radix with Faithful 0 as the fastest digit. For each profile
// the plurality winners W are found and |W ∩ F| / |W| is accumulated.
//
// Accumulation is exact and order-free: faithful_weight[w] sums |W ∩ F| over
// the profiles whose winner set has size w, so any partition of the index
// range reduces to the same tally.

#include <cstdint>
#include <vector>

#include "backstab/rational.hpp"

namespace backstab {

struct CollusionTally {
  int n = 0;
  int m = 0;
  std::uint64_t profiles = 0;
  /// Indexed by winner-set size, length n + 1.
  std::vector<std::uint64_t> faithful_weight;

  CollusionTally() = default;
  CollusionTally(int n_players, int n_traitors);

  CollusionTally& operator+=(const CollusionTally& other);
  friend bool operator==(const CollusionTally&, const CollusionTally&) = default;

  /// (1/profiles) * sum_w faithful_weight[w] / w, reduced once.
  Rational probability() const;
};

/// (n-1)^(n-m), the number of admissible Faithful profiles.
BigInt collusion_profile_count(int n, int m);

/// Odometer kernel over profile indices [begin, end) with incremental tally updates.
CollusionTally enumerate_collusion_range(int n, int m, std::uint64_t begin, std::uint64_t end);

/// Splits the index space into `partitions` contiguous ranges and reduces them
/// on `workers` OpenMP threads. partitions <= 0 picks a default.
CollusionTally enumerate_collusion_parallel(int n, int m, int partitions, int workers);

/// Serial reference: decodes every profile from its index and recounts from
/// scratch. Slow; kept for cross-checking the kernels.
CollusionTally enumerate_collusion_reference(int n, int m);

}  // namespace backstab
