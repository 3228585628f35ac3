#include "backstab/collusion_enumeration.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace backstab {

namespace {

void check_state(int n, int m) {
  if (n < 2 || m < 1 || m > n - 1)
    throw std::invalid_argument("collusion enumeration: need 1 <= m <= n-1, got n=" + std::to_string(n) +
                                " m=" + std::to_string(m));
}

std::uint64_t checked_profile_count(int n, int m) {
  const BigInt total = collusion_profile_count(n, m);
  // faithful_weight entries are bounded by profiles * n
  if (total * n > BigInt(std::numeric_limits<std::uint64_t>::max()))
    throw std::invalid_argument("collusion enumeration: profile space too large for 64-bit tallies");
  return total.convert_to<std::uint64_t>();
}

/// Target named by digit d for Faithful voter i (skips the voter's own seat).
inline int digit_target(int voter, int digit) { return digit < voter ? digit : digit + 1; }

/// Adds |W ∩ F| to the bucket for |W|.
inline void score_profile(const std::vector<int>& counts, int faithful, CollusionTally& out) {
  int top = 0;
  int winners = 0;
  int faithful_winners = 0;
  const int n = static_cast<int>(counts.size());
  for (int j = 0; j < n; ++j) {
    const int c = counts[static_cast<std::size_t>(j)];
    if (c > top) {
      top = c;
      winners = 1;
      faithful_winners = j < faithful ? 1 : 0;
    } else if (c == top) {
      ++winners;
      if (j < faithful) ++faithful_winners;
    }
  }
  out.faithful_weight[static_cast<std::size_t>(winners)] += static_cast<std::uint64_t>(faithful_winners);
  ++out.profiles;
}

}  // namespace

CollusionTally::CollusionTally(int n_players, int n_traitors)
    : n(n_players), m(n_traitors), faithful_weight(static_cast<std::size_t>(n_players) + 1, 0) {}

CollusionTally& CollusionTally::operator+=(const CollusionTally& other) {
  if (n != other.n || m != other.m) throw std::invalid_argument("collusion tally: mismatched states");
  profiles += other.profiles;
  for (std::size_t w = 0; w < faithful_weight.size(); ++w) faithful_weight[w] += other.faithful_weight[w];
  return *this;
}

Rational CollusionTally::probability() const {
  if (profiles == 0) throw std::logic_error("collusion tally: no profiles enumerated");
  // common denominator lcm(1..n) keeps the sum in integers
  BigInt common = 1;
  for (int w = 2; w <= n; ++w) common = boost::multiprecision::lcm(common, BigInt(w));
  BigInt total = 0;
  for (int w = 1; w <= n; ++w) total += BigInt(faithful_weight[static_cast<std::size_t>(w)]) * (common / w);
  return Rational(total, common * BigInt(profiles));
}

BigInt collusion_profile_count(int n, int m) {
  check_state(n, m);
  return boost::multiprecision::pow(BigInt(n - 1), static_cast<unsigned>(n - m));
}

CollusionTally enumerate_collusion_range(int n, int m, std::uint64_t begin, std::uint64_t end) {
  const std::uint64_t total = checked_profile_count(n, m);
  if (begin > end || end > total) throw std::invalid_argument("collusion enumeration: bad index range");
  const int faithful = n - m;
  const int radix = n - 1;
  CollusionTally out(n, m);
  if (begin == end) return out;

  std::vector<int> digits(static_cast<std::size_t>(faithful));
  std::uint64_t rest = begin;
  for (int i = 0; i < faithful; ++i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::uint64_t>(radix));
    rest /= static_cast<std::uint64_t>(radix);
  }

  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  counts[0] = m;
  for (int i = 0; i < faithful; ++i) ++counts[static_cast<std::size_t>(digit_target(i, digits[static_cast<std::size_t>(i)]))];

  for (std::uint64_t index = begin;;) {
    score_profile(counts, faithful, out);
    if (++index == end) break;
    // odometer step: move each carried voter's ballot
    for (int i = 0; i < faithful; ++i) {
      int& d = digits[static_cast<std::size_t>(i)];
      --counts[static_cast<std::size_t>(digit_target(i, d))];
      if (++d < radix) {
        ++counts[static_cast<std::size_t>(digit_target(i, d))];
        break;
      }
      d = 0;
      ++counts[static_cast<std::size_t>(digit_target(i, 0))];
    }
  }
  return out;
}

CollusionTally enumerate_collusion_parallel(int n, int m, int partitions, int workers) {
  const std::uint64_t total = checked_profile_count(n, m);
  if (workers < 1) workers = 1;
  if (partitions <= 0) partitions = 16 * workers;
  const auto parts = static_cast<std::uint64_t>(std::max(1, partitions));

  std::vector<CollusionTally> partial(static_cast<std::size_t>(parts));
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (std::int64_t p = 0; p < static_cast<std::int64_t>(parts); ++p) {
    const auto up = static_cast<std::uint64_t>(p);
    const std::uint64_t begin = total / parts * up + std::min(up, total % parts);
    const std::uint64_t end = begin + total / parts + (up < total % parts ? 1 : 0);
    partial[static_cast<std::size_t>(p)] = enumerate_collusion_range(n, m, begin, end);
  }

  CollusionTally out(n, m);
  for (const auto& t : partial) out += t;
  return out;
}

CollusionTally enumerate_collusion_reference(int n, int m) {
  const std::uint64_t total = checked_profile_count(n, m);
  const int faithful = n - m;
  const auto radix = static_cast<std::uint64_t>(n - 1);
  CollusionTally out(n, m);
  std::vector<int> counts(static_cast<std::size_t>(n));
  for (std::uint64_t index = 0; index < total; ++index) {
    std::fill(counts.begin(), counts.end(), 0);
    counts[0] = m;
    std::uint64_t rest = index;
    for (int i = 0; i < faithful; ++i) {
      ++counts[static_cast<std::size_t>(digit_target(i, static_cast<int>(rest % radix)))];
      rest /= radix;
    }
    score_profile(counts, faithful, out);
  }
  return out;
}

}  // namespace backstab
