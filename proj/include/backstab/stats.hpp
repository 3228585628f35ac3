#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "backstab/rational.hpp"
#include "backstab/simulator.hpp"

namespace backstab {

inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
  double z = kZ95;

  bool contains(double value) const { return low <= value && value <= high; }
};

/// Wilson score interval for k successes in n trials. Throws on n = 0 or k > n.
WilsonInterval wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ95);
/// Same interval for an observed rate in [0, 1] that need not be k/n.
WilsonInterval wilson_rate(double rate, std::uint64_t trials, double z = kZ95);

/// One strategy's Traitor win rate at (n, m), exact, simulated, or both.
struct RateEstimate {
  int n = 0;
  int m = 0;
  std::string strategy;
  std::optional<Rational> exact;
  /// Traitor wins and games played.
  std::optional<std::uint64_t> traitor_wins;
  std::optional<std::uint64_t> games;

  static RateEstimate from_exact(int n, int m, std::string strategy, Rational w);
  static RateEstimate from_batch(const BatchResult& batch);
  static RateEstimate from_counts(int n, int m, std::string strategy, std::uint64_t traitor_wins,
                                  std::uint64_t games);

  /// Faithful win rate 1 - w; exact when available.
  Rational faithful_rate() const;
  bool faithful_rate_is_zero() const;
};

struct RatioPoint {
  int n = 0;
  int m = 0;
  std::string numerator_strategy;
  std::string denominator_strategy;
  /// Absent when the denominator records no Faithful wins.
  std::optional<double> ratio;
  /// Present when both operands are exact and the ratio exists.
  std::optional<Rational> exact_ratio;
};

/// (1 - w_a) / (1 - w_b). Throws std::invalid_argument when (n, m) differ.
RatioPoint faithful_ratio(const RateEstimate& a, const RateEstimate& b);

}  // namespace backstab
