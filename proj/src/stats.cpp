#include "backstab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace backstab {

WilsonInterval wilson_rate(double rate, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson: need at least one trial");
  if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("wilson: rate outside [0, 1]");
  const double n = static_cast<double>(trials);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (rate + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(rate * (1.0 - rate) / n + z2 / (4.0 * n * n));
  WilsonInterval out;
  out.point = rate;
  out.z = z;
  out.low = std::clamp(centre - half, 0.0, 1.0);
  out.high = std::clamp(centre + half, 0.0, 1.0);
  // pin the degenerate ends exactly
  if (rate == 0.0) out.low = 0.0;
  if (rate == 1.0) out.high = 1.0;
  out.low = std::min(out.low, rate);
  out.high = std::max(out.high, rate);
  return out;
}

WilsonInterval wilson(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson: need at least one trial");
  if (successes > trials) throw std::invalid_argument("wilson: more successes than trials");
  return wilson_rate(static_cast<double>(successes) / static_cast<double>(trials), trials, z);
}

RateEstimate RateEstimate::from_exact(int n, int m, std::string strategy, Rational w) {
  RateEstimate r;
  r.n = n;
  r.m = m;
  r.strategy = std::move(strategy);
  r.exact = std::move(w);
  return r;
}

RateEstimate RateEstimate::from_counts(int n, int m, std::string strategy, std::uint64_t traitor_wins,
                                       std::uint64_t games) {
  if (games == 0 || traitor_wins > games) throw std::invalid_argument("rate estimate: bad counts");
  RateEstimate r;
  r.n = n;
  r.m = m;
  r.strategy = std::move(strategy);
  r.traitor_wins = traitor_wins;
  r.games = games;
  return r;
}

RateEstimate RateEstimate::from_batch(const BatchResult& batch) {
  return from_counts(batch.config.n, batch.config.m, std::string(to_string(batch.config.profile)),
                     batch.traitor_wins, batch.num_games);
}

Rational RateEstimate::faithful_rate() const {
  if (exact) return 1 - *exact;
  if (games && traitor_wins) return Rational(BigInt(*games - *traitor_wins), BigInt(*games));
  throw std::logic_error("rate estimate: neither exact nor simulated");
}

bool RateEstimate::faithful_rate_is_zero() const { return faithful_rate() == 0; }

RatioPoint faithful_ratio(const RateEstimate& a, const RateEstimate& b) {
  if (a.n != b.n || a.m != b.m)
    throw std::invalid_argument("faithful_ratio: operands describe different states");
  RatioPoint point;
  point.n = a.n;
  point.m = a.m;
  point.numerator_strategy = a.strategy;
  point.denominator_strategy = b.strategy;
  const Rational denominator = b.faithful_rate();
  if (denominator == 0) return point;
  const Rational ratio = a.faithful_rate() / denominator;
  point.ratio = to_double(ratio);
  if (a.exact && b.exact) point.exact_ratio = ratio;
  return point;
}

}  // namespace backstab
