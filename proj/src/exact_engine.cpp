#include "backstab/exact_engine.hpp"

#include <cmath>
#include <set>
#include <string>

#include "backstab/rng.hpp"

namespace backstab {

namespace {

void check_state(int n, int m) {
  if (n < 0 || m < 0 || m > n)
    throw std::invalid_argument("exact: need 0 <= m <= n, got n=" + std::to_string(n) + " m=" + std::to_string(m));
}

std::string cap_message(int n, int m, const BigInt& profiles, std::uint64_t cap) {
  return "enumeration cap exceeded at (" + std::to_string(n) + ", " + std::to_string(m) + "): " +
         profiles.str() + " profiles > cap " + std::to_string(cap);
}

void collect_rvc_interior(int n, int m, std::set<StateKey>& out) {
  if (m == 0 || n <= 2 * m) return;
  if (!out.insert({n, m}).second) return;
  collect_rvc_interior(n - 2, m, out);
  collect_rvc_interior(n - 2, m - 1, out);
}

}  // namespace

EnumerationCapExceeded::EnumerationCapExceeded(int n, int m, BigInt profiles, std::uint64_t cap)
    : std::runtime_error(cap_message(n, m, profiles, cap)), n_(n), m_(m), profiles_(std::move(profiles)), cap_(cap) {}

ExactEngine::ExactEngine(EnumerationOptions options) : options_(options) {
  if (options_.workers < 1) options_.workers = 1;
}

std::optional<Rational> ExactEngine::lookup(const Memo& memo, StateKey key) const {
  std::lock_guard lock(mutex_);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  return std::nullopt;
}

Rational ExactEngine::store(Memo& memo, StateKey key, Rational value) {
  std::lock_guard lock(mutex_);
  // first writer wins; a racing recomputation yields the same value anyway
  return memo.emplace(key, std::move(value)).first->second;
}

Rational ExactEngine::w_random(int n, int m) {
  check_state(n, m);
  if (m == 0) return Rational(0);
  if (n <= 2 * m) return Rational(1);
  if (auto hit = lookup(random_memo_, {n, m})) return *hit;
  Rational value = Rational(n - m, n) * w_random(n - 2, m) + Rational(m, n) * w_random(n - 2, m - 1);
  return store(random_memo_, {n, m}, std::move(value));
}

Rational ExactEngine::w_vlopt(int n, int m) {
  check_state(n, m);
  if (m == 0) return Rational(0);
  if (n <= 2 * m + 2) return Rational(1);
  if (auto hit = lookup(vlopt_memo_, {n, m})) return *hit;
  Rational value = Rational(n - m, n) * w_vlopt(n - 2, m) + Rational(m, n) * w_vlopt(n - 2, m - 1);
  return store(vlopt_memo_, {n, m}, std::move(value));
}

Rational ExactEngine::p_faithful_collusion(int n, int m) {
  if (n < 2 || m < 1 || m > n - 1)
    throw std::invalid_argument("p_faithful_collusion: need 1 <= m <= n-1, got n=" + std::to_string(n) +
                                " m=" + std::to_string(m));
  if (auto hit = lookup(collusion_memo_, {n, m})) return *hit;
  BigInt profiles = collusion_profile_count(n, m);
  if (profiles > BigInt(options_.cap)) throw EnumerationCapExceeded(n, m, std::move(profiles), options_.cap);
  CollusionTally tally = enumerate_collusion_parallel(n, m, options_.partitions, options_.workers);
  return store(collusion_memo_, {n, m}, tally.probability());
}

Rational ExactEngine::w_rvc(int n, int m) {
  check_state(n, m);
  // refuse up front, largest state first, before any enumeration runs
  const auto interior = rvc_interior_states(n, m);
  for (auto it = interior.rbegin(); it != interior.rend(); ++it) {
    const StateKey key = *it;
    BigInt profiles = collusion_profile_count(key.n, key.m);
    if (profiles > BigInt(options_.cap)) throw EnumerationCapExceeded(key.n, key.m, std::move(profiles), options_.cap);
  }
  return rvc_step(n, m);
}

Rational ExactEngine::rvc_step(int n, int m) {
  if (m == 0) return Rational(0);
  if (n <= 2 * m) return Rational(1);
  if (auto hit = lookup(rvc_memo_, {n, m})) return *hit;
  const Rational faithful_banished = p_faithful_collusion(n, m);
  Rational value = faithful_banished * rvc_step(n - 2, m) + (1 - faithful_banished) * rvc_step(n - 2, m - 1);
  return store(rvc_memo_, {n, m}, std::move(value));
}

Rational w_random(int n, int m) { return ExactEngine().w_random(n, m); }
Rational w_vlopt(int n, int m) { return ExactEngine().w_vlopt(n, m); }

Rational w_rvc(int n, int m, std::uint64_t cap, int workers) {
  return ExactEngine({.cap = cap, .workers = workers}).w_rvc(n, m);
}

Rational p_faithful_collusion(int n, int m, std::uint64_t cap, int workers) {
  return ExactEngine({.cap = cap, .workers = workers}).p_faithful_collusion(n, m);
}

Rational w_random_unmemoized(int n, int m) {
  check_state(n, m);
  if (m == 0) return Rational(0);
  if (n <= 2 * m) return Rational(1);
  return Rational(n - m, n) * w_random_unmemoized(n - 2, m) + Rational(m, n) * w_random_unmemoized(n - 2, m - 1);
}

Rational w_vlopt_unmemoized(int n, int m) {
  check_state(n, m);
  if (m == 0) return Rational(0);
  if (n <= 2 * m + 2) return Rational(1);
  return Rational(n - m, n) * w_vlopt_unmemoized(n - 2, m) + Rational(m, n) * w_vlopt_unmemoized(n - 2, m - 1);
}

std::vector<StateKey> rvc_interior_states(int n, int m) {
  check_state(n, m);
  std::set<StateKey> states;
  collect_rvc_interior(n, m, states);
  return {states.begin(), states.end()};
}

CollusionEstimate p_faithful_collusion_mc(int n, int m, std::uint64_t samples, std::uint64_t seed) {
  if (n < 2 || m < 1 || m > n - 1) throw std::invalid_argument("p_faithful_collusion_mc: need 1 <= m <= n-1");
  if (samples < 1) throw std::invalid_argument("p_faithful_collusion_mc: need at least one sample");
  const int faithful = n - m;
  Rng rng(seed);
  std::vector<int> counts(static_cast<std::size_t>(n));
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::fill(counts.begin(), counts.end(), 0);
    counts[0] = m;
    for (int i = 0; i < faithful; ++i) {
      int d = uniform_index(rng, n - 1);
      ++counts[static_cast<std::size_t>(d < i ? d : d + 1)];
    }
    int top = 0, winners = 0, faithful_winners = 0;
    for (int j = 0; j < n; ++j) {
      const int c = counts[static_cast<std::size_t>(j)];
      if (c > top) {
        top = c;
        winners = 1;
        faithful_winners = j < faithful;
      } else if (c == top) {
        ++winners;
        faithful_winners += j < faithful;
      }
    }
    const double share = static_cast<double>(faithful_winners) / winners;
    // Welford update
    const double delta = share - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (share - mean);
  }
  CollusionEstimate out;
  out.samples = samples;
  out.estimate = mean;
  const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  out.standard_error = std::sqrt(variance / static_cast<double>(samples));
  out.wilson = wilson_rate(mean, samples);
  return out;
}

}  // namespace backstab
