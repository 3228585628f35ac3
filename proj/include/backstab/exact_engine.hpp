#pragma once

// Exact Traitor win probabilities from state (n, m):
//   w_random  mutual random play (each alive player equally likely banished)
//   w_rvc     random Faithful votes against a colluding Traitor bloc
//   w_vlopt   Vote-Left compliance, Traitors absorbing every n <= 2m + 2 state
// All three use the same case order: m = 0, then the absorbing boundary, then
// one day/night step to n - 2.

#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>

#include "backstab/collusion_enumeration.hpp"
#include "backstab/rational.hpp"
#include "backstab/stats.hpp"

namespace backstab {

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

/// Thrown when a collusion enumeration would visit more than the cap.
class EnumerationCapExceeded : public std::runtime_error {
 public:
  EnumerationCapExceeded(int n, int m, BigInt profiles, std::uint64_t cap);

  int n() const { return n_; }
  int m() const { return m_; }
  const BigInt& profiles() const { return profiles_; }
  std::uint64_t cap() const { return cap_; }

 private:
  int n_;
  int m_;
  BigInt profiles_;
  std::uint64_t cap_;
};

struct StateKey {
  int n = 0;
  int m = 0;
  auto operator<=>(const StateKey&) const = default;
};

struct EnumerationOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  int workers = 1;
  /// <= 0 lets the kernel choose.
  int partitions = 0;
};

/// Memoizing evaluator. Safe to share between threads; memo entries are
/// written once under a lock and never changed.
class ExactEngine {
 public:
  explicit ExactEngine(EnumerationOptions options = {});

  Rational w_random(int n, int m);
  Rational w_vlopt(int n, int m);
  /// Throws EnumerationCapExceeded before any enumeration if some interior
  /// state on the recursion tree is over the cap.
  Rational w_rvc(int n, int m);
  Rational p_faithful_collusion(int n, int m);

  const EnumerationOptions& options() const { return options_; }

 private:
  using Memo = std::map<StateKey, Rational>;

  std::optional<Rational> lookup(const Memo& memo, StateKey key) const;
  Rational store(Memo& memo, StateKey key, Rational value);
  Rational rvc_step(int n, int m);

  EnumerationOptions options_;
  mutable std::mutex mutex_;
  Memo random_memo_;
  Memo vlopt_memo_;
  Memo rvc_memo_;
  Memo collusion_memo_;
};

// Convenience wrappers with a fresh engine per call.
Rational w_random(int n, int m);
Rational w_vlopt(int n, int m);
Rational w_rvc(int n, int m, std::uint64_t cap = kDefaultEnumerationCap, int workers = 1);
Rational p_faithful_collusion(int n, int m, std::uint64_t cap = kDefaultEnumerationCap, int workers = 1);

/// Plain recursion without memoization; exists to check the memo tables.
Rational w_random_unmemoized(int n, int m);
Rational w_vlopt_unmemoized(int n, int m);

/// Every interior (n', m') that w_rvc(n, m) visits, i.e. those needing an enumeration.
std::vector<StateKey> rvc_interior_states(int n, int m);

struct CollusionEstimate {
  double estimate = 0.0;
  /// Sample standard deviation of the per-profile share over sqrt(samples).
  double standard_error = 0.0;
  /// Wilson interval with the estimate treated as a proportion over `samples`;
  /// conservative because each share lies in [0, 1].
  WilsonInterval wilson;
  std::uint64_t samples = 0;
};

/// Samples profiles uniformly and averages |W ∩ F| / |W|. Deterministic in seed.
CollusionEstimate p_faithful_collusion_mc(int n, int m, std::uint64_t samples, std::uint64_t seed);

}  // namespace backstab
