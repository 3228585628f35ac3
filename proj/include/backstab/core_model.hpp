#pragma once

// Labeled game state for TG(n, m): the cyclic ring of players, the public
// comply/punish automaton, vote tallies and the parity win condition.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "backstab/rng.hpp"

namespace backstab {

/// Position in the fixed cyclic ordering, in [0, n).
using PlayerId = int;

inline constexpr PlayerId kNoVote = -1;

enum class Role : std::uint8_t { Faithful, Traitor };
enum class Winner : std::uint8_t { Faithful, Traitors };

std::string_view to_string(Role role);
std::string_view to_string(Winner winner);

/// Raised for any violated precondition or malformed input in the model.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Roster {
 public:
  /// All players start alive.
  explicit Roster(std::vector<Role> roles);

  /// Faithful at 0..n-m-1, Traitors at n-m..n-1.
  static Roster with_traitors_last(int n, int m);
  /// Traitor seats drawn uniformly among the n positions.
  static Roster random_placement(int n, int m, Rng& rng);

  int initial_size() const { return static_cast<int>(roles_.size()); }
  int alive_count() const { return alive_count_; }
  int alive_traitors() const { return alive_traitors_; }
  int alive_faithful() const { return alive_count_ - alive_traitors_; }

  bool contains(PlayerId i) const { return i >= 0 && i < initial_size(); }
  bool is_alive(PlayerId i) const { return contains(i) && alive_[static_cast<std::size_t>(i)]; }
  Role role(PlayerId i) const;

  std::vector<PlayerId> alive_players() const;
  std::vector<PlayerId> alive_with_role(Role role) const;

  /// Banishment or murder. Removing a dead or unknown player is an error.
  void remove(PlayerId i);

 private:
  std::vector<Role> roles_;
  std::vector<bool> alive_;
  int alive_count_ = 0;
  int alive_traitors_ = 0;
};

/// First alive player strictly after i in cyclic order.
PlayerId next_left(const Roster& roster, PlayerId i);

enum class PublicMode : std::uint8_t { Comply, Punish };

/// Public automaton state. Punish iff the queue of detected deviators is
/// nonempty; the queue stays sorted ascending and free of duplicates.
class PublicState {
 public:
  PublicState() = default;
  static PublicState comply() { return {}; }
  static PublicState punish(std::vector<PlayerId> queue);

  PublicMode mode() const { return queue_.empty() ? PublicMode::Comply : PublicMode::Punish; }
  bool punishing() const { return !queue_.empty(); }
  const std::vector<PlayerId>& queue() const { return queue_; }
  PlayerId head() const;

  /// Merge newly detected deviators, keeping ascending order.
  void enqueue(const std::vector<PlayerId>& deviators);
  /// Drop entries that are no longer alive.
  void purge(const Roster& roster);

  friend bool operator==(const PublicState&, const PublicState&) = default;

 private:
  std::vector<PlayerId> queue_;
};

/// votes[i] is the target of voter i, or kNoVote when i does not vote.
struct VoteProfile {
  std::vector<PlayerId> votes;

  explicit VoteProfile(int n) : votes(static_cast<std::size_t>(n), kNoVote) {}
  explicit VoteProfile(std::vector<PlayerId> v) : votes(std::move(v)) {}

  PlayerId operator[](PlayerId voter) const { return votes[static_cast<std::size_t>(voter)]; }
  void cast(PlayerId voter, PlayerId target) { votes[static_cast<std::size_t>(voter)] = target; }
  int size() const { return static_cast<int>(votes.size()); }

  friend bool operator==(const VoteProfile&, const VoteProfile&) = default;
};

/// Every cast ballot comes from an alive voter and names another alive player.
void validate_ballots(const VoteProfile& profile, const Roster& roster);
/// validate_ballots plus: every alive player voted, dead players did not.
void validate_complete(const VoteProfile& profile, const Roster& roster);

/// Votes cast as one block on a single target without individual ballots.
struct VoteBloc {
  PlayerId target;
  int size;
};

using VoteCounts = std::vector<int>;

VoteCounts tally(const VoteProfile& profile, const Roster& roster,
                 std::optional<VoteBloc> extra_bloc = std::nullopt);

struct TallyResult {
  VoteCounts counts;
  std::vector<PlayerId> tied_winners;
  PlayerId banished = kNoVote;
};

/// Uniform tie-break among the plurality winners. Does not touch the roster.
TallyResult break_tie_and_banish(const VoteCounts& counts, Rng& rng);

PlayerId prescribed_vote(const PublicState& state, const Roster& roster, PlayerId i);
VoteProfile prescribed_profile(const PublicState& state, const Roster& roster);

/// Voters whose ballot differs from the prescription, ascending by index.
std::vector<PlayerId> detect_deviators(const VoteProfile& profile, const PublicState& state,
                                       const Roster& roster);

std::optional<Winner> win_check(const Roster& roster);

}  // namespace backstab
