#pragma once

// Monte Carlo play of TG(n, m). Each round: parity check, day vote with
// deviation detection, banishment, second win check, night murder.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "backstab/core_model.hpp"
#include "backstab/strategies.hpp"

namespace backstab {

enum class PunishTiming : std::uint8_t {
  /// The deviating tally stands; deviators are punished from the next day phase.
  NextRound,
  /// The deviating tally is discarded and the smallest-index deviator faces an
  /// immediate revote.
  SameRound,
};

std::string_view to_string(PunishTiming timing);
std::optional<PunishTiming> parse_punish_timing(std::string_view text);

struct GameConfig {
  int n = 0;
  int m = 0;
  StrategyProfile profile = StrategyProfile::RV;
  PunishTiming punish_timing = PunishTiming::NextRound;
  bool punish_compliance = false;
  /// Master seed for batches.
  std::uint64_t seed = 0;
};

/// Throws ModelError unless 1 <= m < n.
void validate(const GameConfig& config);

struct RoundRecord {
  int round = 0;
  // state before the day phase
  int alive = 0;
  int alive_traitors = 0;
  PublicState public_state;

  std::vector<PlayerId> deviators;
  /// Set when a SameRound revote replaced the original tally.
  std::optional<PlayerId> punished_immediately;
  PlayerId banished = kNoVote;
  Role banished_role = Role::Faithful;
  std::optional<PlayerId> murdered;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct GameOutcome {
  Winner winner = Winner::Faithful;
  /// Day phases held.
  int rounds_played = 0;
  int deviations = 0;
  std::optional<std::vector<RoundRecord>> trace;
};

/// ceil((n - 2m) / 2) + m, the most rounds a game from (n, m) can last.
int max_rounds(int n, int m);

GameOutcome run_game(const GameConfig& config, std::uint64_t game_seed, bool record_trace = false);

struct BatchResult {
  GameConfig config;
  std::uint64_t num_games = 0;
  std::uint64_t traitor_wins = 0;
  std::uint64_t faithful_wins = 0;
  double traitor_win_rate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  // diagnostics
  std::uint64_t total_rounds = 0;
  std::uint64_t games_with_deviation = 0;

  friend bool operator==(const BatchResult&, const BatchResult&);
};

/// Game i uses derive_seed(config.seed, i). The result does not depend on `workers`.
BatchResult run_batch(const GameConfig& config, std::uint64_t num_games, int workers);
/// Single-threaded reference for run_batch.
BatchResult run_batch_serial(const GameConfig& config, std::uint64_t num_games);

bool operator==(const GameConfig& a, const GameConfig& b);

}  // namespace backstab
