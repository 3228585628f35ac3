#include "backstab/simulator.hpp"

#include <algorithm>

#include "backstab/stats.hpp"

namespace backstab {

namespace {

struct DayOutcome {
  PlayerId banished = kNoVote;
  std::vector<PlayerId> deviators;
  std::optional<PlayerId> punished_immediately;
};

VoteProfile collect_round_votes(const GameConfig& config, const Roster& roster, const PublicState& state,
                                Rng& rng) {
  const StrategyOptions options{.punish_compliance = config.punish_compliance};
  std::optional<PlayerId> target;
  if (traitors_collude(config.profile, roster, state, options)) target = pick_collusion_target(roster, rng);
  const RoundContext ctx{roster, state, target, options};
  return collect_votes(config.profile, ctx, rng);
}

DayOutcome run_day(const GameConfig& config, const Roster& roster, PublicState& state, Rng& rng) {
  DayOutcome day;
  VoteProfile votes = collect_round_votes(config, roster, state, rng);
  if (uses_vote_left(config.profile)) day.deviators = detect_deviators(votes, state, roster);

  if (config.punish_timing == PunishTiming::SameRound && !day.deviators.empty()) {
    // revote against the smallest-index deviator; its result is final
    const PlayerId accused = day.deviators.front();
    const PublicState revote_state = PublicState::punish({accused});
    votes = collect_round_votes(config, roster, revote_state, rng);
    day.punished_immediately = accused;
    state.enqueue(std::vector<PlayerId>(day.deviators.begin() + 1, day.deviators.end()));
  } else {
    state.enqueue(day.deviators);
  }

  day.banished = break_tie_and_banish(tally(votes, roster), rng).banished;
  return day;
}

}  // namespace

std::string_view to_string(PunishTiming timing) {
  return timing == PunishTiming::SameRound ? "same-round" : "next-round";
}

std::optional<PunishTiming> parse_punish_timing(std::string_view text) {
  if (text == "next-round" || text == "NextRound") return PunishTiming::NextRound;
  if (text == "same-round" || text == "SameRound") return PunishTiming::SameRound;
  return std::nullopt;
}

void validate(const GameConfig& config) {
  if (config.n < 2 || config.m < 1 || config.m >= config.n)
    throw ModelError("game config: need 1 <= m < n, got n=" + std::to_string(config.n) +
                     " m=" + std::to_string(config.m));
}

int max_rounds(int n, int m) {
  const int gap = std::max(0, n - 2 * m);
  return (gap + 1) / 2 + m;
}

GameOutcome run_game(const GameConfig& config, std::uint64_t game_seed, bool record_trace) {
  validate(config);
  Rng rng(game_seed);
  Roster roster = Roster::random_placement(config.n, config.m, rng);
  PublicState state;
  GameOutcome outcome;
  if (record_trace) outcome.trace.emplace();

  // each round removes two players, so n rounds can only mean a logic error
  for (int round = 0;; ++round) {
    if (auto winner = win_check(roster)) {
      outcome.winner = *winner;
      return outcome;
    }
    if (round >= config.n) throw std::logic_error("run_game: round guard tripped");

    RoundRecord record;
    if (record_trace) {
      record.round = round;
      record.alive = roster.alive_count();
      record.alive_traitors = roster.alive_traitors();
      record.public_state = state;
    }

    DayOutcome day = run_day(config, roster, state, rng);
    ++outcome.rounds_played;
    outcome.deviations += static_cast<int>(day.deviators.size());
    const Role banished_role = roster.role(day.banished);
    roster.remove(day.banished);
    state.purge(roster);

    if (record_trace) {
      record.deviators = day.deviators;
      record.punished_immediately = day.punished_immediately;
      record.banished = day.banished;
      record.banished_role = banished_role;
    }

    if (auto winner = win_check(roster)) {
      if (record_trace) outcome.trace->push_back(std::move(record));
      outcome.winner = *winner;
      return outcome;
    }

    const PlayerId victim = choose_murder_target(roster, rng);
    roster.remove(victim);
    state.purge(roster);
    if (record_trace) {
      record.murdered = victim;
      outcome.trace->push_back(std::move(record));
    }
  }
}

bool operator==(const GameConfig& a, const GameConfig& b) {
  return a.n == b.n && a.m == b.m && a.profile == b.profile && a.punish_timing == b.punish_timing &&
         a.punish_compliance == b.punish_compliance && a.seed == b.seed;
}

bool operator==(const BatchResult& a, const BatchResult& b) {
  return a.config == b.config && a.num_games == b.num_games && a.traitor_wins == b.traitor_wins &&
         a.faithful_wins == b.faithful_wins && a.traitor_win_rate == b.traitor_win_rate &&
         a.wilson_low == b.wilson_low && a.wilson_high == b.wilson_high && a.total_rounds == b.total_rounds &&
         a.games_with_deviation == b.games_with_deviation;
}

namespace {

BatchResult finish_batch(const GameConfig& config, std::uint64_t num_games, std::uint64_t traitor_wins,
                         std::uint64_t total_rounds, std::uint64_t games_with_deviation) {
  BatchResult result;
  result.config = config;
  result.num_games = num_games;
  result.traitor_wins = traitor_wins;
  result.faithful_wins = num_games - traitor_wins;
  result.total_rounds = total_rounds;
  result.games_with_deviation = games_with_deviation;
  const WilsonInterval ci = wilson(traitor_wins, num_games);
  result.traitor_win_rate = ci.point;
  result.wilson_low = ci.low;
  result.wilson_high = ci.high;
  return result;
}

}  // namespace

BatchResult run_batch(const GameConfig& config, std::uint64_t num_games, int workers) {
  validate(config);
  if (num_games < 1) throw ModelError("run_batch: need at least one game");
  if (workers < 1) workers = 1;

  std::uint64_t traitor_wins = 0;
  std::uint64_t total_rounds = 0;
  std::uint64_t games_with_deviation = 0;
  const auto games = static_cast<std::int64_t>(num_games);
#pragma omp parallel for num_threads(workers) schedule(static) \
    reduction(+ : traitor_wins, total_rounds, games_with_deviation)
  for (std::int64_t g = 0; g < games; ++g) {
    const GameOutcome outcome = run_game(config, derive_seed(config.seed, static_cast<std::uint64_t>(g)));
    traitor_wins += outcome.winner == Winner::Traitors ? 1 : 0;
    total_rounds += static_cast<std::uint64_t>(outcome.rounds_played);
    games_with_deviation += outcome.deviations > 0 ? 1 : 0;
  }
  return finish_batch(config, num_games, traitor_wins, total_rounds, games_with_deviation);
}

BatchResult run_batch_serial(const GameConfig& config, std::uint64_t num_games) {
  validate(config);
  if (num_games < 1) throw ModelError("run_batch: need at least one game");
  std::uint64_t traitor_wins = 0;
  std::uint64_t total_rounds = 0;
  std::uint64_t games_with_deviation = 0;
  for (std::uint64_t g = 0; g < num_games; ++g) {
    const GameOutcome outcome = run_game(config, derive_seed(config.seed, g));
    if (outcome.winner == Winner::Traitors) ++traitor_wins;
    total_rounds += static_cast<std::uint64_t>(outcome.rounds_played);
    if (outcome.deviations > 0) ++games_with_deviation;
  }
  return finish_batch(config, num_games, traitor_wins, total_rounds, games_with_deviation);
}

}  // namespace backstab
