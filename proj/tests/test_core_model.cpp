#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "backstab/core_model.hpp"

using namespace backstab;

namespace {

Roster ring_with_alive(int n, std::initializer_list<PlayerId> alive) {
  Roster roster = Roster::with_traitors_last(n, 0);
  for (PlayerId i = 0; i < n; ++i)
    if (std::find(alive.begin(), alive.end(), i) == alive.end()) roster.remove(i);
  return roster;
}

/// Fig. 2F pattern on the 8-ring: Traitor 7 votes for 2 instead of 0.
VoteProfile fig2f_profile(const Roster& roster) {
  VoteProfile votes = prescribed_profile(PublicState::comply(), roster);
  votes.cast(7, 2);
  return votes;
}

}  // namespace

TEST_CASE("next_left walks the surviving ring") {
  Roster full = Roster::with_traitors_last(8, 2);
  CHECK(next_left(full, 3) == 4);
  CHECK(next_left(full, 7) == 0);

  Roster sparse = ring_with_alive(8, {0, 2, 5});
  CHECK(next_left(sparse, 5) == 0);
  CHECK(next_left(sparse, 2) == 5);
  CHECK(next_left(sparse, 0) == 2);
}

TEST_CASE("next_left errors") {
  Roster lone = ring_with_alive(4, {1});
  CHECK_THROWS_AS(next_left(lone, 1), ModelError);
  Roster sparse = ring_with_alive(5, {0, 2});
  CHECK_THROWS_AS(next_left(sparse, 1), ModelError);
}

TEST_CASE("next_left is a single cycle over the alive set") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + uniform_index(rng, 20);
    Roster roster = Roster::with_traitors_last(n, 0);
    // kill a random subset but keep at least two
    for (PlayerId i = 0; i < n && roster.alive_count() > 2; ++i)
      if (uniform_index(rng, 3) == 0) roster.remove(i);
    const auto alive = roster.alive_players();
    std::set<PlayerId> images;
    for (PlayerId i : alive) images.insert(next_left(roster, i));
    CHECK(images.size() == alive.size());

    std::set<PlayerId> visited;
    PlayerId at = alive.front();
    for (std::size_t k = 0; k < alive.size(); ++k) {
      visited.insert(at);
      at = next_left(roster, at);
    }
    CHECK(at == alive.front());
    CHECK(visited.size() == alive.size());
  }
}

TEST_CASE("prescribed_vote under comply and punish") {
  Roster ring = Roster::with_traitors_last(8, 2);
  CHECK(prescribed_vote(PublicState::comply(), ring, 6) == 7);
  const PublicState punish = PublicState::punish({4});
  CHECK(prescribed_vote(punish, ring, 1) == 4);
  CHECK(prescribed_vote(punish, ring, 4) == next_left(ring, 4));
  CHECK_THROWS_AS(PublicState::comply().head(), ModelError);
}

TEST_CASE("punish prescription always banishes the head for n_t >= 3") {
  Rng rng(5);
  for (int n = 3; n <= 12; ++n) {
    Roster ring = Roster::with_traitors_last(n, 1);
    for (PlayerId head = 0; head < n; ++head) {
      const auto counts = tally(prescribed_profile(PublicState::punish({head}), ring), ring);
      const TallyResult result = break_tie_and_banish(counts, rng);
      CHECK(result.tied_winners == std::vector<PlayerId>{head});
      CHECK(counts[static_cast<std::size_t>(head)] == n - 1);
    }
  }
}

TEST_CASE("tally examples") {
  Roster ring = Roster::with_traitors_last(8, 2);
  const auto comply = tally(prescribed_profile(PublicState::comply(), ring), ring);
  CHECK(std::all_of(comply.begin(), comply.end(), [](int c) { return c == 1; }));

  const auto deviated = tally(fig2f_profile(ring), ring);
  CHECK(deviated[0] == 0);
  CHECK(deviated[2] == 2);

  Roster three = Roster::with_traitors_last(3, 1);
  VoteProfile faithful_only(3);
  faithful_only.cast(0, 1);
  faithful_only.cast(1, 0);
  CHECK(tally(faithful_only, three, VoteBloc{0, 1}) == VoteCounts{2, 1, 0});
}

TEST_CASE("tally rejects malformed ballots") {
  Roster ring = Roster::with_traitors_last(4, 1);
  VoteProfile self(4);
  self.cast(1, 1);
  CHECK_THROWS_AS(tally(self, ring), ModelError);

  ring.remove(3);
  VoteProfile to_dead(4);
  to_dead.cast(0, 3);
  CHECK_THROWS_AS(tally(to_dead, ring), ModelError);

  VoteProfile from_dead(4);
  from_dead.cast(3, 0);
  CHECK_THROWS_AS(tally(from_dead, ring), ModelError);

  CHECK_THROWS_AS(tally(VoteProfile(4), ring, VoteBloc{3, 1}), ModelError);
  CHECK_THROWS_AS(tally(VoteProfile(5), ring), ModelError);
}

TEST_CASE("compliance tally is uniform on every ring") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + uniform_index(rng, 25);
    Roster roster = Roster::random_placement(n, uniform_index(rng, n), rng);
    for (PlayerId i = 0; i < n && roster.alive_count() > 2; ++i)
      if (uniform_index(rng, 2) == 0) roster.remove(i);
    const auto counts = tally(prescribed_profile(PublicState::comply(), roster), roster);
    for (PlayerId i = 0; i < n; ++i) CHECK(counts[static_cast<std::size_t>(i)] == (roster.is_alive(i) ? 1 : 0));
  }
}

TEST_CASE("break_tie_and_banish") {
  Rng rng(1);
  SUBCASE("clear winner") {
    for (int k = 0; k < 100; ++k) CHECK(break_tie_and_banish({2, 1}, rng).banished == 0);
  }
  SUBCASE("two-way tie with a zero") {
    std::array<int, 3> hits{};
    for (int k = 0; k < 10000; ++k) ++hits[static_cast<std::size_t>(break_tie_and_banish({1, 1, 0}, rng).banished)];
    CHECK(hits[2] == 0);
    CHECK(std::abs(hits[0] - 5000) < 4 * 50);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(break_tie_and_banish({}, rng), ModelError);
    CHECK_THROWS_AS(break_tie_and_banish({0, 0}, rng), ModelError);
  }
  SUBCASE("seeded determinism") {
    Rng a(77), b(77);
    for (int k = 0; k < 50; ++k)
      CHECK(break_tie_and_banish({1, 1, 1, 1}, a).banished == break_tie_and_banish({1, 1, 1, 1}, b).banished);
  }
}

TEST_CASE("three-way tie is uniform (chi-square)") {
  Rng rng(2024);
  constexpr int draws = 150000;
  std::array<double, 3> hits{};
  for (int k = 0; k < draws; ++k) ++hits[static_cast<std::size_t>(break_tie_and_banish({1, 1, 1}, rng).banished)];
  double chi2 = 0.0;
  for (double h : hits) chi2 += (h - draws / 3.0) * (h - draws / 3.0) / (draws / 3.0);
  // 2 degrees of freedom, p = 1e-4
  CHECK(chi2 < 18.42);
}

TEST_CASE("detect_deviators") {
  Roster ring = Roster::with_traitors_last(8, 2);
  const PublicState comply;
  CHECK(detect_deviators(prescribed_profile(comply, ring), comply, ring).empty());
  CHECK(detect_deviators(fig2f_profile(ring), comply, ring) == std::vector<PlayerId>{7});

  VoteProfile both = prescribed_profile(comply, ring);
  both.cast(7, 3);
  both.cast(6, 3);
  CHECK(detect_deviators(both, comply, ring) == std::vector<PlayerId>{6, 7});

  // in a punish round the prescription is the head
  const PublicState punish = PublicState::punish({6});
  VoteProfile punish_votes = prescribed_profile(punish, ring);
  CHECK(detect_deviators(punish_votes, punish, ring).empty());
  punish_votes.cast(7, 0);
  CHECK(detect_deviators(punish_votes, punish, ring) == std::vector<PlayerId>{7});

  VoteProfile incomplete(8);
  CHECK_THROWS_AS(detect_deviators(incomplete, comply, ring), ModelError);
}

TEST_CASE("detect_deviators is empty iff the profile is the prescription") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + uniform_index(rng, 10);
    Roster roster = Roster::random_placement(n, 1 + uniform_index(rng, n - 2), rng);
    PublicState state = uniform_index(rng, 2) == 0 ? PublicState::comply()
                                                   : PublicState::punish({uniform_index(rng, n)});
    const VoteProfile prescribed = prescribed_profile(state, roster);
    VoteProfile votes = prescribed;
    // perturb some voters with legal ballots
    for (PlayerId i = 0; i < n; ++i) {
      if (uniform_index(rng, 4) != 0) continue;
      PlayerId target = uniform_index(rng, n);
      if (target != i) votes.cast(i, target);
    }
    const auto deviators = detect_deviators(votes, state, roster);
    CHECK(deviators.empty() == (votes == prescribed));
    CHECK(std::is_sorted(deviators.begin(), deviators.end()));
    for (PlayerId d : deviators) CHECK(votes[d] != prescribed[d]);
  }
}

TEST_CASE("win_check") {
  auto state = [](int n, int m) { return Roster::with_traitors_last(n, m); };
  CHECK(win_check(state(4, 2)) == Winner::Traitors);
  CHECK(win_check(state(5, 0)) == Winner::Faithful);
  CHECK(win_check(state(1, 0)) == Winner::Faithful);
  CHECK_FALSE(win_check(state(7, 2)).has_value());
  CHECK(win_check(state(5, 3)) == Winner::Traitors);
  CHECK_FALSE(win_check(state(5, 2)).has_value());
}

TEST_CASE("removing a Faithful never undoes a Traitor win") {
  for (int n = 2; n <= 16; ++n) {
    for (int m = 1; m < n; ++m) {
      Roster roster = Roster::with_traitors_last(n, m);
      const auto before = win_check(roster);
      if (roster.alive_faithful() == 0) continue;
      roster.remove(0);
      const auto after = win_check(roster);
      if (before == Winner::Traitors) CHECK(after == Winner::Traitors);
    }
  }
}

TEST_CASE("public state queue stays sorted and purged") {
  PublicState state;
  CHECK(state.mode() == PublicMode::Comply);
  state.enqueue({5, 2});
  state.enqueue({3, 5});
  CHECK(state.queue() == std::vector<PlayerId>{2, 3, 5});
  CHECK(state.mode() == PublicMode::Punish);
  CHECK(state.head() == 2);

  Roster roster = Roster::with_traitors_last(6, 2);
  roster.remove(2);
  roster.remove(5);
  state.purge(roster);
  CHECK(state.queue() == std::vector<PlayerId>{3});
  roster.remove(3);
  state.purge(roster);
  CHECK(state.mode() == PublicMode::Comply);
}

TEST_CASE("roster bookkeeping") {
  Rng rng(9);
  Roster roster = Roster::random_placement(10, 3, rng);
  CHECK(roster.alive_count() == 10);
  CHECK(roster.alive_traitors() == 3);
  CHECK(roster.alive_with_role(Role::Traitor).size() == 3);
  const PlayerId t = roster.alive_with_role(Role::Traitor).front();
  roster.remove(t);
  CHECK(roster.alive_count() == 9);
  CHECK(roster.alive_traitors() == 2);
  CHECK_THROWS_AS(roster.remove(t), ModelError);
  CHECK_THROWS_AS(Roster::with_traitors_last(3, 4), ModelError);
}

TEST_CASE("random placement is uniform over seats") {
  Rng rng(31);
  constexpr int games = 60000;
  std::array<int, 6> traitor_hits{};
  for (int g = 0; g < games; ++g) {
    Roster roster = Roster::random_placement(6, 2, rng);
    for (PlayerId t : roster.alive_with_role(Role::Traitor)) ++traitor_hits[static_cast<std::size_t>(t)];
  }
  // each seat is a Traitor with probability 1/3
  const double p = 1.0 / 3.0;
  const double sigma = std::sqrt(games * p * (1 - p));
  for (int h : traitor_hits) CHECK(std::abs(h - games * p) < 4 * sigma);
}
