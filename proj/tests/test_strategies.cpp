#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "backstab/strategies.hpp"

using namespace backstab;

namespace {

Roster roster_with(int n, std::initializer_list<PlayerId> traitors) {
  std::vector<Role> roles(static_cast<std::size_t>(n), Role::Faithful);
  for (PlayerId t : traitors) roles[static_cast<std::size_t>(t)] = Role::Traitor;
  return Roster(std::move(roles));
}

}  // namespace

TEST_CASE("profile ids round-trip verbatim") {
  for (StrategyProfile p : kAllProfiles) CHECK(parse_profile(to_string(p)) == p);
  CHECK_FALSE(parse_profile("vl_comp").has_value());
  CHECK_FALSE(parse_profile("VL+Opt").has_value());
}

TEST_CASE("pick_collusion_target") {
  Rng rng(4);
  Roster single = roster_with(3, {0, 2});
  CHECK(pick_collusion_target(single, rng) == 1);

  Roster roster = roster_with(7, {0, 2, 3, 5});
  std::map<PlayerId, int> hits;
  constexpr int draws = 90000;
  for (int k = 0; k < draws; ++k) ++hits[pick_collusion_target(roster, rng)];
  CHECK(hits.size() == 3);
  const double sigma = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (PlayerId f : {1, 4, 6}) CHECK(std::abs(hits[f] - draws / 3.0) < 4 * sigma);

  Roster all_traitors = roster_with(2, {0, 1});
  CHECK_THROWS_AS(pick_collusion_target(all_traitors, rng), ModelError);
}

TEST_CASE("choose_murder_target") {
  Rng rng(6);
  Roster roster = roster_with(6, {1, 4});
  std::map<PlayerId, int> hits;
  constexpr int draws = 80000;
  for (int k = 0; k < draws; ++k) ++hits[choose_murder_target(roster, rng)];
  CHECK(hits.size() == 4);
  CHECK_FALSE(hits.contains(1));
  CHECK_FALSE(hits.contains(4));
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (auto [who, count] : hits) CHECK(std::abs(count - draws / 4.0) < 4 * sigma);

  Roster last = roster_with(3, {0});
  last.remove(1);
  CHECK(choose_murder_target(last, rng) == 2);
  Roster no_traitors = roster_with(3, {});
  CHECK_THROWS_AS(choose_murder_target(no_traitors, rng), ModelError);
}

TEST_CASE("decide_vote examples") {
  Rng rng(1);
  Roster ring = roster_with(8, {2, 5});
  const PublicState comply;
  CHECK(decide_vote(StrategyProfile::VL_COMP, Role::Faithful, 6, {ring, comply, std::nullopt, {}}, rng) == 7);

  // VL_OPT at n_t = 7, m_t = 2: comply
  Roster seven = roster_with(8, {2, 5});
  seven.remove(0);
  CHECK_FALSE(in_deviation_regime(seven));
  CHECK(decide_vote(StrategyProfile::VL_OPT, Role::Traitor, 2, {seven, comply, 4, {}}, rng) ==
        prescribed_vote(comply, seven, 2));

  // VL_OPT at n_t = 6, m_t = 2: collude
  Roster six = seven;
  six.remove(1);
  CHECK(in_deviation_regime(six));
  CHECK(decide_vote(StrategyProfile::VL_OPT, Role::Traitor, 2, {six, comply, 4, {}}, rng) == 4);
  CHECK(decide_vote(StrategyProfile::VL_OPT, Role::Faithful, 3, {six, comply, 4, {}}, rng) == 4);
  CHECK(decide_vote(StrategyProfile::VL_OPT, Role::Faithful, 4, {six, comply, 4, {}}, rng) == 5);
}

TEST_CASE("VL_C punish rounds and the punish-compliance switch") {
  Rng rng(2);
  Roster ring = roster_with(8, {2, 5});
  const PublicState punish = PublicState::punish({5});
  const RoundContext literal{ring, punish, 0, {}};
  CHECK(decide_vote(StrategyProfile::VL_C, Role::Traitor, 2, literal, rng) == 0);
  CHECK(decide_vote(StrategyProfile::VL_C, Role::Faithful, 1, literal, rng) == 5);

  const RoundContext switched{ring, punish, std::nullopt, {.punish_compliance = true}};
  CHECK_FALSE(traitors_collude(StrategyProfile::VL_C, ring, punish, switched.options));
  CHECK(decide_vote(StrategyProfile::VL_C, Role::Traitor, 2, switched, rng) == 5);
  CHECK(decide_vote(StrategyProfile::VL_C, Role::Traitor, 5, switched, rng) == next_left(ring, 5));
  // switch only matters while punishing
  CHECK(traitors_collude(StrategyProfile::VL_C, ring, PublicState::comply(), switched.options));
}

TEST_CASE("colluding without a target is a logic error") {
  Rng rng(3);
  Roster ring = roster_with(5, {0});
  const PublicState comply;
  CHECK_THROWS_AS(decide_vote(StrategyProfile::RVC, Role::Traitor, 0, {ring, comply, std::nullopt, {}}, rng),
                  ModelError);
}

TEST_CASE("votes are never for self or the dead, for every profile") {
  Rng rng(12);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 3 + uniform_index(rng, 15);
    Roster roster = Roster::random_placement(n, 1 + uniform_index(rng, n - 2), rng);
    for (PlayerId i = 0; i < n && roster.alive_count() > 3; ++i)
      if (roster.role(i) == Role::Faithful && roster.alive_faithful() > 1 && uniform_index(rng, 3) == 0)
        roster.remove(i);
    PublicState state;
    if (uniform_index(rng, 2) == 0) state.enqueue({roster.alive_players()[static_cast<std::size_t>(uniform_index(rng, roster.alive_count()))]});
    for (StrategyProfile profile : kAllProfiles) {
      for (bool compliance : {false, true}) {
        const StrategyOptions options{.punish_compliance = compliance};
        std::optional<PlayerId> target;
        if (traitors_collude(profile, roster, state, options)) target = pick_collusion_target(roster, rng);
        const VoteProfile votes = collect_votes(profile, {roster, state, target, options}, rng);
        CHECK_NOTHROW(validate_complete(votes, roster));
      }
    }
  }
}

TEST_CASE("VL_COMP always matches the prescription") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + uniform_index(rng, 20);
    Roster roster = Roster::random_placement(n, 1 + uniform_index(rng, n - 2), rng);
    PublicState state;
    if (uniform_index(rng, 2) == 0) state.enqueue({uniform_index(rng, n)});
    const VoteProfile votes = collect_votes(StrategyProfile::VL_COMP, {roster, state, std::nullopt, {}}, rng);
    CHECK(detect_deviators(votes, state, roster).empty());
  }
}

TEST_CASE("RVC Traitors vote as one bloc") {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + uniform_index(rng, 20);
    Roster roster = Roster::random_placement(n, 2 + uniform_index(rng, n - 3), rng);
    const PlayerId target = pick_collusion_target(roster, rng);
    const VoteProfile votes = collect_votes(StrategyProfile::RVC, {roster, PublicState{}, target, {}}, rng);
    for (PlayerId t : roster.alive_with_role(Role::Traitor)) CHECK(votes[t] == target);
    CHECK(roster.role(target) == Role::Faithful);
  }
}

TEST_CASE("VL_OPT outside the late game equals VL_COMP draw for draw") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng setup(seed);
    const int m = 1 + uniform_index(setup, 4);
    const int n = 2 * m + 3 + uniform_index(setup, 10);
    Roster roster = Roster::random_placement(n, m, setup);
    REQUIRE_FALSE(in_deviation_regime(roster));
    CHECK_FALSE(traitors_collude(StrategyProfile::VL_OPT, roster, PublicState{}, {}));
    Rng a(seed), b(seed);
    CHECK(collect_votes(StrategyProfile::VL_OPT, {roster, PublicState{}, std::nullopt, {}}, a) ==
          collect_votes(StrategyProfile::VL_COMP, {roster, PublicState{}, std::nullopt, {}}, b));
  }
}

TEST_CASE("RV ignores the public state and is uniform over others") {
  Rng rng(21);
  Roster roster = roster_with(5, {3});
  const PublicState punish = PublicState::punish({3});
  std::array<int, 5> hits{};
  constexpr int draws = 40000;
  for (int k = 0; k < draws; ++k) ++hits[static_cast<std::size_t>(decide_vote(StrategyProfile::RV, Role::Faithful, 0, {roster, punish, std::nullopt, {}}, rng))];
  CHECK(hits[0] == 0);
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (int j = 1; j < 5; ++j) CHECK(std::abs(hits[static_cast<std::size_t>(j)] - draws / 4.0) < 4 * sigma);
}
