#pragma once

// The five voting profiles and the shared night-murder policy.
//
//   RV       everyone votes uniformly at random
//   RVC      Faithful random, Traitors bloc-vote one shared Faithful target
//   VL_COMP  everyone follows Vote-Left with punishment
//   VL_C     Faithful follow Vote-Left, Traitors always bloc-vote
//   VL_OPT   Faithful follow Vote-Left, Traitors comply while n_t > 2 m_t + 2
//            and bloc-vote once n_t <= 2 m_t + 2

#include <array>
#include <optional>
#include <string_view>

#include "backstab/core_model.hpp"

namespace backstab {

enum class StrategyProfile : std::uint8_t { RV, RVC, VL_COMP, VL_C, VL_OPT };

inline constexpr std::array<StrategyProfile, 5> kAllProfiles = {
    StrategyProfile::RV, StrategyProfile::RVC, StrategyProfile::VL_COMP, StrategyProfile::VL_C,
    StrategyProfile::VL_OPT};

std::string_view to_string(StrategyProfile profile);
/// Accepts the verbatim ids RV, RVC, VL_COMP, VL_C, VL_OPT.
std::optional<StrategyProfile> parse_profile(std::string_view text);

/// Profiles with a Vote-Left prescription that deviations are checked against.
bool uses_vote_left(StrategyProfile profile);

struct StrategyOptions {
  /// VL_C only: Traitors follow the prescription while the public state is Punish.
  bool punish_compliance = false;
};

struct RoundContext {
  const Roster& roster;
  const PublicState& public_state;
  std::optional<PlayerId> collusion_target;
  StrategyOptions options;
};

/// Late game, where the punishment threat is no longer credible.
bool in_deviation_regime(const Roster& roster);

/// Whether Traitors bloc-vote in this vote collection (so a target must be drawn).
bool traitors_collude(StrategyProfile profile, const Roster& roster, const PublicState& state,
                      StrategyOptions options);

PlayerId pick_collusion_target(const Roster& roster, Rng& rng);
PlayerId decide_vote(StrategyProfile profile, Role role, PlayerId voter, const RoundContext& ctx, Rng& rng);
/// decide_vote for every alive player, ascending by index.
VoteProfile collect_votes(StrategyProfile profile, const RoundContext& ctx, Rng& rng);
PlayerId choose_murder_target(const Roster& roster, Rng& rng);

}  // namespace backstab
