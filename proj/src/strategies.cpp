#include "backstab/strategies.hpp"

namespace backstab {

namespace {

PlayerId uniform_other(const Roster& roster, PlayerId voter, Rng& rng) {
  const int others = roster.alive_count() - 1;
  if (others < 1) throw ModelError("no one else alive to vote for");
  int k = uniform_index(rng, others);
  for (PlayerId j = 0; j < roster.initial_size(); ++j) {
    if (j == voter || !roster.is_alive(j)) continue;
    if (k-- == 0) return j;
  }
  throw ModelError("uniform_other: alive count out of sync");
}

PlayerId bloc_vote(const RoundContext& ctx) {
  if (!ctx.collusion_target) throw ModelError("decide_vote: colluding Traitor has no target");
  return *ctx.collusion_target;
}

}  // namespace

std::string_view to_string(StrategyProfile profile) {
  switch (profile) {
    case StrategyProfile::RV: return "RV";
    case StrategyProfile::RVC: return "RVC";
    case StrategyProfile::VL_COMP: return "VL_COMP";
    case StrategyProfile::VL_C: return "VL_C";
    case StrategyProfile::VL_OPT: return "VL_OPT";
  }
  return "?";
}

std::optional<StrategyProfile> parse_profile(std::string_view text) {
  for (StrategyProfile p : kAllProfiles)
    if (to_string(p) == text) return p;
  return std::nullopt;
}

bool uses_vote_left(StrategyProfile profile) {
  return profile == StrategyProfile::VL_COMP || profile == StrategyProfile::VL_C ||
         profile == StrategyProfile::VL_OPT;
}

bool in_deviation_regime(const Roster& roster) {
  return roster.alive_count() <= 2 * roster.alive_traitors() + 2;
}

bool traitors_collude(StrategyProfile profile, const Roster& roster, const PublicState& state,
                      StrategyOptions options) {
  switch (profile) {
    case StrategyProfile::RV:
    case StrategyProfile::VL_COMP:
      return false;
    case StrategyProfile::RVC:
      return true;
    case StrategyProfile::VL_C:
      return !(options.punish_compliance && state.punishing());
    case StrategyProfile::VL_OPT:
      return in_deviation_regime(roster);
  }
  return false;
}

PlayerId pick_collusion_target(const Roster& roster, Rng& rng) {
  const auto faithful = roster.alive_with_role(Role::Faithful);
  if (faithful.empty()) throw ModelError("pick_collusion_target: no alive Faithful");
  return uniform_pick(rng, faithful);
}

PlayerId decide_vote(StrategyProfile profile, Role role, PlayerId voter, const RoundContext& ctx, Rng& rng) {
  if (!ctx.roster.is_alive(voter)) throw ModelError("decide_vote: voter " + std::to_string(voter) + " is not alive");
  switch (profile) {
    case StrategyProfile::RV:
      return uniform_other(ctx.roster, voter, rng);
    case StrategyProfile::RVC:
      return role == Role::Traitor ? bloc_vote(ctx) : uniform_other(ctx.roster, voter, rng);
    case StrategyProfile::VL_COMP:
      return prescribed_vote(ctx.public_state, ctx.roster, voter);
    case StrategyProfile::VL_C:
    case StrategyProfile::VL_OPT:
      if (role == Role::Traitor && traitors_collude(profile, ctx.roster, ctx.public_state, ctx.options))
        return bloc_vote(ctx);
      return prescribed_vote(ctx.public_state, ctx.roster, voter);
  }
  throw ModelError("decide_vote: unknown profile");
}

VoteProfile collect_votes(StrategyProfile profile, const RoundContext& ctx, Rng& rng) {
  VoteProfile votes(ctx.roster.initial_size());
  for (PlayerId voter : ctx.roster.alive_players())
    votes.cast(voter, decide_vote(profile, ctx.roster.role(voter), voter, ctx, rng));
  return votes;
}

PlayerId choose_murder_target(const Roster& roster, Rng& rng) {
  if (roster.alive_traitors() < 1) throw ModelError("choose_murder_target: no alive Traitor");
  const auto faithful = roster.alive_with_role(Role::Faithful);
  if (faithful.empty()) throw ModelError("choose_murder_target: no alive Faithful");
  return uniform_pick(rng, faithful);
}

}  // namespace backstab
