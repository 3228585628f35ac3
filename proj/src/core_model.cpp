#include "backstab/core_model.hpp"

#include <algorithm>
#include <numeric>

namespace backstab {

std::string_view to_string(Role role) {
  return role == Role::Traitor ? "Traitor" : "Faithful";
}

std::string_view to_string(Winner winner) {
  return winner == Winner::Traitors ? "Traitors" : "Faithful";
}

Roster::Roster(std::vector<Role> roles)
    : roles_(std::move(roles)), alive_(roles_.size(), true) {
  alive_count_ = static_cast<int>(roles_.size());
  alive_traitors_ = static_cast<int>(std::count(roles_.begin(), roles_.end(), Role::Traitor));
}

Roster Roster::with_traitors_last(int n, int m) {
  if (n < 1 || m < 0 || m > n) throw ModelError("roster: need 0 <= m <= n and n >= 1");
  std::vector<Role> roles(static_cast<std::size_t>(n), Role::Faithful);
  std::fill(roles.begin() + (n - m), roles.end(), Role::Traitor);
  return Roster(std::move(roles));
}

Roster Roster::random_placement(int n, int m, Rng& rng) {
  if (n < 1 || m < 0 || m > n) throw ModelError("roster: need 0 <= m <= n and n >= 1");
  std::vector<int> seats(static_cast<std::size_t>(n));
  std::iota(seats.begin(), seats.end(), 0);
  std::vector<Role> roles(static_cast<std::size_t>(n), Role::Faithful);
  // partial Fisher-Yates: the first m seats become Traitors
  for (int k = 0; k < m; ++k) {
    int j = k + uniform_index(rng, n - k);
    std::swap(seats[static_cast<std::size_t>(k)], seats[static_cast<std::size_t>(j)]);
    roles[static_cast<std::size_t>(seats[static_cast<std::size_t>(k)])] = Role::Traitor;
  }
  return Roster(std::move(roles));
}

Role Roster::role(PlayerId i) const {
  if (!contains(i)) throw ModelError("roster: unknown player " + std::to_string(i));
  return roles_[static_cast<std::size_t>(i)];
}

std::vector<PlayerId> Roster::alive_players() const {
  std::vector<PlayerId> out;
  out.reserve(static_cast<std::size_t>(alive_count_));
  for (PlayerId i = 0; i < initial_size(); ++i)
    if (alive_[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

std::vector<PlayerId> Roster::alive_with_role(Role role) const {
  std::vector<PlayerId> out;
  for (PlayerId i = 0; i < initial_size(); ++i)
    if (alive_[static_cast<std::size_t>(i)] && roles_[static_cast<std::size_t>(i)] == role)
      out.push_back(i);
  return out;
}

void Roster::remove(PlayerId i) {
  if (!is_alive(i)) throw ModelError("roster: cannot remove dead or unknown player " + std::to_string(i));
  alive_[static_cast<std::size_t>(i)] = false;
  --alive_count_;
  if (roles_[static_cast<std::size_t>(i)] == Role::Traitor) --alive_traitors_;
}

PlayerId next_left(const Roster& roster, PlayerId i) {
  if (!roster.is_alive(i)) throw ModelError("next_left: player " + std::to_string(i) + " is not alive");
  if (roster.alive_count() < 2) throw ModelError("next_left: no successor with fewer than 2 alive");
  const int n = roster.initial_size();
  for (int step = 1; step < n; ++step) {
    PlayerId j = (i + step) % n;
    if (roster.is_alive(j)) return j;
  }
  throw ModelError("next_left: no successor");  // unreachable with >= 2 alive
}

PublicState PublicState::punish(std::vector<PlayerId> queue) {
  PublicState s;
  s.enqueue(queue);
  return s;
}

PlayerId PublicState::head() const {
  if (queue_.empty()) throw ModelError("public state: comply state has no punish target");
  return queue_.front();
}

void PublicState::enqueue(const std::vector<PlayerId>& deviators) {
  std::vector<PlayerId> merged;
  merged.reserve(queue_.size() + deviators.size());
  std::vector<PlayerId> incoming(deviators);
  std::sort(incoming.begin(), incoming.end());
  std::set_union(queue_.begin(), queue_.end(), incoming.begin(), incoming.end(),
                 std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  queue_ = std::move(merged);
}

void PublicState::purge(const Roster& roster) {
  std::erase_if(queue_, [&](PlayerId j) { return !roster.is_alive(j); });
}

void validate_ballots(const VoteProfile& profile, const Roster& roster) {
  if (profile.size() != roster.initial_size())
    throw ModelError("vote profile: size does not match roster");
  for (PlayerId voter = 0; voter < profile.size(); ++voter) {
    PlayerId target = profile[voter];
    if (target == kNoVote) continue;
    if (!roster.is_alive(voter))
      throw ModelError("vote profile: dead player " + std::to_string(voter) + " voted");
    if (target == voter)
      throw ModelError("vote profile: player " + std::to_string(voter) + " voted for themself");
    if (!roster.is_alive(target))
      throw ModelError("vote profile: vote for dead or unknown player " + std::to_string(target));
  }
}

void validate_complete(const VoteProfile& profile, const Roster& roster) {
  validate_ballots(profile, roster);
  for (PlayerId voter = 0; voter < profile.size(); ++voter)
    if (roster.is_alive(voter) && profile[voter] == kNoVote)
      throw ModelError("vote profile: alive player " + std::to_string(voter) + " did not vote");
}

VoteCounts tally(const VoteProfile& profile, const Roster& roster, std::optional<VoteBloc> extra_bloc) {
  validate_ballots(profile, roster);
  VoteCounts counts(static_cast<std::size_t>(roster.initial_size()), 0);
  for (PlayerId target : profile.votes)
    if (target != kNoVote) ++counts[static_cast<std::size_t>(target)];
  if (extra_bloc) {
    if (!roster.is_alive(extra_bloc->target))
      throw ModelError("tally: bloc target " + std::to_string(extra_bloc->target) + " is not alive");
    if (extra_bloc->size < 0) throw ModelError("tally: negative bloc size");
    counts[static_cast<std::size_t>(extra_bloc->target)] += extra_bloc->size;
  }
  return counts;
}

TallyResult break_tie_and_banish(const VoteCounts& counts, Rng& rng) {
  if (counts.empty()) throw ModelError("tie-break: empty counts");
  const int top = *std::max_element(counts.begin(), counts.end());
  if (top <= 0) throw ModelError("tie-break: nobody received a vote");
  TallyResult result;
  result.counts = counts;
  for (PlayerId j = 0; j < static_cast<int>(counts.size()); ++j)
    if (counts[static_cast<std::size_t>(j)] == top) result.tied_winners.push_back(j);
  result.banished = result.tied_winners.size() == 1 ? result.tied_winners.front()
                                                    : uniform_pick(rng, result.tied_winners);
  return result;
}

PlayerId prescribed_vote(const PublicState& state, const Roster& roster, PlayerId i) {
  if (!roster.is_alive(i)) throw ModelError("prescribed_vote: player " + std::to_string(i) + " is not alive");
  if (!state.punishing()) return next_left(roster, i);
  PlayerId target = state.head();
  // the punished player cannot vote for themself
  return target == i ? next_left(roster, i) : target;
}

VoteProfile prescribed_profile(const PublicState& state, const Roster& roster) {
  VoteProfile profile(roster.initial_size());
  for (PlayerId i : roster.alive_players()) profile.cast(i, prescribed_vote(state, roster, i));
  return profile;
}

std::vector<PlayerId> detect_deviators(const VoteProfile& profile, const PublicState& state,
                                       const Roster& roster) {
  validate_complete(profile, roster);
  std::vector<PlayerId> deviators;
  for (PlayerId i : roster.alive_players())
    if (profile[i] != prescribed_vote(state, roster, i)) deviators.push_back(i);
  return deviators;
}

std::optional<Winner> win_check(const Roster& roster) {
  const int m = roster.alive_traitors();
  if (m == 0) return Winner::Faithful;
  if (2 * m >= roster.alive_count()) return Winner::Traitors;
  return std::nullopt;
}

}  // namespace backstab
