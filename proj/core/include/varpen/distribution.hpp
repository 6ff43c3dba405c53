#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "varpen/mdp.hpp"
#include "varpen/scheduler.hpp"

namespace varpen {

/// Law of the accumulated weight, cut at `bound`: exact mass of reaching goal
/// with weight w < bound, plus the mass of first crossing the bound at (s, w).
/// Goal pairs at or above the bound are boundary pairs too.
struct TerminalDistribution {
  std::uint64_t bound = 0;
  StateId goal = 0;
  std::map<std::uint64_t, Rational> goal_mass;
  std::map<StateWeight, Rational> boundary_mass;

  Rational total_mass() const;
};

struct StateWeightAction {
  StateId state = 0;
  std::uint64_t weight = 0;
  ActionId action = 0;

  friend bool operator==(const StateWeightAction&, const StateWeightAction&) = default;
  friend auto operator<=>(const StateWeightAction&, const StateWeightAction&) = default;
};

/// Expected visit counts below `bound`; only non-zero entries are stored.
/// Goal visits are included, so visits(goal, w) is the goal mass at w.
struct FrequencyTable {
  std::uint64_t bound = 0;
  std::map<StateWeight, Rational> visits;
  std::map<StateWeightAction, Rational> action_visits;

  Rational visits_at(StateId s, std::uint64_t w) const;
  Rational action_visits_at(StateId s, std::uint64_t w, ActionId a) const;

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;
};

struct MomentPair {
  Rational expectation;
  Rational variance;

  friend bool operator==(const MomentPair&, const MomentPair&) = default;
};

/// Both operations require an end-component free model with non-negative
/// weights (EndComponentPresent, NegativeWeight) and a bound of at least 1
/// (InvalidArgument). The two-argument forms use the scheduler's own bound.
TerminalDistribution terminal_distribution(const Mdp& m, const WeightBasedScheduler& sched,
                                           std::uint64_t bound);
TerminalDistribution terminal_distribution(const Mdp& m, const WeightBasedScheduler& sched);
FrequencyTable frequencies(const Mdp& m, const WeightBasedScheduler& sched, std::uint64_t bound);
FrequencyTable frequencies(const Mdp& m, const WeightBasedScheduler& sched);

/// Expectation and second moment of the accumulated weight from every state
/// under a memoryless scheduler (first: e, second: q).
struct TailMoments {
  std::vector<Rational> expectation;
  std::vector<Rational> second_moment;
};
TailMoments tail_moments(const Mdp& m, const MemorylessScheduler& sched);

/// Moments of the full accumulated weight: goal mass contributes w, a
/// boundary pair (s, w) contributes w + X_s where X_s has mean tail_e[s] and
/// second moment tail_q[s]. Throws MissingTailValue when a boundary state has
/// no tail value.
MomentPair moments_from_distribution(const TerminalDistribution& d, const std::vector<Rational>& tail_e,
                                     const std::vector<Rational>& tail_q);

/// Moments of an arbitrary weight-based scheduler, evaluated at the smallest
/// bound past its table (its tail moments close the computation).
MomentPair scheduler_moments(const Mdp& m, const WeightBasedScheduler& sched);

/// Smallest bound at which `sched` is already its tail: one past the largest
/// table weight, capped by sched.bound, and at least 1.
std::uint64_t effective_bound(const WeightBasedScheduler& sched);

/// Randomized scheduler choosing each action with its visit ratio; pairs
/// without visits keep the tail. Throws ZeroVisitDivision when an action has
/// visits at a pair that has none.
WeightBasedScheduler to_weight_based(const FrequencyTable& freq, const MemorylessScheduler& tail);

/// Same behaviour as `sched`, with the table listing exactly the pairs below
/// the bound that are visited with positive probability.
WeightBasedScheduler canonicalize(const Mdp& m, const WeightBasedScheduler& sched);

/// Entrywise p·a + (1−p)·b.
FrequencyTable mix_frequencies(const FrequencyTable& a, const FrequencyTable& b, const Rational& p);

/// Scheduler whose frequencies are the p-mixture of those of s1 and s2.
/// Requires 0 < p < 1 and a shared bound and tail (InvalidArgument).
WeightBasedScheduler convex_combination(const Mdp& m, const WeightBasedScheduler& s1,
                                        const WeightBasedScheduler& s2, const Rational& p);

/// Moments of the scheduler that follows the first pair with probability p.
/// Requires 0 <= p <= 1 (InvalidArgument).
MomentPair mixture_moments(const MomentPair& m1, const MomentPair& m2, const Rational& p);

}  // namespace varpen
