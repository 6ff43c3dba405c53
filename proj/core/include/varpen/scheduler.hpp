#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "varpen/mdp.hpp"

namespace varpen {

struct ActionWeight {
  ActionId action = 0;
  Rational probability;

  friend bool operator==(const ActionWeight&, const ActionWeight&) = default;
};

/// Distribution over the enabled actions of one state, in ascending action
/// order with strictly positive probabilities. Empty only at goal.
using ActionDistribution = std::vector<ActionWeight>;

ActionDistribution point_mass(ActionId a);
bool is_point_mass(const ActionDistribution& d);

/// Memoryless scheduler; `choice[goal]` is empty.
struct MemorylessScheduler {
  std::vector<ActionDistribution> choice;

  static MemorylessScheduler deterministic(const Mdp& m, const std::vector<ActionId>& actions);

  bool is_deterministic() const;
  /// Action of a deterministic choice at `s`.
  ActionId action_at(StateId s) const { return choice.at(s).front().action; }

  friend bool operator==(const MemorylessScheduler&, const MemorylessScheduler&) = default;
};

struct StateWeight {
  StateId state = 0;
  std::uint64_t weight = 0;

  friend bool operator==(const StateWeight&, const StateWeight&) = default;
  friend auto operator<=>(const StateWeight&, const StateWeight&) = default;
};

/// Choices depend on (state, accumulated weight) below `bound`; from weight
/// `bound` onwards, and at unlisted pairs, the memoryless tail decides.
struct WeightBasedScheduler {
  std::uint64_t bound = 0;
  std::map<StateWeight, ActionDistribution> table;
  MemorylessScheduler tail;

  const ActionDistribution& at(StateId s, std::uint64_t w) const;
  bool is_deterministic() const;

  friend bool operator==(const WeightBasedScheduler&, const WeightBasedScheduler&) = default;
};

/// Checks every distribution against the model: enabled actions, positive
/// probabilities summing to one, tail defined at every non-goal state.
/// Throws ValidationError.
void validate_scheduler(const Mdp& m, const WeightBasedScheduler& sched);

/// Text form:
///
///     bound 8
///     at c 0 choose alpha
///     at c 5 choose beta 1/2 alpha 1/2
///     tail c choose beta
///
/// A single action without a probability means a point mass. A state with
/// one enabled action may omit its tail line.
WeightBasedScheduler parse_scheduler(std::string_view text, const Mdp& m);
std::string serialize_scheduler(const WeightBasedScheduler& sched, const Mdp& m);

/// Memoryless scheduler as a bound-0 weight-based one.
WeightBasedScheduler as_weight_based(const MemorylessScheduler& tail);

}  // namespace varpen
