#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varpen/rational.hpp"

namespace varpen {

using StateId = std::size_t;
using ActionId = std::size_t;  // index into the owning state's action list

struct Transition {
  StateId target = 0;
  Rational probability;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Action {
  std::string label;
  std::int64_t weight = 0;
  std::vector<Transition> successors;

  friend bool operator==(const Action&, const Action&) = default;
};

enum class Reachability {
  Required,  // every state must be reachable from init
  Skip,      // sub-models produced by pruning may strand states
};

/// Finite MDP with exact transition probabilities, integer action weights,
/// and a single trap state `goal`. Immutable once built; all checks happen in
/// Builder::build.
class Mdp {
 public:
  class Builder;

  std::size_t num_states() const noexcept { return names_.size(); }
  const std::string& state_name(StateId s) const { return names_.at(s); }
  std::optional<StateId> find_state(std::string_view name) const;

  StateId init() const noexcept { return init_; }
  StateId goal() const noexcept { return goal_; }

  const std::vector<Action>& actions(StateId s) const { return actions_.at(s); }
  const Action& action(StateId s, ActionId a) const { return actions_.at(s).at(a); }
  std::size_t num_actions(StateId s) const { return actions_.at(s).size(); }
  std::optional<ActionId> find_action(StateId s, std::string_view label) const;

  /// Largest action weight, clamped below at 0.
  std::int64_t max_weight() const noexcept { return max_weight_; }
  bool has_negative_weights() const noexcept { return has_negative_; }
  /// Smallest positive transition probability.
  const Rational& min_probability() const noexcept { return min_probability_; }

  /// Sub-model keeping, for every state, exactly the listed actions (in the
  /// listed order). Reachability from init is not re-checked.
  Mdp restrict_actions(const std::vector<std::vector<ActionId>>& keep) const;

  friend bool operator==(const Mdp& a, const Mdp& b) {
    return a.names_ == b.names_ && a.init_ == b.init_ && a.goal_ == b.goal_ &&
           a.actions_ == b.actions_;
  }

 private:
  Mdp() = default;
  void finalize(Reachability reachability);

  std::vector<std::string> names_;
  std::map<std::string, StateId, std::less<>> index_;
  StateId init_ = 0;
  StateId goal_ = 0;
  std::vector<std::vector<Action>> actions_;
  std::int64_t max_weight_ = 0;
  bool has_negative_ = false;
  Rational min_probability_ = 1;
};

class Mdp::Builder {
 public:
  /// Throws ValidationError on a duplicate name.
  StateId add_state(std::string name);
  StateId state(std::string_view name) const;  // ValidationError when unknown
  void set_init(StateId s);
  void set_goal(StateId s);
  /// Throws ValidationError when the label is already used at `s`.
  ActionId add_action(StateId s, Action action);

  /// Validates stochasticity, the unique-trap rule, goal reachability, and
  /// (unless skipped) reachability from init.
  Mdp build(Reachability reachability = Reachability::Required) &&;

 private:
  std::vector<std::string> names_;
  std::map<std::string, StateId, std::less<>> index_;
  std::optional<StateId> init_;
  std::optional<StateId> goal_;
  std::vector<std::vector<Action>> actions_;
};

/// States from which `goal` is reachable in the underlying graph.
std::vector<bool> can_reach_goal(const Mdp& m);

}  // namespace varpen
