#include "varpen/mdp.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "varpen/errors.hpp"

namespace varpen {

namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorKind::ValidationError, message);
}

}  // namespace

std::optional<StateId> Mdp::find_state(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> Mdp::find_action(StateId s, std::string_view label) const {
  const auto& list = actions_.at(s);
  for (ActionId a = 0; a < list.size(); ++a) {
    if (list[a].label == label) return a;
  }
  return std::nullopt;
}

Mdp Mdp::restrict_actions(const std::vector<std::vector<ActionId>>& keep) const {
  if (keep.size() != num_states()) {
    throw Error(ErrorKind::InvalidArgument, "restriction must list every state");
  }
  Mdp result;
  result.names_ = names_;
  result.index_ = index_;
  result.init_ = init_;
  result.goal_ = goal_;
  result.actions_.resize(num_states());
  for (StateId s = 0; s < num_states(); ++s) {
    for (ActionId a : keep[s]) result.actions_[s].push_back(actions_[s].at(a));
  }
  result.finalize(Reachability::Skip);
  return result;
}

void Mdp::finalize(Reachability reachability) {
  const std::string& goal_name = names_.at(goal_);
  if (!actions_[goal_].empty()) invalid("goal state '" + goal_name + "' must not enable actions");

  max_weight_ = 0;
  has_negative_ = false;
  std::optional<Rational> min_p;
  for (StateId s = 0; s < num_states(); ++s) {
    if (s != goal_ && actions_[s].empty()) {
      invalid("state '" + names_[s] + "' is a trap state besides goal (unique trap required)");
    }
    for (const auto& act : actions_[s]) {
      const std::string where = "state '" + names_[s] + "' action '" + act.label + "'";
      if (act.successors.empty()) invalid(where + ": no successors");
      Rational sum = 0;
      std::set<StateId> seen;
      for (const auto& tr : act.successors) {
        if (tr.target >= num_states()) invalid(where + ": unknown successor");
        if (!seen.insert(tr.target).second) {
          invalid(where + ": successor '" + names_[tr.target] + "' listed twice");
        }
        if (tr.probability.sign() <= 0 || tr.probability > Rational(1)) {
          invalid(where + ": probability " + tr.probability.to_string() + " outside (0,1]");
        }
        sum += tr.probability;
        if (!min_p || tr.probability < *min_p) min_p = tr.probability;
      }
      if (sum != Rational(1)) {
        invalid(where + ": probabilities sum to " + sum.to_string() + " (stochasticity)");
      }
      max_weight_ = std::max(max_weight_, act.weight);
      if (act.weight < 0) has_negative_ = true;
    }
  }
  min_probability_ = min_p.value_or(Rational(1));

  const auto reach_goal = can_reach_goal(*this);
  for (StateId s = 0; s < num_states(); ++s) {
    if (!reach_goal[s]) invalid("goal is not reachable from state '" + names_[s] + "'");
  }

  if (reachability == Reachability::Required) {
    std::vector<bool> seen(num_states(), false);
    std::deque<StateId> queue{init_};
    seen[init_] = true;
    while (!queue.empty()) {
      const StateId s = queue.front();
      queue.pop_front();
      for (const auto& act : actions_[s]) {
        for (const auto& tr : act.successors) {
          if (!seen[tr.target]) {
            seen[tr.target] = true;
            queue.push_back(tr.target);
          }
        }
      }
    }
    for (StateId s = 0; s < num_states(); ++s) {
      if (!seen[s]) invalid("state '" + names_[s] + "' is not reachable from init");
    }
  }
}

std::vector<bool> can_reach_goal(const Mdp& m) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<StateId>> preds(n);
  for (StateId s = 0; s < n; ++s) {
    for (const auto& act : m.actions(s)) {
      for (const auto& tr : act.successors) preds[tr.target].push_back(s);
    }
  }
  std::vector<bool> seen(n, false);
  std::deque<StateId> queue{m.goal()};
  seen[m.goal()] = true;
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : preds[t]) {
      if (!seen[s]) {
        seen[s] = true;
        queue.push_back(s);
      }
    }
  }
  return seen;
}

StateId Mdp::Builder::add_state(std::string name) {
  if (name.empty()) invalid("empty state name");
  if (index_.contains(name)) invalid("duplicate state '" + name + "'");
  const StateId id = names_.size();
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  actions_.emplace_back();
  return id;
}

StateId Mdp::Builder::state(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) invalid("unknown state '" + std::string(name) + "'");
  return it->second;
}

void Mdp::Builder::set_init(StateId s) {
  if (s >= names_.size()) invalid("init state out of range");
  init_ = s;
}

void Mdp::Builder::set_goal(StateId s) {
  if (s >= names_.size()) invalid("goal state out of range");
  goal_ = s;
}

ActionId Mdp::Builder::add_action(StateId s, Action action) {
  if (s >= names_.size()) invalid("action on unknown state");
  auto& list = actions_[s];
  for (const auto& existing : list) {
    if (existing.label == action.label) {
      invalid("duplicate action '" + action.label + "' at state '" + names_[s] + "'");
    }
  }
  list.push_back(std::move(action));
  return list.size() - 1;
}

Mdp Mdp::Builder::build(Reachability reachability) && {
  if (names_.empty()) invalid("model has no states");
  if (!init_) invalid("no init state declared");
  if (!goal_) invalid("no goal state declared");
  Mdp m;
  m.names_ = std::move(names_);
  m.index_ = std::move(index_);
  m.init_ = *init_;
  m.goal_ = *goal_;
  m.actions_ = std::move(actions_);
  m.finalize(reachability);
  return m;
}

}  // namespace varpen
