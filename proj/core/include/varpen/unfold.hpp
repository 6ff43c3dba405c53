#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "varpen/mdp.hpp"

namespace varpen {

enum class PairKind {
  Decision,  // below the bound, several enabled actions
  Forced,    // below the bound, one enabled action
  Goal,      // (goal, w) for any w
  Boundary,  // non-goal state at weight >= bound
  Exit,      // below the bound, but no decision is reachable from here (collapsed)
};

struct UnfoldedAction {
  ActionId action = 0;
  std::vector<std::pair<std::size_t, Rational>> successors;  // (pair index, probability)
};

struct UnfoldedPair {
  StateId state = 0;
  std::uint64_t weight = 0;
  PairKind kind = PairKind::Forced;
  std::vector<UnfoldedAction> actions;  // empty for trap kinds

  bool is_trap() const noexcept {
    return kind == PairKind::Goal || kind == PairKind::Boundary || kind == PairKind::Exit;
  }
};

struct UnfoldOptions {
  /// Turn pairs whose state cannot reach a multi-action state into Exit
  /// traps instead of exploring them.
  bool collapse_forced = false;
  std::size_t max_pairs = 2'000'000;
};

/// Product of the model with the accumulated weight, cut at `bound`: pairs
/// reachable from (init, 0), sorted by (weight, state).
struct UnfoldedMdp {
  std::uint64_t bound = 0;
  std::vector<UnfoldedPair> pairs;
  std::size_t init = 0;

  std::optional<std::size_t> find(StateId s, std::uint64_t w) const;
  std::vector<std::size_t> decision_pairs() const;
};

/// Requires an end-component free model with non-negative weights and
/// bound >= 1. Throws BoundTooLarge when more than max_pairs pairs are
/// reachable.
UnfoldedMdp unfold(const Mdp& m, std::uint64_t bound, const UnfoldOptions& options = {});

/// States from which some state with at least two actions is reachable
/// (including the state itself).
std::vector<bool> can_reach_decision(const Mdp& m);

}  // namespace varpen
