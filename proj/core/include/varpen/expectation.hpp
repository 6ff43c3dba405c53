#pragma once

#include <vector>

#include "varpen/mdp.hpp"
#include "varpen/scheduler.hpp"

namespace varpen {

enum class Direction { Maximize, Minimize };

struct ExpectationSolution {
  Direction direction = Direction::Maximize;
  std::vector<Rational> values;                    // indexed by state, 0 at goal
  std::vector<std::vector<ActionId>> optimal_actions;  // ascending, empty at goal
  MemorylessScheduler witness;                     // least optimal action per state
};

/// Checks the end components of `m` for the chosen direction: 0-ECs raise
/// ZeroEcPresent, components on which the objective is unbounded raise
/// InfiniteExpectation.
void check_expectation_finite(const Mdp& m, Direction direction);

/// Optimal expected accumulated weight from every state, by exact policy
/// iteration.
ExpectationSolution solve_expectation(const Mdp& m, Direction direction);

/// Sub-model keeping only the optimal actions. The result is asserted to be
/// end-component free (std::logic_error otherwise).
Mdp prune_to_optimal(const Mdp& m, const ExpectationSolution& sol);

}  // namespace varpen
