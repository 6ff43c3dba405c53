#pragma once

#include <vector>

#include "varpen/mdp.hpp"

namespace varpen::detail {

/// Total-reward maximization to goal over a restricted action set.
/// `reward[s][i]` belongs to action `allowed[s][i]`.
struct SspProblem {
  std::vector<std::vector<ActionId>> allowed;
  std::vector<std::vector<Rational>> reward;
};

struct SspSolution {
  std::vector<Rational> values;
  std::vector<std::vector<ActionId>> optimal;  // subset of allowed, in allowed order
  std::vector<ActionId> policy;                // first optimal action per state
};

/// Exact policy iteration. Requires that every improper policy is strictly
/// worse than some proper one, which holds when the model has no end
/// components under `allowed` or all of them have negative mean reward.
SspSolution solve_ssp(const Mdp& m, const SspProblem& problem);

/// Values of a fixed memoryless deterministic policy.
std::vector<Rational> evaluate_policy(const Mdp& m, const std::vector<ActionId>& policy,
                                      const std::vector<Rational>& reward);

/// All actions, rewards equal to the action weights.
SspProblem weight_problem(const Mdp& m, int sign);

}  // namespace varpen::detail
