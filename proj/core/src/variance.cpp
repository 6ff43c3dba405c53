#include "varpen/variance.hpp"

#include <stdexcept>

#include "ssp.hpp"

namespace varpen {

VarianceMinSolution min_variance_among_optimal(const Mdp& m, Direction direction) {
  const ExpectationSolution sol = solve_expectation(m, direction);
  const Mdp pruned = prune_to_optimal(m, sol);
  const auto& mu = sol.values;

  // Squared deviation weights depend on the successor, so they are folded
  // into the one-step reward directly.
  detail::SspProblem problem;
  problem.allowed.resize(pruned.num_states());
  problem.reward.resize(pruned.num_states());
  for (StateId s = 0; s < pruned.num_states(); ++s) {
    for (ActionId a = 0; a < pruned.num_actions(s); ++a) {
      const Action& act = pruned.action(s, a);
      Rational cost = 0;
      for (const auto& tr : act.successors) {
        cost += tr.probability * (Rational(act.weight) + mu[tr.target] - mu[s]).square();
      }
      problem.allowed[s].push_back(a);
      problem.reward[s].push_back(-cost);
    }
  }
  const auto ssp = detail::solve_ssp(pruned, problem);

  VarianceMinSolution out;
  out.direction = direction;
  out.expectation = mu;
  out.variance.resize(m.num_states());
  out.second_moment.resize(m.num_states());
  std::vector<ActionId> policy(m.num_states(), 0);
  for (StateId s = 0; s < m.num_states(); ++s) {
    out.variance[s] = -ssp.values[s];
    out.second_moment[s] = out.variance[s] + mu[s].square();
    if (s != m.goal()) policy[s] = sol.optimal_actions[s][ssp.policy[s]];
  }
  out.scheduler = MemorylessScheduler::deterministic(m, policy);
  return out;
}

}  // namespace varpen
