#include "varpen/expectation.hpp"

#include <stdexcept>

#include "ssp.hpp"
#include "varpen/end_components.hpp"
#include "varpen/errors.hpp"

namespace varpen {

namespace {

std::string describe(const Mdp& m, const EndComponent& ec) {
  std::string out = "{";
  for (std::size_t i = 0; i < ec.states.size(); ++i) {
    if (i > 0) out += ", ";
    out += m.state_name(ec.states[i]);
  }
  return out + "}";
}

}  // namespace

void check_expectation_finite(const Mdp& m, Direction direction) {
  const int sign = direction == Direction::Maximize ? 1 : -1;
  for (const auto& ec : find_end_components(m)) {
    if (is_zero_component(m, ec)) {
      throw Error(ErrorKind::ZeroEcPresent, "0-end component " + describe(m, ec));
    }
    const Rational mp = max_mean_payoff(m, ec, sign);
    // A component whose best mean payoff is exactly zero without being a
    // 0-EC still contains one: the recurrent class of the optimal policy.
    if (mp.is_zero()) {
      throw Error(ErrorKind::ZeroEcPresent, "end component " + describe(m, ec) + " contains a 0-end component");
    }
    if (mp.sign() > 0) {
      throw Error(ErrorKind::InfiniteExpectation,
                  "expectation is unbounded on end component " + describe(m, ec));
    }
  }
}

ExpectationSolution solve_expectation(const Mdp& m, Direction direction) {
  check_expectation_finite(m, direction);
  const int sign = direction == Direction::Maximize ? 1 : -1;
  const auto sol = detail::solve_ssp(m, detail::weight_problem(m, sign));

  ExpectationSolution out;
  out.direction = direction;
  out.values = sol.values;
  if (sign < 0) {
    for (auto& v : out.values) v = -v;
  }
  out.optimal_actions = sol.optimal;
  out.witness = MemorylessScheduler::deterministic(m, sol.policy);
  return out;
}

Mdp prune_to_optimal(const Mdp& m, const ExpectationSolution& sol) {
  Mdp pruned = m.restrict_actions(sol.optimal_actions);
  if (!find_end_components(pruned).empty()) {
    throw std::logic_error("pruned model retains an end component");
  }
  return pruned;
}

}  // namespace varpen
