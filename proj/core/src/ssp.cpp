#include "ssp.hpp"

#include <deque>
#include <limits>

#include "varpen/errors.hpp"
#include "varpen/linear_system.hpp"

namespace varpen::detail {

namespace {

constexpr std::size_t kNoDistance = std::numeric_limits<std::size_t>::max();

Rational expected_next(const Mdp& m, StateId s, ActionId a, const std::vector<Rational>& values) {
  Rational acc = 0;
  for (const auto& tr : m.action(s, a).successors) acc += tr.probability * values[tr.target];
  return acc;
}

// Lexicographically first action that moves strictly closer to goal.
std::vector<std::size_t> initial_policy(const Mdp& m, const SspProblem& p) {
  const std::size_t n = m.num_states();
  std::vector<std::size_t> dist(n, kNoDistance), choice(n, 0);
  dist[m.goal()] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (s == m.goal()) continue;
      for (std::size_t i = 0; i < p.allowed[s].size(); ++i) {
        std::size_t best = kNoDistance;
        for (const auto& tr : m.action(s, p.allowed[s][i]).successors) best = std::min(best, dist[tr.target]);
        if (best != kNoDistance && best + 1 < dist[s]) {
          dist[s] = best + 1;
          choice[s] = i;
          changed = true;
        }
      }
    }
  }
  // Prefer the lexicographically first action among those achieving dist[s].
  for (StateId s = 0; s < n; ++s) {
    if (s == m.goal()) continue;
    if (dist[s] == kNoDistance) throw Error(ErrorKind::ValidationError, "goal unreachable from " + m.state_name(s));
    for (std::size_t i = 0; i < p.allowed[s].size(); ++i) {
      bool closer = false;
      for (const auto& tr : m.action(s, p.allowed[s][i]).successors) closer |= dist[tr.target] + 1 == dist[s];
      if (closer) {
        choice[s] = i;
        break;
      }
    }
  }
  return choice;
}

std::vector<bool> reaches_goal(const Mdp& m, const std::vector<ActionId>& policy) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<StateId>> reverse(n);
  for (StateId s = 0; s < n; ++s) {
    if (s == m.goal()) continue;
    for (const auto& tr : m.action(s, policy[s]).successors) reverse[tr.target].push_back(s);
  }
  std::vector<bool> seen(n, false);
  std::deque<StateId> queue{m.goal()};
  seen[m.goal()] = true;
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : reverse[t]) {
      if (!seen[s]) {
        seen[s] = true;
        queue.push_back(s);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<Rational> evaluate_policy(const Mdp& m, const std::vector<ActionId>& policy,
                                      const std::vector<Rational>& reward) {
  const std::size_t n = m.num_states();
  LinearSystem sys(n);
  for (StateId s = 0; s < n; ++s) {
    sys.at(s, s) = 1;
    if (s == m.goal()) continue;
    for (const auto& tr : m.action(s, policy[s]).successors) sys.at(s, tr.target) -= tr.probability;
    sys.rhs(s) = reward[s];
  }
  return solve_linear_system(sys);
}

SspSolution solve_ssp(const Mdp& m, const SspProblem& p) {
  const std::size_t n = m.num_states();
  std::vector<std::size_t> index = initial_policy(m, p);

  auto actions_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<ActionId> policy(n, 0);
    for (StateId s = 0; s < n; ++s) {
      if (s != m.goal()) policy[s] = p.allowed[s][idx[s]];
    }
    return policy;
  };
  auto rewards_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<Rational> r(n);
    for (StateId s = 0; s < n; ++s) {
      if (s != m.goal()) r[s] = p.reward[s][idx[s]];
    }
    return r;
  };

  std::vector<Rational> values = evaluate_policy(m, actions_of(index), rewards_of(index));
  for (;;) {
    std::vector<std::size_t> next = index;
    for (StateId s = 0; s < n; ++s) {
      if (s == m.goal()) continue;
      Rational best = values[s];
      for (std::size_t i = 0; i < p.allowed[s].size(); ++i) {
        const Rational q = p.reward[s][i] + expected_next(m, s, p.allowed[s][i], values);
        if (q > best) {
          best = q;
          next[s] = i;
        }
      }
    }
    // Guard: undo switches that would strand a state away from goal.
    for (;;) {
      const auto ok = reaches_goal(m, actions_of(next));
      bool reverted = false;
      for (StateId s = 0; s < n; ++s) {
        if (!ok[s] && next[s] != index[s]) {
          next[s] = index[s];
          reverted = true;
        }
      }
      if (!reverted) break;
    }
    if (next == index) break;
    index = std::move(next);
    values = evaluate_policy(m, actions_of(index), rewards_of(index));
  }

  SspSolution out;
  out.values = std::move(values);
  out.optimal.resize(n);
  out.policy.assign(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (s == m.goal()) continue;
    for (std::size_t i = 0; i < p.allowed[s].size(); ++i) {
      const ActionId a = p.allowed[s][i];
      if (p.reward[s][i] + expected_next(m, s, a, out.values) == out.values[s]) out.optimal[s].push_back(a);
    }
    out.policy[s] = out.optimal[s].front();
  }
  return out;
}

SspProblem weight_problem(const Mdp& m, int sign) {
  SspProblem p;
  p.allowed.resize(m.num_states());
  p.reward.resize(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (ActionId a = 0; a < m.num_actions(s); ++a) {
      p.allowed[s].push_back(a);
      p.reward[s].push_back(Rational(sign * m.action(s, a).weight));
    }
  }
  return p;
}

}  // namespace varpen::detail
