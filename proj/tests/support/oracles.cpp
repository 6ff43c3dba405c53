#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace varpen::testing {

std::vector<mpq_class> gauss_jordan(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::runtime_error("oracle: singular system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const mpq_class inv = 1 / a[col][col];
    for (auto& x : a[col]) x *= inv;
    b[col] *= inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const mpq_class f = a[row][col];
      for (std::size_t k = 0; k < n; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  return b;
}

PolicyMoments policy_moments(const Mdp& m, const std::vector<ActionId>& policy) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
  std::vector<mpq_class> b1(n), b2(n);
  for (StateId s = 0; s < n; ++s) {
    a[s][s] += 1;
    if (s == m.goal()) continue;
    const Action& act = m.action(s, policy[s]);
    b1[s] = act.weight;
    for (const auto& tr : act.successors) a[s][tr.target] -= tr.probability.raw();
  }
  const auto e = gauss_jordan(a, b1);
  for (StateId s = 0; s < n; ++s) {
    if (s == m.goal()) continue;
    const Action& act = m.action(s, policy[s]);
    const mpq_class w = act.weight;
    for (const auto& tr : act.successors) b2[s] += tr.probability.raw() * (w * w + 2 * w * e[tr.target]);
  }
  const auto q = gauss_jordan(a, b2);
  PolicyMoments out;
  for (StateId s = 0; s < n; ++s) {
    out.expectation.emplace_back(e[s]);
    out.second_moment.emplace_back(q[s]);
  }
  return out;
}

void for_each_policy(const Mdp& m, const std::vector<std::vector<ActionId>>& allowed,
                     const std::function<void(const std::vector<ActionId>&)>& fn) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<ActionId>> options(n);
  for (StateId s = 0; s < n; ++s) {
    if (s == m.goal()) {
      options[s] = {0};
    } else if (!allowed.empty()) {
      options[s] = allowed[s];
    } else {
      for (ActionId a = 0; a < m.num_actions(s); ++a) options[s].push_back(a);
    }
  }
  std::vector<std::size_t> digit(n, 0);
  std::vector<ActionId> policy(n);
  for (;;) {
    for (StateId s = 0; s < n; ++s) policy[s] = options[s][digit[s]];
    fn(policy);
    std::size_t i = 0;
    while (i < n && ++digit[i] == options[i].size()) digit[i++] = 0;
    if (i == n) return;
  }
}

namespace {

bool proper(const Mdp& m, const std::vector<ActionId>& policy) {
  std::vector<bool> good(m.num_states(), false);
  good[m.goal()] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < m.num_states(); ++s) {
      if (good[s]) continue;
      for (const auto& tr : m.action(s, policy[s]).successors) {
        if (good[tr.target]) {
          good[s] = changed = true;
          break;
        }
      }
    }
  }
  return std::all_of(good.begin(), good.end(), [](bool g) { return g; });
}

}  // namespace

std::vector<Rational> brute_force_expectation(const Mdp& m, Direction direction) {
  std::vector<std::optional<Rational>> best(m.num_states());
  for_each_policy(m, {}, [&](const std::vector<ActionId>& policy) {
    if (!proper(m, policy)) return;
    const auto pm = policy_moments(m, policy);
    for (StateId s = 0; s < m.num_states(); ++s) {
      const Rational& v = pm.expectation[s];
      if (!best[s] || (direction == Direction::Maximize ? v > *best[s] : v < *best[s])) best[s] = v;
    }
  });
  std::vector<Rational> out;
  for (const auto& b : best) out.push_back(*b);
  return out;
}

std::vector<Rational> brute_force_min_variance(const Mdp& m, Direction direction) {
  const auto opt = brute_force_expectation(m, direction);
  std::vector<std::optional<Rational>> best(m.num_states());
  for_each_policy(m, {}, [&](const std::vector<ActionId>& policy) {
    if (!proper(m, policy)) return;
    const auto pm = policy_moments(m, policy);
    if (pm.expectation != opt) return;
    for (StateId s = 0; s < m.num_states(); ++s) {
      const Rational v = pm.variance(s);
      if (!best[s] || v < *best[s]) best[s] = v;
    }
  });
  std::vector<Rational> out;
  for (const auto& b : best) out.push_back(*b);
  return out;
}

std::vector<std::set<StateId>> brute_force_mec_states(const Mdp& m) {
  std::vector<StateId> candidates;
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (s != m.goal()) candidates.push_back(s);
  }
  const std::size_t k = candidates.size();
  std::vector<std::set<StateId>> ecs;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    std::set<StateId> subset;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) subset.insert(candidates[i]);
    }
    // Edges of actions that stay inside the subset.
    std::map<StateId, std::vector<StateId>> edges;
    bool ok = true;
    for (StateId s : subset) {
      bool any = false;
      for (const auto& act : m.actions(s)) {
        const bool inside = std::all_of(act.successors.begin(), act.successors.end(),
                                        [&](const Transition& tr) { return subset.count(tr.target) > 0; });
        if (!inside) continue;
        any = true;
        for (const auto& tr : act.successors) edges[s].push_back(tr.target);
      }
      ok &= any;
    }
    if (!ok) continue;
    // Strong connectivity: everything reaches and is reached from the first state.
    auto reach = [&](StateId from, bool forward) {
      std::set<StateId> seen{from};
      std::vector<StateId> stack{from};
      while (!stack.empty()) {
        const StateId u = stack.back();
        stack.pop_back();
        for (StateId s : subset) {
          for (StateId t : edges[s]) {
            const StateId src = forward ? s : t;
            const StateId dst = forward ? t : s;
            if (src == u && seen.insert(dst).second) stack.push_back(dst);
          }
        }
      }
      return seen.size() == subset.size();
    };
    if (reach(*subset.begin(), true) && reach(*subset.begin(), false)) ecs.push_back(subset);
  }
  std::vector<std::set<StateId>> maximal;
  for (const auto& a : ecs) {
    const bool dominated = std::any_of(ecs.begin(), ecs.end(), [&](const auto& b) {
      return b.size() > a.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
    });
    if (!dominated) maximal.push_back(a);
  }
  std::sort(maximal.begin(), maximal.end());
  return maximal;
}

std::vector<std::int64_t> simple_cycle_weights(const Mdp& m, const std::vector<StateId>& states,
                                               const std::vector<std::vector<ActionId>>& retained) {
  struct Edge {
    StateId to;
    std::int64_t weight;
  };
  std::map<StateId, std::vector<Edge>> edges;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (ActionId a : retained[i]) {
      for (const auto& tr : m.action(states[i], a).successors) edges[states[i]].push_back({tr.target, m.action(states[i], a).weight});
    }
  }
  std::vector<std::int64_t> out;
  // Cycles are rooted at their smallest state to avoid rotations.
  for (StateId root : states) {
    std::vector<StateId> path{root};
    std::function<void(StateId, std::int64_t)> dfs = [&](StateId u, std::int64_t acc) {
      for (const auto& e : edges[u]) {
        if (e.to == root) {
          out.push_back(acc + e.weight);
        } else if (e.to > root && std::find(path.begin(), path.end(), e.to) == path.end()) {
          path.push_back(e.to);
          dfs(e.to, acc + e.weight);
          path.pop_back();
        }
      }
    };
    dfs(root, 0);
  }
  return out;
}

MomentPair backward_moments(const Mdp& m, const std::function<ActionId(StateId, std::uint64_t)>& choose,
                            std::uint64_t bound, const std::vector<Rational>& tail_e,
                            const std::vector<Rational>& tail_q) {
  std::map<std::pair<StateId, std::uint64_t>, std::pair<Rational, Rational>> memo;
  // Moments of the weight still to come from (s, w).
  std::function<std::pair<Rational, Rational>(StateId, std::uint64_t)> future = [&](StateId s, std::uint64_t w) {
    if (s == m.goal()) return std::pair{Rational(0), Rational(0)};
    if (w >= bound) return std::pair{tail_e.at(s), tail_q.at(s)};
    if (const auto it = memo.find({s, w}); it != memo.end()) return it->second;
    const Action& act = m.action(s, choose(s, w));
    const Rational x(act.weight);
    Rational first = 0, second = 0;
    for (const auto& tr : act.successors) {
      const auto [e, q] = future(tr.target, w + static_cast<std::uint64_t>(act.weight));
      first += tr.probability * (x + e);
      second += tr.probability * (x * x + Rational(2) * x * e + q);
    }
    memo[{s, w}] = {first, second};
    return std::pair{first, second};
  };
  const auto [e, q] = future(m.init(), 0);
  return {e, q - e * e};
}

}  // namespace varpen::testing
