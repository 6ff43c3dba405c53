#include "varpen/end_components.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>

#include "graph.hpp"
#include "varpen/linear_system.hpp"

namespace varpen {

namespace detail {

std::vector<std::size_t> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adjacency, std::size_t* component_count) {
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  std::size_t next_comp = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adjacency[f.node].size()) {
        const std::size_t next = adjacency[f.node][f.edge++];
        if (index[next] == kUnvisited) {
          index[next] = low[next] = next_index++;
          stack.push_back(next);
          on_stack[next] = true;
          call.push_back({next, 0});
        } else if (on_stack[next]) {
          low[f.node] = std::min(low[f.node], index[next]);
        }
        continue;
      }
      const std::size_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
    }
  }
  if (component_count) *component_count = next_comp;
  return comp;
}

}  // namespace detail

bool EndComponent::contains(StateId s) const {
  return std::binary_search(states.begin(), states.end(), s);
}

const std::vector<ActionId>& EndComponent::retained_at(StateId s) const {
  const auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) throw std::out_of_range("state not in end component");
  return retained[static_cast<std::size_t>(it - states.begin())];
}

std::vector<EndComponent> find_end_components(const Mdp& m) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<ActionId>> active(n);
  std::vector<bool> candidate(n, false);
  for (StateId s = 0; s < n; ++s) {
    if (s == m.goal()) continue;
    candidate[s] = true;
    for (ActionId a = 0; a < m.num_actions(s); ++a) active[s].push_back(a);
  }

  std::vector<std::size_t> comp;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::size_t>> adjacency(n);
    for (StateId s = 0; s < n; ++s) {
      if (!candidate[s]) continue;
      for (ActionId a : active[s]) {
        for (const auto& tr : m.action(s, a).successors) adjacency[s].push_back(tr.target);
      }
    }
    comp = detail::strongly_connected_components(adjacency);
    for (StateId s = 0; s < n; ++s) {
      if (!candidate[s]) continue;
      auto& acts = active[s];
      const auto stays = [&](ActionId a) {
        for (const auto& tr : m.action(s, a).successors) {
          if (!candidate[tr.target] || comp[tr.target] != comp[s]) return false;
        }
        return true;
      };
      const auto kept_end = std::stable_partition(acts.begin(), acts.end(), stays);
      if (kept_end != acts.end()) {
        acts.erase(kept_end, acts.end());
        changed = true;
      }
      if (acts.empty()) {
        candidate[s] = false;
        changed = true;
      }
    }
  }

  std::vector<EndComponent> result;
  std::vector<std::optional<std::size_t>> slot_of_comp(n);
  for (StateId s = 0; s < n; ++s) {
    if (!candidate[s]) continue;
    auto& slot = slot_of_comp[comp[s]];
    if (!slot) {
      slot = result.size();
      result.emplace_back();
    }
    result[*slot].states.push_back(s);
    result[*slot].retained.push_back(active[s]);
  }
  return result;
}

bool is_zero_component(const Mdp& m, const EndComponent& ec) {
  if (ec.states.empty()) return true;
  std::vector<std::optional<Rational>> potential(m.num_states());
  std::deque<StateId> queue{ec.states.front()};
  potential[ec.states.front()] = Rational(0);
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (ActionId a : ec.retained_at(s)) {
      const Action& act = m.action(s, a);
      for (const auto& tr : act.successors) {
        const Rational wanted = *potential[s] - Rational(act.weight);
        if (!potential[tr.target]) {
          potential[tr.target] = wanted;
          queue.push_back(tr.target);
        } else if (*potential[tr.target] != wanted) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

// Gain and bias of a fixed memoryless policy inside a closed component,
// with the bias normalized to zero stationary mean on each recurrent class.
struct GainBias {
  std::vector<Rational> gain;
  std::vector<Rational> bias;
};

GainBias evaluate_multichain(const std::vector<std::vector<Rational>>& P,
                             const std::vector<Rational>& r) {
  const std::size_t k = r.size();
  std::vector<std::vector<std::size_t>> adjacency(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!P[i][j].is_zero()) adjacency[i].push_back(j);
    }
  }
  std::size_t count = 0;
  const auto comp = detail::strongly_connected_components(adjacency, &count);
  std::vector<bool> closed(count, true);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j : adjacency[i]) {
      if (comp[j] != comp[i]) closed[comp[i]] = false;
    }
  }

  GainBias out{std::vector<Rational>(k), std::vector<Rational>(k)};
  std::vector<bool> recurrent(k, false);
  for (std::size_t c = 0; c < count; ++c) {
    if (!closed[c]) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < k; ++i) {
      if (comp[i] == c) members.push_back(i);
    }
    const std::size_t q = members.size();
    // Stationary distribution: pi (I - P) = 0 with the last equation
    // replaced by sum(pi) = 1.
    LinearSystem stat(q);
    for (std::size_t col = 0; col < q; ++col) {
      for (std::size_t row = 0; row < q; ++row) {
        stat.at(col, row) = (row == col ? Rational(1) : Rational(0)) - P[members[row]][members[col]];
      }
    }
    for (std::size_t row = 0; row < q; ++row) stat.at(q - 1, row) = 1;
    stat.rhs(q - 1) = 1;
    const auto pi = solve_linear_system(stat);
    Rational g = 0;
    for (std::size_t i = 0; i < q; ++i) g += pi[i] * r[members[i]];

    LinearSystem bias(q);
    for (std::size_t row = 0; row < q; ++row) {
      for (std::size_t col = 0; col < q; ++col) {
        bias.at(row, col) = (row == col ? Rational(1) : Rational(0)) - P[members[row]][members[col]];
      }
      bias.rhs(row) = r[members[row]] - g;
    }
    for (std::size_t col = 0; col < q; ++col) bias.at(q - 1, col) = pi[col];
    bias.rhs(q - 1) = 0;
    const auto h = solve_linear_system(bias);
    for (std::size_t i = 0; i < q; ++i) {
      out.gain[members[i]] = g;
      out.bias[members[i]] = h[i];
      recurrent[members[i]] = true;
    }
  }

  std::vector<std::size_t> transient;
  for (std::size_t i = 0; i < k; ++i) {
    if (!recurrent[i]) transient.push_back(i);
  }
  if (transient.empty()) return out;
  const std::size_t t = transient.size();
  LinearSystem gain_sys(t);
  for (std::size_t row = 0; row < t; ++row) {
    const std::size_t i = transient[row];
    for (std::size_t col = 0; col < t; ++col) {
      gain_sys.at(row, col) = (row == col ? Rational(1) : Rational(0)) - P[i][transient[col]];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (recurrent[j] && !P[i][j].is_zero()) gain_sys.rhs(row) += P[i][j] * out.gain[j];
    }
  }
  const auto g_t = solve_linear_system(gain_sys);
  for (std::size_t row = 0; row < t; ++row) out.gain[transient[row]] = g_t[row];

  LinearSystem bias_sys(t);
  for (std::size_t row = 0; row < t; ++row) {
    const std::size_t i = transient[row];
    for (std::size_t col = 0; col < t; ++col) bias_sys.at(row, col) = gain_sys.at(row, col);
    bias_sys.rhs(row) = r[i] - out.gain[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (recurrent[j] && !P[i][j].is_zero()) bias_sys.rhs(row) += P[i][j] * out.bias[j];
    }
  }
  const auto h_t = solve_linear_system(bias_sys);
  for (std::size_t row = 0; row < t; ++row) out.bias[transient[row]] = h_t[row];
  return out;
}

}  // namespace

Rational max_mean_payoff(const Mdp& m, const EndComponent& ec, int sign) {
  const std::size_t k = ec.states.size();
  if (k == 0) throw std::invalid_argument("empty end component");
  std::vector<std::size_t> local(m.num_states(), 0);
  for (std::size_t i = 0; i < k; ++i) local[ec.states[i]] = i;

  auto row_of = [&](std::size_t i, ActionId a) {
    std::vector<Rational> row(k);
    for (const auto& tr : m.action(ec.states[i], a).successors) row[local[tr.target]] += tr.probability;
    return row;
  };
  auto reward_of = [&](std::size_t i, ActionId a) {
    return Rational(sign * m.action(ec.states[i], a).weight);
  };
  auto dot = [](const std::vector<Rational>& p, const std::vector<Rational>& v) {
    Rational acc = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!p[j].is_zero()) acc += p[j] * v[j];
    }
    return acc;
  };

  std::vector<ActionId> policy(k);
  for (std::size_t i = 0; i < k; ++i) policy[i] = ec.retained[i].front();

  for (;;) {
    std::vector<std::vector<Rational>> P(k);
    std::vector<Rational> r(k);
    for (std::size_t i = 0; i < k; ++i) {
      P[i] = row_of(i, policy[i]);
      r[i] = reward_of(i, policy[i]);
    }
    const GainBias gb = evaluate_multichain(P, r);

    bool changed = false;
    for (std::size_t i = 0; i < k; ++i) {
      std::optional<ActionId> best;
      Rational best_value;
      for (ActionId a : ec.retained[i]) {
        const Rational v = dot(row_of(i, a), gb.gain);
        if (!best || v > best_value) {
          best = a;
          best_value = v;
        }
      }
      if (best_value > gb.gain[i]) {
        policy[i] = *best;
        changed = true;
      }
    }
    if (!changed) {
      for (std::size_t i = 0; i < k; ++i) {
        const Rational current = r[i] + dot(P[i], gb.bias);
        std::optional<ActionId> best;
        Rational best_value = current;
        for (ActionId a : ec.retained[i]) {
          const auto row = row_of(i, a);
          if (dot(row, gb.gain) != gb.gain[i]) continue;
          const Rational v = reward_of(i, a) + dot(row, gb.bias);
          if (v > best_value) {
            best = a;
            best_value = v;
          }
        }
        if (best) {
          policy[i] = *best;
          changed = true;
        }
      }
    }
    if (!changed) return *std::max_element(gb.gain.begin(), gb.gain.end());
  }
}

EcClass classify_ec(const Mdp& m, const EndComponent& ec) {
  if (is_zero_component(m, ec)) return {EcKind::ZeroEc, Rational(0)};
  Rational mp = max_mean_payoff(m, ec, 1);
  const EcKind kind = mp.sign() < 0 ? EcKind::NegativeMeanPayoff : EcKind::NonNegativeMeanPayoff;
  return {kind, std::move(mp)};
}

}  // namespace varpen
