#include "varpen/unfold.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "checks.hpp"

namespace varpen {

std::optional<std::size_t> UnfoldedMdp::find(StateId s, std::uint64_t w) const {
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{w, s}, [](const UnfoldedPair& p, const auto& key) {
    return std::pair{p.weight, p.state} < key;
  });
  if (it == pairs.end() || it->weight != w || it->state != s) return std::nullopt;
  return static_cast<std::size_t>(it - pairs.begin());
}

std::vector<std::size_t> UnfoldedMdp::decision_pairs() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].kind == PairKind::Decision) out.push_back(i);
  }
  return out;
}

std::vector<bool> can_reach_decision(const Mdp& m) {
  const std::size_t n = m.num_states();
  std::vector<std::vector<StateId>> reverse(n);
  std::vector<bool> reach(n, false);
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s) {
    for (const auto& act : m.actions(s)) {
      for (const auto& tr : act.successors) reverse[tr.target].push_back(s);
    }
    if (m.num_actions(s) >= 2) {
      reach[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : reverse[t]) {
      if (!reach[s]) {
        reach[s] = true;
        queue.push_back(s);
      }
    }
  }
  return reach;
}

UnfoldedMdp unfold(const Mdp& m, std::uint64_t bound, const UnfoldOptions& options) {
  if (bound < 1) throw Error(ErrorKind::InvalidArgument, "bound must be at least 1");
  detail::require_ec_free_nonnegative(m);
  const auto live = can_reach_decision(m);

  auto kind_of = [&](StateId s, std::uint64_t w) {
    if (s == m.goal()) return PairKind::Goal;
    if (w >= bound) return PairKind::Boundary;
    if (options.collapse_forced && !live[s]) return PairKind::Exit;
    return m.num_actions(s) >= 2 ? PairKind::Decision : PairKind::Forced;
  };

  // Discover reachable pairs, then renumber them in (weight, state) order.
  std::map<std::pair<std::uint64_t, StateId>, std::size_t> index;
  std::vector<std::pair<std::uint64_t, StateId>> found;
  std::deque<std::size_t> queue;
  auto visit = [&](StateId s, std::uint64_t w) {
    const auto [it, fresh] = index.emplace(std::pair{w, s}, found.size());
    if (fresh) {
      if (found.size() >= options.max_pairs) {
        throw Error(ErrorKind::BoundTooLarge, "unfolding exceeds " + std::to_string(options.max_pairs) +
                                                  " pairs; choose a smaller bound");
      }
      found.emplace_back(w, s);
      queue.push_back(it->second);
    }
  };
  visit(m.init(), 0);
  while (!queue.empty()) {
    const auto [w, s] = found[queue.front()];
    queue.pop_front();
    const PairKind kind = kind_of(s, w);
    if (kind != PairKind::Decision && kind != PairKind::Forced) continue;
    for (const auto& act : m.actions(s)) {
      for (const auto& tr : act.successors) visit(tr.target, w + static_cast<std::uint64_t>(act.weight));
    }
  }

  UnfoldedMdp out;
  out.bound = bound;
  std::vector<std::size_t> rank(found.size());
  std::size_t next = 0;
  for (const auto& [key, original] : index) rank[original] = next++;
  out.pairs.resize(found.size());
  for (std::size_t original = 0; original < found.size(); ++original) {
    const auto [w, s] = found[original];
    UnfoldedPair& p = out.pairs[rank[original]];
    p.state = s;
    p.weight = w;
    p.kind = kind_of(s, w);
    if (p.is_trap()) continue;
    for (ActionId a = 0; a < m.num_actions(s); ++a) {
      const Action& act = m.action(s, a);
      UnfoldedAction ua{a, {}};
      for (const auto& tr : act.successors) {
        const auto target = index.at({w + static_cast<std::uint64_t>(act.weight), tr.target});
        ua.successors.emplace_back(rank[target], tr.probability);
      }
      p.actions.push_back(std::move(ua));
    }
  }
  out.init = rank[index.at({0, m.init()})];
  return out;
}

}  // namespace varpen
