#include "varpen/distribution.hpp"

#include <algorithm>
#include <set>

#include "checks.hpp"
#include "varpen/errors.hpp"
#include "varpen/linear_system.hpp"

namespace varpen {

namespace {

struct Propagation {
  TerminalDistribution terminal;
  FrequencyTable freq;
};

// Solves the visit counts of one weight level: x = inflow + Z^T x, where Z
// holds the zero-weight moves chosen at this level.
std::map<StateId, Rational> solve_level(const Mdp& m, const WeightBasedScheduler& sched, std::uint64_t w,
                                        const std::map<StateId, Rational>& inflow) {
  std::vector<StateId> members;
  std::set<StateId> seen;
  for (const auto& [s, mass] : inflow) {
    if (seen.insert(s).second) members.push_back(s);
  }
  bool internal_edges = false;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const StateId s = members[i];
    for (const auto& aw : sched.at(s, w)) {
      const Action& act = m.action(s, aw.action);
      if (act.weight != 0) continue;
      for (const auto& tr : act.successors) {
        if (tr.target == m.goal()) continue;
        internal_edges = true;
        if (seen.insert(tr.target).second) members.push_back(tr.target);
      }
    }
  }
  if (!internal_edges) return inflow;

  std::sort(members.begin(), members.end());
  const std::size_t k = members.size();
  auto local = [&](StateId s) {
    return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), s) - members.begin());
  };
  LinearSystem sys(k);
  for (std::size_t i = 0; i < k; ++i) {
    sys.at(i, i) += 1;
    const StateId s = members[i];
    if (const auto it = inflow.find(s); it != inflow.end()) sys.rhs(i) = it->second;
    for (const auto& aw : sched.at(s, w)) {
      const Action& act = m.action(s, aw.action);
      if (act.weight != 0) continue;
      for (const auto& tr : act.successors) {
        if (tr.target == m.goal()) continue;
        sys.at(local(tr.target), i) -= aw.probability * tr.probability;
      }
    }
  }
  const auto x = solve_linear_system(sys);
  std::map<StateId, Rational> out;
  for (std::size_t i = 0; i < k; ++i) {
    if (!x[i].is_zero()) out.emplace(members[i], x[i]);
  }
  return out;
}

Propagation propagate(const Mdp& m, const WeightBasedScheduler& sched, std::uint64_t bound) {
  if (bound < 1) throw Error(ErrorKind::InvalidArgument, "bound must be at least 1");
  detail::require_ec_free_nonnegative(m);
  validate_scheduler(m, sched);

  Propagation out;
  out.terminal.bound = bound;
  out.terminal.goal = m.goal();
  out.freq.bound = bound;

  auto deliver_goal = [&](std::uint64_t w, const Rational& mass) {
    if (w < bound) {
      out.terminal.goal_mass[w] += mass;
      out.freq.visits[{m.goal(), w}] += mass;
    } else {
      out.terminal.boundary_mass[{m.goal(), w}] += mass;
    }
  };

  std::map<std::uint64_t, std::map<StateId, Rational>> pending;
  if (m.init() == m.goal()) {
    deliver_goal(0, Rational(1));
  } else {
    pending[0][m.init()] = 1;
  }
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    const std::uint64_t w = node.key();
    const auto visits = solve_level(m, sched, w, node.mapped());
    for (const auto& [s, x] : visits) {
      out.freq.visits[{s, w}] = x;
      for (const auto& aw : sched.at(s, w)) {
        const Rational through = x * aw.probability;
        out.freq.action_visits[{s, w, aw.action}] = through;
        const Action& act = m.action(s, aw.action);
        const std::uint64_t next = w + static_cast<std::uint64_t>(act.weight);
        for (const auto& tr : act.successors) {
          const Rational mass = through * tr.probability;
          if (tr.target == m.goal()) {
            deliver_goal(next, mass);
          } else if (act.weight == 0) {
            continue;  // already inside this level's solve
          } else if (next >= bound) {
            out.terminal.boundary_mass[{tr.target, next}] += mass;
          } else {
            pending[next][tr.target] += mass;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

Rational TerminalDistribution::total_mass() const {
  Rational total = 0;
  for (const auto& [w, p] : goal_mass) total += p;
  for (const auto& [sw, p] : boundary_mass) total += p;
  return total;
}

Rational FrequencyTable::visits_at(StateId s, std::uint64_t w) const {
  const auto it = visits.find({s, w});
  return it == visits.end() ? Rational(0) : it->second;
}

Rational FrequencyTable::action_visits_at(StateId s, std::uint64_t w, ActionId a) const {
  const auto it = action_visits.find({s, w, a});
  return it == action_visits.end() ? Rational(0) : it->second;
}

TerminalDistribution terminal_distribution(const Mdp& m, const WeightBasedScheduler& sched,
                                           std::uint64_t bound) {
  return propagate(m, sched, bound).terminal;
}

TerminalDistribution terminal_distribution(const Mdp& m, const WeightBasedScheduler& sched) {
  return terminal_distribution(m, sched, sched.bound);
}

FrequencyTable frequencies(const Mdp& m, const WeightBasedScheduler& sched, std::uint64_t bound) {
  return propagate(m, sched, bound).freq;
}

FrequencyTable frequencies(const Mdp& m, const WeightBasedScheduler& sched) {
  return frequencies(m, sched, sched.bound);
}

TailMoments tail_moments(const Mdp& m, const MemorylessScheduler& sched) {
  const std::size_t n = m.num_states();
  LinearSystem first(n);
  for (StateId s = 0; s < n; ++s) {
    first.at(s, s) += 1;
    if (s == m.goal()) continue;
    for (const auto& aw : sched.choice.at(s)) {
      const Action& act = m.action(s, aw.action);
      first.rhs(s) += aw.probability * Rational(act.weight);
      for (const auto& tr : act.successors) first.at(s, tr.target) -= aw.probability * tr.probability;
    }
  }
  TailMoments out;
  out.expectation = solve_linear_system(first);

  LinearSystem second(n);
  for (StateId s = 0; s < n; ++s) {
    for (StateId t = 0; t < n; ++t) second.at(s, t) = first.at(s, t);
    if (s == m.goal()) continue;
    for (const auto& aw : sched.choice.at(s)) {
      const Action& act = m.action(s, aw.action);
      const Rational w(act.weight);
      for (const auto& tr : act.successors) {
        second.rhs(s) += aw.probability * tr.probability * (w * w + Rational(2) * w * out.expectation[tr.target]);
      }
    }
  }
  out.second_moment = solve_linear_system(second);
  return out;
}

MomentPair moments_from_distribution(const TerminalDistribution& d, const std::vector<Rational>& tail_e,
                                     const std::vector<Rational>& tail_q) {
  Rational first = 0;
  Rational second = 0;
  for (const auto& [w, p] : d.goal_mass) {
    const Rational wr(BigInt(static_cast<unsigned long>(w)));
    first += p * wr;
    second += p * wr * wr;
  }
  for (const auto& [sw, p] : d.boundary_mass) {
    const Rational wr(BigInt(static_cast<unsigned long>(sw.weight)));
    Rational e = 0;
    Rational q = 0;
    if (sw.state != d.goal) {
      if (sw.state >= tail_e.size() || sw.state >= tail_q.size()) {
        throw Error(ErrorKind::MissingTailValue, "no tail value for boundary state " + std::to_string(sw.state));
      }
      e = tail_e[sw.state];
      q = tail_q[sw.state];
    }
    first += p * (wr + e);
    second += p * (wr * wr + Rational(2) * wr * e + q);
  }
  return {first, second - first * first};
}

std::uint64_t effective_bound(const WeightBasedScheduler& sched) {
  std::uint64_t top = 0;
  for (const auto& [sw, d] : sched.table) {
    if (sw.weight < sched.bound) top = std::max(top, sw.weight + 1);
  }
  return std::max<std::uint64_t>(1, std::min(sched.bound, top));
}

MomentPair scheduler_moments(const Mdp& m, const WeightBasedScheduler& sched) {
  const auto d = terminal_distribution(m, sched, effective_bound(sched));
  const auto tail = tail_moments(m, sched.tail);
  return moments_from_distribution(d, tail.expectation, tail.second_moment);
}

WeightBasedScheduler to_weight_based(const FrequencyTable& freq, const MemorylessScheduler& tail) {
  WeightBasedScheduler out;
  out.bound = freq.bound;
  out.tail = tail;
  for (const auto& [swa, mass] : freq.action_visits) {
    if (swa.weight >= freq.bound || mass.is_zero()) continue;
    const Rational total = freq.visits_at(swa.state, swa.weight);
    if (total.is_zero()) {
      throw Error(ErrorKind::ZeroVisitDivision, "action visits at a pair with no visits (state " +
                                                    std::to_string(swa.state) + ", weight " +
                                                    std::to_string(swa.weight) + ")");
    }
    out.table[{swa.state, swa.weight}].push_back({swa.action, mass / total});
  }
  return out;
}

WeightBasedScheduler canonicalize(const Mdp& m, const WeightBasedScheduler& sched) {
  WeightBasedScheduler out;
  out.bound = sched.bound;
  out.tail = sched.tail;
  if (sched.bound == 0) return out;
  for (const auto& [sw, x] : frequencies(m, sched).visits) {
    if (sw.state != m.goal() && sw.weight < sched.bound) out.table[sw] = sched.at(sw.state, sw.weight);
  }
  return out;
}

FrequencyTable mix_frequencies(const FrequencyTable& a, const FrequencyTable& b, const Rational& p) {
  FrequencyTable out;
  out.bound = a.bound;
  const Rational q = Rational(1) - p;
  for (const auto& [k, v] : a.visits) out.visits[k] += p * v;
  for (const auto& [k, v] : b.visits) out.visits[k] += q * v;
  for (const auto& [k, v] : a.action_visits) out.action_visits[k] += p * v;
  for (const auto& [k, v] : b.action_visits) out.action_visits[k] += q * v;
  std::erase_if(out.visits, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(out.action_visits, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

WeightBasedScheduler convex_combination(const Mdp& m, const WeightBasedScheduler& s1,
                                        const WeightBasedScheduler& s2, const Rational& p) {
  if (p.sign() <= 0 || p >= Rational(1)) {
    throw Error(ErrorKind::InvalidArgument, "mixing probability must lie strictly between 0 and 1");
  }
  if (s1.bound != s2.bound) throw Error(ErrorKind::InvalidArgument, "schedulers have different bounds");
  if (!(s1.tail == s2.tail)) throw Error(ErrorKind::InvalidArgument, "schedulers have different tails");
  if (s1.bound == 0) return s1;
  return to_weight_based(mix_frequencies(frequencies(m, s1), frequencies(m, s2), p), s1.tail);
}

MomentPair mixture_moments(const MomentPair& m1, const MomentPair& m2, const Rational& p) {
  if (p.sign() < 0 || p > Rational(1)) {
    throw Error(ErrorKind::InvalidArgument, "mixing probability must lie in [0, 1]");
  }
  const Rational q = Rational(1) - p;
  const Rational gap = m1.expectation - m2.expectation;
  return {p * m1.expectation + q * m2.expectation,
          p * m1.variance + q * m2.variance + p * q * gap * gap};
}

}  // namespace varpen
