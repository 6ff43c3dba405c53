#include "varpen/vpe.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

#include "checks.hpp"
#include "graph.hpp"
#include "varpen/linear_system.hpp"
#include "varpen/unfold.hpp"

namespace varpen {

namespace {

struct Level {
  std::uint64_t weight = 0;
  std::vector<std::size_t> members;  // non-trap pairs, state order
  bool cyclic = false;               // zero-weight cycles under some choice
  std::vector<std::size_t> topo;     // members in propagation order when acyclic
};

// Read-only data shared by all enumeration workers.
struct Plan {
  const UnfoldedMdp* unfolded = nullptr;
  std::vector<Level> levels;
  std::vector<std::size_t> level_of;  // pair -> level index (non-trap pairs)
  std::vector<Rational> m1, m2;       // first and second moment of trap pairs
  std::vector<std::size_t> decisions; // all decision pairs, global order
  std::optional<std::size_t> first_decision;
};

Plan make_plan(const UnfoldedMdp& u, const VarianceMinSolution& tail) {
  Plan plan;
  plan.unfolded = &u;
  plan.level_of.assign(u.pairs.size(), 0);
  plan.m1.resize(u.pairs.size());
  plan.m2.resize(u.pairs.size());
  for (std::size_t i = 0; i < u.pairs.size(); ++i) {
    const UnfoldedPair& p = u.pairs[i];
    const Rational w(BigInt(static_cast<unsigned long>(p.weight)));
    if (p.kind == PairKind::Goal) {
      plan.m1[i] = w;
      plan.m2[i] = w * w;
    } else if (p.is_trap()) {
      const Rational& e = tail.expectation[p.state];
      const Rational& q = tail.second_moment[p.state];
      plan.m1[i] = w + e;
      plan.m2[i] = w * w + Rational(2) * w * e + q;
    } else {
      if (plan.levels.empty() || plan.levels.back().weight != p.weight) plan.levels.push_back({p.weight, {}, false, {}});
      plan.levels.back().members.push_back(i);
      plan.level_of[i] = plan.levels.size() - 1;
      if (p.kind == PairKind::Decision) plan.decisions.push_back(i);
    }
  }
  if (!plan.decisions.empty()) plan.first_decision = plan.decisions.front();

  for (auto& level : plan.levels) {
    const std::size_t k = level.members.size();
    auto local = [&](std::size_t pair) {
      return static_cast<std::size_t>(std::lower_bound(level.members.begin(), level.members.end(), pair) -
                                      level.members.begin());
    };
    std::vector<std::vector<std::size_t>> adjacency(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& act : u.pairs[level.members[i]].actions) {
        for (const auto& [t, prob] : act.successors) {
          if (!u.pairs[t].is_trap() && u.pairs[t].weight == level.weight) adjacency[i].push_back(local(t));
        }
      }
    }
    std::size_t count = 0;
    const auto comp = detail::strongly_connected_components(adjacency, &count);
    level.cyclic = count < k;
    for (std::size_t i = 0; i < k && !level.cyclic; ++i) {
      for (std::size_t j : adjacency[i]) level.cyclic |= j == i;
    }
    if (!level.cyclic) {
      // Tarjan numbers sink components first; sources go first here.
      std::vector<std::size_t> order(k);
      for (std::size_t i = 0; i < k; ++i) order[count - 1 - comp[i]] = level.members[i];
      level.topo = std::move(order);
    }
  }
  return plan;
}

struct Candidate {
  Rational value;
  std::vector<std::size_t> choices;  // per entry of Plan::decisions
};

bool better(const Candidate& a, const std::optional<Candidate>& b) {
  if (!b) return true;
  if (a.value != b->value) return a.value > b->value;
  return a.choices < b->choices;
}

class Engine {
 public:
  Engine(const Plan& plan, const VpeSolver& solver, VpeObjective objective, unsigned worker, unsigned jobs)
      : plan_(plan),
        u_(*plan.unfolded),
        solver_(solver),
        objective_(objective),
        worker_(worker),
        jobs_(jobs),
        inflow_(u_.pairs.size()),
        choice_(u_.pairs.size(), 0) {}

  std::optional<Candidate> run() {
    if (!u_.pairs[u_.init].is_trap()) {
      inflow_[u_.init] = 1;
    } else {
      m1_ = plan_.m1[u_.init];
      m2_ = plan_.m2[u_.init];
    }
    search(0);
    return best_;
  }

  /// Single forward pass with fixed choices; returns the visited decisions.
  std::set<std::size_t> replay(const std::vector<std::size_t>& choices, MomentPair& moments) {
    for (std::size_t i = 0; i < plan_.decisions.size(); ++i) choice_[plan_.decisions[i]] = choices[i];
    if (!u_.pairs[u_.init].is_trap()) {
      inflow_[u_.init] = 1;
    } else {
      m1_ = plan_.m1[u_.init];
      m2_ = plan_.m2[u_.init];
    }
    std::set<std::size_t> visited;
    for (const auto& level : plan_.levels) {
      const auto x = level_visits(level);
      for (std::size_t i = 0; i < level.members.size(); ++i) {
        if (!x[i].is_zero() && u_.pairs[level.members[i]].kind == PairKind::Decision) {
          visited.insert(level.members[i]);
        }
      }
      std::vector<std::pair<std::size_t, Rational>> undo;
      push(level, x, undo);
    }
    moments = {m1_, m2_ - m1_ * m1_};
    return visited;
  }

 private:
  // Visit counts of the level's members under the current choices.
  std::vector<Rational> level_visits(const Level& level) const {
    const std::size_t k = level.members.size();
    auto local = [&](std::size_t pair) {
      return static_cast<std::size_t>(std::lower_bound(level.members.begin(), level.members.end(), pair) -
                                      level.members.begin());
    };
    std::vector<Rational> x(k);
    if (!level.cyclic) {
      for (std::size_t i = 0; i < k; ++i) x[i] = inflow_[level.members[i]];
      for (std::size_t p : level.topo) {
        const Rational& xp = x[local(p)];
        if (xp.is_zero()) continue;
        for (const auto& [t, prob] : u_.pairs[p].actions[choice_[p]].successors) {
          if (!u_.pairs[t].is_trap() && u_.pairs[t].weight == level.weight) x[local(t)] += xp * prob;
        }
      }
      return x;
    }
    LinearSystem sys(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t p = level.members[i];
      sys.at(i, i) += 1;
      sys.rhs(i) = inflow_[p];
      for (const auto& [t, prob] : u_.pairs[p].actions[choice_[p]].successors) {
        if (!u_.pairs[t].is_trap() && u_.pairs[t].weight == level.weight) sys.at(local(t), i) -= prob;
      }
    }
    return solve_linear_system(sys);
  }

  // Sends the level's outflow to traps and higher levels.
  void push(const Level& level, const std::vector<Rational>& x, std::vector<std::pair<std::size_t, Rational>>& undo) {
    for (std::size_t i = 0; i < level.members.size(); ++i) {
      if (x[i].is_zero()) continue;
      const std::size_t p = level.members[i];
      for (const auto& [t, prob] : u_.pairs[p].actions[choice_[p]].successors) {
        const UnfoldedPair& target = u_.pairs[t];
        if (target.is_trap()) {
          const Rational mass = x[i] * prob;
          m1_ += mass * plan_.m1[t];
          m2_ += mass * plan_.m2[t];
        } else if (target.weight != level.weight) {
          Rational mass = x[i] * prob;
          inflow_[t] += mass;
          undo.emplace_back(t, std::move(mass));
        }
      }
    }
  }

  // Decision pairs of the level that can carry mass under some choice.
  std::vector<std::size_t> active_decisions(const Level& level) const {
    std::set<std::size_t> reached;
    std::deque<std::size_t> queue;
    for (std::size_t p : level.members) {
      if (!inflow_[p].is_zero()) {
        reached.insert(p);
        queue.push_back(p);
      }
    }
    while (!queue.empty()) {
      const std::size_t p = queue.front();
      queue.pop_front();
      for (const auto& act : u_.pairs[p].actions) {
        for (const auto& [t, prob] : act.successors) {
          if (!u_.pairs[t].is_trap() && u_.pairs[t].weight == level.weight && reached.insert(t).second) {
            queue.push_back(t);
          }
        }
      }
    }
    std::vector<std::size_t> out;
    for (std::size_t p : level.members) {
      if (u_.pairs[p].kind == PairKind::Decision && reached.count(p)) out.push_back(p);
    }
    return out;
  }

  void search(std::size_t li) {
    if (li == plan_.levels.size()) {
      Candidate c{solver_.objective_value({m1_, m2_ - m1_ * m1_}, objective_), {}};
      c.choices.reserve(plan_.decisions.size());
      for (std::size_t p : plan_.decisions) c.choices.push_back(choice_[p]);
      if (better(c, best_)) best_ = std::move(c);
      return;
    }
    const Level& level = plan_.levels[li];
    const auto active = active_decisions(level);

    bool split_here = false;
    if (jobs_ > 1 && plan_.first_decision && plan_.level_of[*plan_.first_decision] == li) {
      split_here = !active.empty() && active.front() == *plan_.first_decision;
      if (!split_here && worker_ != 0) return;  // first decision is inert: worker 0 covers it
    }

    const Rational saved_m1 = m1_;
    const Rational saved_m2 = m2_;
    for (;;) {
      if (!split_here || choice_[active.front()] % jobs_ == worker_) {
        const auto x = level_visits(level);
        std::vector<std::pair<std::size_t, Rational>> undo;
        push(level, x, undo);
        search(li + 1);
        for (const auto& [t, mass] : undo) inflow_[t] -= mass;
        m1_ = saved_m1;
        m2_ = saved_m2;
      }
      // Next assignment in lexicographic order (last pair varies fastest).
      std::size_t i = active.size();
      while (i > 0) {
        const std::size_t p = active[i - 1];
        if (++choice_[p] < u_.pairs[p].actions.size()) break;
        choice_[p] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }

  const Plan& plan_;
  const UnfoldedMdp& u_;
  const VpeSolver& solver_;
  VpeObjective objective_;
  unsigned worker_;
  unsigned jobs_;
  std::vector<Rational> inflow_;
  std::vector<std::size_t> choice_;
  Rational m1_ = 0;
  Rational m2_ = 0;
  std::optional<Candidate> best_;
};

}  // namespace

VpeSolver::VpeSolver(Mdp m, Rational lambda)
    : m_(std::move(m)),
      lambda_(std::move(lambda)),
      saturation_(saturation_point(m_, lambda_)),
      tail_(min_variance_among_optimal(m_, Direction::Minimize)) {}

Rational VpeSolver::objective_value(const MomentPair& moments, VpeObjective objective) const {
  const Rational e = objective == VpeObjective::MaximizeExpectation ? moments.expectation : -moments.expectation;
  return e - lambda_ * moments.variance;
}

VpeReport VpeSolver::evaluate(const WeightBasedScheduler& sched, VpeObjective objective) const {
  validate_scheduler(m_, sched);
  if (!(sched.tail == tail_.scheduler)) {
    throw Error(ErrorKind::TailMismatch, "scheduler tail differs from the variance-minimal scheduler");
  }
  const auto d = terminal_distribution(m_, sched, effective_bound(sched));
  VpeReport r;
  r.lambda = lambda_;
  r.objective = objective;
  r.bound_used = sched.bound;
  r.exact = BigInt(static_cast<unsigned long>(sched.bound)) >= saturation_.K;
  r.moments = moments_from_distribution(d, tail_.expectation, tail_.second_moment);
  r.value = objective_value(r.moments, objective);
  r.scheduler = sched;
  return r;
}

VpeReport VpeSolver::maximize(const VpeOptions& options) const {
  VpeReport r;
  r.lambda = lambda_;
  r.objective = options.objective;

  if (saturation_.degenerate) {
    const StateId init = m_.init();
    r.bound_used = 0;
    r.exact = true;
    r.moments = {tail_.expectation[init], tail_.variance[init]};
    r.value = objective_value(r.moments, options.objective);
    r.scheduler = as_weight_based(tail_.scheduler);
    return r;
  }

  std::uint64_t bound = 0;
  if (options.bound) {
    bound = *options.bound;
  } else if (const auto k = saturation_.K_u64()) {
    bound = *k;
  } else {
    throw Error(ErrorKind::BoundTooLarge, "saturation point " + saturation_.K.get_str() +
                                              " is out of range; pass an explicit bound");
  }
  if (bound < 1) throw Error(ErrorKind::InvalidArgument, "bound must be at least 1");

  UnfoldOptions uo;
  uo.collapse_forced = true;
  uo.max_pairs = options.max_pairs;
  const UnfoldedMdp u = unfold(m_, bound, uo);
  const Plan plan = make_plan(u, tail_);

  std::uint64_t assignments = 1;
  for (std::size_t p : plan.decisions) {
    const std::uint64_t radix = u.pairs[p].actions.size();
    if (assignments > options.max_assignments / radix) {
      throw Error(ErrorKind::BoundTooLarge,
                  "bound " + std::to_string(bound) + " needs more than " + std::to_string(options.max_assignments) +
                      " scheduler assignments (" + std::to_string(plan.decisions.size()) +
                      " decision pairs); choose a smaller bound");
    }
    assignments *= radix;
  }

  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::optional<Candidate>> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](unsigned k) {
    try {
      Engine engine(plan, *this, options.objective, k, jobs);
      results[k] = engine.run();
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned k = 0; k < jobs; ++k) threads.emplace_back(work, k);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::optional<Candidate> best;
  for (auto& c : results) {
    if (c && better(*c, best)) best = std::move(c);
  }

  Engine replay(plan, *this, options.objective, 0, 1);
  const auto visited = replay.replay(best->choices, r.moments);
  r.bound_used = bound;
  r.exact = BigInt(static_cast<unsigned long>(bound)) >= saturation_.K;
  r.value = objective_value(r.moments, options.objective);
  r.scheduler.bound = bound;
  r.scheduler.tail = tail_.scheduler;
  for (std::size_t i = 0; i < plan.decisions.size(); ++i) {
    const std::size_t p = plan.decisions[i];
    if (visited.count(p)) {
      r.scheduler.table[{u.pairs[p].state, u.pairs[p].weight}] = point_mass(u.pairs[p].actions[best->choices[i]].action);
    }
  }
  return r;
}

ThresholdResult VpeSolver::threshold(const Rational& theta, const VpeOptions& options) const {
  ThresholdResult out;
  out.report = maximize(options);
  if (out.report.value >= theta) {
    out.verdict = Verdict::Holds;
  } else {
    out.verdict = out.report.exact ? Verdict::Fails : Verdict::LowerBoundOnly;
  }
  return out;
}

VpeReport vpe_of_scheduler(const Mdp& m, const Rational& lambda, const WeightBasedScheduler& sched) {
  return VpeSolver(m, lambda).evaluate(sched);
}

VpeReport maximize_vpe(const Mdp& m, const Rational& lambda, const VpeOptions& options) {
  return VpeSolver(m, lambda).maximize(options);
}

ThresholdResult threshold(const Mdp& m, const Rational& lambda, const Rational& theta, const VpeOptions& options) {
  return VpeSolver(m, lambda).threshold(theta, options);
}

std::vector<FrontierRow> frontier(const Mdp& m, const std::vector<Rational>& lambdas, const VpeOptions& options) {
  std::vector<FrontierRow> rows;
  for (const auto& lambda : lambdas) {
    const auto r = maximize_vpe(m, lambda, options);
    rows.push_back({lambda, r.moments.expectation, r.moments.variance, r.value});
  }
  return rows;
}

std::string frontier_csv(const std::vector<FrontierRow>& rows) {
  std::ostringstream out;
  out << "lambda,expectation,variance,vpe\n";
  for (const auto& row : rows) {
    out << row.lambda << ',' << row.expectation << ',' << row.variance << ',' << row.vpe << '\n';
  }
  return out.str();
}

}  // namespace varpen
