#include <algorithm>
#include <random>
#include <functional>
#include <optional>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_models.hpp"
#include "varpen/end_components.hpp"
#include "varpen/errors.hpp"
#include "varpen/mdp_io.hpp"

namespace varpen {
namespace {

Mdp loop_model(int loop_weight) {
  return parse_mdp("states x goal\ninit x\ngoal goal\ntrans x loop " + std::to_string(loop_weight) +
                   " x 1\ntrans x exit 0 goal 1\n");
}

TEST(EndComponents, FixturesAreEcFree) {
  EXPECT_TRUE(find_end_components(testing::load_fixture("intro.mdp")).empty());
  EXPECT_TRUE(find_end_components(testing::load_fixture("geo.mdp")).empty());
  EXPECT_TRUE(find_end_components(testing::load_fixture("micro.mdp")).empty());
}

TEST(EndComponents, SelfLoopComponent) {
  const Mdp m = loop_model(0);
  const auto ecs = find_end_components(m);
  ASSERT_EQ(ecs.size(), 1u);
  EXPECT_EQ(ecs[0].states, std::vector<StateId>{*m.find_state("x")});
  EXPECT_EQ(ecs[0].retained, std::vector<std::vector<ActionId>>{{*m.find_action(0, "loop")}});
}

TEST(ClassifyEc, SignOfLoopWeight) {
  {
    const Mdp m = loop_model(0);
    EXPECT_EQ(classify_ec(m, find_end_components(m)[0]).kind, EcKind::ZeroEc);
  }
  {
    const Mdp m = loop_model(-1);
    const auto c = classify_ec(m, find_end_components(m)[0]);
    EXPECT_EQ(c.kind, EcKind::NegativeMeanPayoff);
    EXPECT_EQ(c.max_mean_payoff, Rational(-1));
  }
  {
    const Mdp m = loop_model(1);
    const auto c = classify_ec(m, find_end_components(m)[0]);
    EXPECT_EQ(c.kind, EcKind::NonNegativeMeanPayoff);
    EXPECT_EQ(c.max_mean_payoff, Rational(1));
  }
}

TEST(MaxMeanPayoff, PicksBestCycle) {
  // Two-state ring with weights 4 and -1 against a self loop of weight 1.
  const Mdp m = parse_mdp(
      "states x y goal\ninit x\ngoal goal\n"
      "trans x go 4 y 1\ntrans x stay 1 x 1\ntrans x exit 0 goal 1\ntrans y back -1 x 1\n");
  const auto ecs = find_end_components(m);
  ASSERT_EQ(ecs.size(), 1u);
  EXPECT_EQ(max_mean_payoff(m, ecs[0], 1), Rational(3, 2));
  EXPECT_EQ(max_mean_payoff(m, ecs[0], -1), Rational(-1));
}

TEST(MaxMeanPayoff, StochasticComponent) {
  // From x: weight 2, then back to x or to y with 1/2; y returns with weight 0.
  const Mdp m = parse_mdp(
      "states x y goal\ninit x\ngoal goal\n"
      "trans x a 2 x 1/2 y 1/2\ntrans x exit 0 goal 1\ntrans y b 0 x 1\n");
  const auto ecs = find_end_components(m);
  ASSERT_EQ(ecs.size(), 1u);
  // stationary distribution (2/3, 1/3): gain 4/3
  EXPECT_EQ(max_mean_payoff(m, ecs[0], 1), Rational(4, 3));
}

bool closed_and_connected(const Mdp& m, const EndComponent& ec) {
  for (std::size_t i = 0; i < ec.states.size(); ++i) {
    if (ec.retained[i].empty()) return false;
    for (ActionId a : ec.retained[i]) {
      for (const auto& tr : m.action(ec.states[i], a).successors) {
        if (!ec.contains(tr.target)) return false;
      }
    }
  }
  // every state reaches every other under retained actions
  for (StateId from : ec.states) {
    std::set<StateId> seen{from};
    std::vector<StateId> stack{from};
    while (!stack.empty()) {
      const StateId u = stack.back();
      stack.pop_back();
      for (ActionId a : ec.retained_at(u)) {
        for (const auto& tr : m.action(u, a).successors) {
          if (seen.insert(tr.target).second) stack.push_back(tr.target);
        }
      }
    }
    if (seen.size() != ec.states.size()) return false;
  }
  return true;
}

TEST(EndComponentsProperty, MatchesSubsetSearch) {
  std::mt19937_64 rng(2024);
  int with_ec = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Mdp m = testing::random_mdp(rng, 2 + trial % 5, 3, -2, 2);
    const auto ecs = find_end_components(m);
    std::vector<std::set<StateId>> got;
    for (const auto& ec : ecs) {
      EXPECT_TRUE(closed_and_connected(m, ec));
      EXPECT_FALSE(ec.contains(m.goal()));
      got.emplace_back(ec.states.begin(), ec.states.end());
    }
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, testing::brute_force_mec_states(m)) << serialize_mdp(m);
    with_ec += !ecs.empty();
  }
  EXPECT_GT(with_ec, 50);
}

TEST(ClassifyEcProperty, ZeroIffAllCyclesZero) {
  std::mt19937_64 rng(99);
  int zero = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Mdp m = testing::random_mdp(rng, 2 + trial % 5, 2, -1, 1);
    for (const auto& ec : find_end_components(m)) {
      const auto cycles = testing::simple_cycle_weights(m, ec.states, ec.retained);
      const bool all_zero = std::all_of(cycles.begin(), cycles.end(), [](auto w) { return w == 0; });
      const auto c = classify_ec(m, ec);
      EXPECT_EQ(c.kind == EcKind::ZeroEc, all_zero) << serialize_mdp(m);
      zero += all_zero;
    }
  }
  EXPECT_GT(zero, 10);
}

TEST(MaxMeanPayoffProperty, DeterministicEqualsBestCycleMean) {
  // With deterministic transitions the optimal gain is the best mean cycle.
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 5;
    Mdp::Builder b;
    for (std::size_t i = 0; i < n; ++i) b.add_state(i == 0 ? "goal" : "s" + std::to_string(i));
    for (std::size_t i = 1; i < n; ++i) {
      const int actions = 1 + static_cast<int>(rng() % 3);
      for (int a = 0; a < actions; ++a) {
        const StateId t = rng() % n;
        b.add_action(i, Action{"a" + std::to_string(a), static_cast<std::int64_t>(rng() % 7) - 3, {{t, Rational(1)}}});
      }
    }
    b.set_goal(0);
    b.set_init(n - 1);
    std::optional<Mdp> m;
    try {
      m = std::move(b).build();
    } catch (const Error&) {
      continue;
    }
    for (const auto& ec : find_end_components(*m)) {
      // best mean over simple cycles, tracked with their lengths
      std::optional<Rational> best;
      std::function<void(StateId, StateId, std::int64_t, std::int64_t, std::vector<StateId>&)> dfs =
          [&](StateId root, StateId u, std::int64_t acc, std::int64_t len, std::vector<StateId>& path) {
            for (ActionId a : ec.retained_at(u)) {
              const Action& act = m->action(u, a);
              const StateId t = act.successors[0].target;
              if (t == root) {
                const Rational mean = Rational(acc + act.weight) / Rational(len + 1);
                if (!best || mean > *best) best = mean;
              } else if (t > root && std::find(path.begin(), path.end(), t) == path.end()) {
                path.push_back(t);
                dfs(root, t, acc + act.weight, len + 1, path);
                path.pop_back();
              }
            }
          };
      for (StateId root : ec.states) {
        std::vector<StateId> path{root};
        dfs(root, root, 0, 0, path);
      }
      ASSERT_TRUE(best);
      EXPECT_EQ(max_mean_payoff(*m, ec, 1), *best) << serialize_mdp(*m);
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
}  // namespace varpen
