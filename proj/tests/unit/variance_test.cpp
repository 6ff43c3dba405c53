#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_models.hpp"
#include "varpen/mdp_io.hpp"
#include "varpen/variance.hpp"

namespace varpen {
namespace {

TEST(MinVariance, GeoMinimize) {
  const Mdp m = testing::load_fixture("geo.mdp");
  const auto sol = min_variance_among_optimal(m, Direction::Minimize);
  const StateId si = m.init(), s = *m.find_state("s"), c = *m.find_state("c");
  EXPECT_EQ(m.action(c, sol.scheduler.action_at(c)).label, "beta");
  EXPECT_EQ(sol.expectation[si], Rational(1));
  EXPECT_EQ(sol.expectation[s], Rational(2));
  EXPECT_EQ(sol.expectation[c], Rational(0));
  EXPECT_EQ(sol.variance[si], Rational(2));
  EXPECT_EQ(sol.variance[s], Rational(2));
  EXPECT_EQ(sol.variance[c], Rational(0));
  EXPECT_EQ(sol.second_moment[si], Rational(3));
  EXPECT_EQ(sol.second_moment[s], Rational(6));
  EXPECT_EQ(sol.second_moment[c], Rational(0));
}

TEST(MinVariance, IntroMaximize) {
  const Mdp m = testing::load_fixture("intro.mdp");
  const auto sol = min_variance_among_optimal(m, Direction::Maximize);
  EXPECT_EQ(m.action(m.init(), sol.scheduler.action_at(m.init())).label, "delta");
  EXPECT_EQ(sol.variance[m.init()], Rational(4));
  EXPECT_EQ(sol.expectation[m.init()], Rational(4));
}

TEST(MinVariance, PrefersSureOutcome) {
  const Mdp m = parse_mdp(
      "states u v goal\ninit u\ngoal goal\n"
      "trans u a 2 goal 1\ntrans u b 1 goal 1/2 v 1/2\ntrans v t 2 goal 1\n");
  const auto sol = min_variance_among_optimal(m, Direction::Maximize);
  EXPECT_EQ(m.action(0, sol.scheduler.action_at(0)).label, "a");
  EXPECT_EQ(sol.variance[0], Rational(0));
  const auto b = testing::policy_moments(m, {*m.find_action(0, "b"), 0, 0});
  EXPECT_EQ(b.expectation[0], Rational(2));
  EXPECT_EQ(b.variance(0), Rational(1));
}

Mdp negate_weights(const Mdp& m) {
  Mdp::Builder b;
  for (StateId s = 0; s < m.num_states(); ++s) b.add_state(m.state_name(s));
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (Action act : m.actions(s)) {
      act.weight = -act.weight;
      b.add_action(s, act);
    }
  }
  b.set_init(m.init());
  b.set_goal(m.goal());
  return std::move(b).build();
}

TEST(MinVarianceProperty, ResidualsAndIdentity) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const Mdp m = testing::random_ec_free_mdp(rng);
    for (Direction d : {Direction::Maximize, Direction::Minimize}) {
      const auto sol = min_variance_among_optimal(m, d);
      const auto opt = solve_expectation(m, d);
      for (StateId s = 0; s < m.num_states(); ++s) {
        EXPECT_EQ(sol.second_moment[s], sol.variance[s] + sol.expectation[s].square());
        if (s == m.goal()) {
          EXPECT_EQ(sol.variance[s], Rational(0));
          continue;
        }
        for (ActionId a : opt.optimal_actions[s]) {
          const Action& act = m.action(s, a);
          Rational rhs = 0;
          for (const auto& tr : act.successors) {
            rhs += tr.probability *
                   ((Rational(act.weight) + sol.expectation[tr.target] - sol.expectation[s]).square() +
                    sol.variance[tr.target]);
          }
          if (a == sol.scheduler.action_at(s)) {
            EXPECT_EQ(rhs, sol.variance[s]);
          } else {
            EXPECT_GE(rhs, sol.variance[s]);
          }
        }
      }
    }
  }
}

TEST(MinVarianceProperty, MatchesEnumeration) {
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 100; ++trial) {
    const Mdp m = testing::random_ec_free_mdp(rng);
    for (Direction d : {Direction::Maximize, Direction::Minimize}) {
      EXPECT_EQ(min_variance_among_optimal(m, d).variance, testing::brute_force_min_variance(m, d))
          << serialize_mdp(m);
    }
  }
}

TEST(MinVarianceProperty, MinimizeEqualsNegatedMaximize) {
  std::mt19937_64 rng(999);
  for (int trial = 0; trial < 60; ++trial) {
    const Mdp m = testing::random_ec_free_mdp(rng);
    const auto direct = min_variance_among_optimal(m, Direction::Minimize);
    const auto negated = min_variance_among_optimal(negate_weights(m), Direction::Maximize);
    EXPECT_EQ(direct.variance, negated.variance);
    EXPECT_EQ(direct.scheduler, negated.scheduler);
    for (StateId s = 0; s < m.num_states(); ++s) EXPECT_EQ(direct.expectation[s], -negated.expectation[s]);
  }
}

}  // namespace
}  // namespace varpen
