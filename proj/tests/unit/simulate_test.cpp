#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "varpen/errors.hpp"
#include "varpen/mdp_io.hpp"
#include "varpen/simulate.hpp"

namespace varpen {
namespace {

using testing::load_fixture;
using testing::memoryless;

TEST(Simulate, SureWeightHasNoSpread) {
  const Mdp micro = load_fixture("micro.mdp");
  const auto s = simulate(micro, as_weight_based(memoryless(micro, {{"u", "a"}})), {.samples = 1000, .seed = 3});
  EXPECT_EQ(s.samples, 1000u);
  EXPECT_EQ(s.mean, Rational(1));
  EXPECT_EQ(s.variance, Rational(0));
  EXPECT_EQ(s.min, 1u);
  EXPECT_EQ(s.max, 1u);
  EXPECT_EQ(histogram_csv(s), "weight,count\n1,1000\n");
}

TEST(Simulate, IntroGammaMeanWithinNoise) {
  const Mdp intro = load_fixture("intro.mdp");
  const auto s = simulate(intro, as_weight_based(memoryless(intro, {{"s_init", "gamma"}})),
                          {.samples = 40000, .seed = 11});
  // E = 10/3, V = 10/9; allow five standard errors
  const double tol = 5 * std::sqrt(10.0 / 9.0) / std::sqrt(40000.0);
  EXPECT_NEAR(s.mean.to_double(), 10.0 / 3.0, tol);
  EXPECT_NEAR(s.variance.to_double(), 10.0 / 9.0, 0.1);
  EXPECT_EQ(s.min % 3, 0u);
  std::uint64_t total = 0;
  for (const auto& [w, n] : s.histogram) total += n;
  EXPECT_EQ(total, 40000u);
}

TEST(Simulate, DependsOnlyOnSeed) {
  const Mdp geo = load_fixture("geo.mdp");
  const auto sched = testing::geo_threshold_scheduler(geo, 2, 4);
  const auto a = simulate(geo, sched, {.samples = 20000, .seed = 5, .jobs = 1});
  const auto b = simulate(geo, sched, {.samples = 20000, .seed = 5, .jobs = 3});
  const auto c = simulate(geo, sched, {.samples = 20000, .seed = 6, .jobs = 1});
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.histogram, b.histogram);
  EXPECT_NE(a.histogram, c.histogram);
}

TEST(Simulate, Errors) {
  const Mdp ec = parse_mdp("states x goal\ninit x\ngoal goal\ntrans x loop 1 x 1\ntrans x exit 0 goal 1\n");
  try {
    simulate(ec, as_weight_based(memoryless(ec, {{"x", "loop"}})), {.samples = 1, .step_limit = 100});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepLimitExceeded);
  }
  const Mdp micro = load_fixture("micro.mdp");
  EXPECT_THROW(simulate(micro, as_weight_based(memoryless(micro, {{"u", "a"}})), {.samples = 0}), Error);
}

}  // namespace
}  // namespace varpen
