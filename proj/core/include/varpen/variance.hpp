#pragma once

#include <vector>

#include "varpen/expectation.hpp"

namespace varpen {

struct VarianceMinSolution {
  Direction direction = Direction::Maximize;
  std::vector<Rational> expectation;    // optimal expectation per state
  std::vector<Rational> variance;       // minimal variance among optimal schedulers
  std::vector<Rational> second_moment;  // variance + expectation^2
  MemorylessScheduler scheduler;        // action ids of the original model
};

/// Variance-minimal memoryless deterministic scheduler among those that are
/// expectation-optimal in `direction`.
VarianceMinSolution min_variance_among_optimal(const Mdp& m, Direction direction);

}  // namespace varpen
