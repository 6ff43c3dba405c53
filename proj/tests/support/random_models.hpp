#pragma once

#include <cstdint>
#include <random>

#include "varpen/mdp.hpp"
#include "varpen/scheduler.hpp"

namespace varpen::testing {

struct RandomModelShape {
  std::size_t max_states = 5;   // including goal
  std::size_t max_actions = 3;
  std::int64_t min_weight = 0;
  std::int64_t max_weight = 3;
  std::size_t max_successors = 3;
  bool allow_self_loops = true;
};

/// End-component free by construction: every action of state i puts
/// positive probability on some state with a smaller index, and index 0 is
/// goal. The last state is init; draws repeat until every state is reachable.
Mdp random_ec_free_mdp(std::mt19937_64& rng, const RandomModelShape& shape = {});

/// Model with arbitrary successors (end components likely), for MEC tests.
Mdp random_mdp(std::mt19937_64& rng, std::size_t states, std::size_t max_actions, std::int64_t min_weight,
               std::int64_t max_weight);

/// Random deterministic weight-based scheduler with table entries at
/// random weights below `bound`.
WeightBasedScheduler random_weight_based(std::mt19937_64& rng, const Mdp& m, std::uint64_t bound,
                                         const MemorylessScheduler& tail);

MemorylessScheduler random_memoryless(std::mt19937_64& rng, const Mdp& m);

Rational random_rational(std::mt19937_64& rng, std::int64_t max_abs_num, std::int64_t max_den);

}  // namespace varpen::testing
