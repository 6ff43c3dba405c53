#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "varpen/mdp.hpp"
#include "varpen/scheduler.hpp"

namespace varpen {

/// Generator identifier printed in simulation reports.
inline constexpr const char* kSimulationRng = "mt19937_64/splitmix64-chunked";

struct SimulationOptions {
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  std::uint64_t step_limit = 1'000'000;
  unsigned jobs = 1;
};

/// Empirical law of the accumulated weight. Mean and (population) variance
/// are exact rationals of the sampled values.
struct SimulationSummary {
  std::uint64_t samples = 0;
  Rational mean;
  Rational variance;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;
};

/// Runs the chain from init to goal `samples` times. Samples are drawn in
/// fixed chunks with per-chunk seeds, so the result depends only on the seed,
/// never on `jobs`. Throws StepLimitExceeded when one run is too long and
/// InvalidArgument for zero samples, NegativeWeight for negative weights.
SimulationSummary simulate(const Mdp& m, const WeightBasedScheduler& sched, const SimulationOptions& options);

/// `weight,count` rows with a header line.
std::string histogram_csv(const SimulationSummary& summary);

}  // namespace varpen
