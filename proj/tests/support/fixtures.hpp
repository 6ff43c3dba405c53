#pragma once

#include <string>

#include "varpen/mdp.hpp"
#include "varpen/mdp_io.hpp"
#include "varpen/scheduler.hpp"

namespace varpen::testing {

inline std::string data_path(const std::string& name) { return std::string(VARPEN_TEST_DATA_DIR) + "/" + name; }

inline Mdp load_fixture(const std::string& name) { return load_mdp(data_path(name)); }

/// Weight-based scheduler choosing `label` at `state` below `bound` on the
/// listed weights, with `tail` everywhere else.
inline WeightBasedScheduler choose_at(const Mdp& m, const MemorylessScheduler& tail, std::uint64_t bound,
                                      const std::string& state, std::initializer_list<std::uint64_t> weights,
                                      const std::string& label) {
  WeightBasedScheduler out;
  out.bound = bound;
  out.tail = tail;
  const StateId s = *m.find_state(state);
  const ActionId a = *m.find_action(s, label);
  for (std::uint64_t w : weights) out.table[{s, w}] = point_mass(a);
  return out;
}

/// Memoryless deterministic scheduler given by one label per non-goal state
/// (single-action states may be omitted).
MemorylessScheduler memoryless(const Mdp& m, std::initializer_list<std::pair<std::string, std::string>> picks);

/// geo.mdp scheduler that plays alpha at c below weight k and beta from k on.
WeightBasedScheduler geo_threshold_scheduler(const Mdp& geo, std::uint64_t k, std::uint64_t bound);

}  // namespace varpen::testing
