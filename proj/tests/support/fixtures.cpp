#include "fixtures.hpp"

#include <algorithm>
#include <stdexcept>

namespace varpen::testing {

MemorylessScheduler memoryless(const Mdp& m, std::initializer_list<std::pair<std::string, std::string>> picks) {
  std::vector<ActionId> actions(m.num_states(), 0);
  for (const auto& [state, label] : picks) {
    const auto s = m.find_state(state);
    if (!s) throw std::invalid_argument("unknown state " + state);
    const auto a = m.find_action(*s, label);
    if (!a) throw std::invalid_argument("unknown action " + label);
    actions[*s] = *a;
  }
  return MemorylessScheduler::deterministic(m, actions);
}

WeightBasedScheduler geo_threshold_scheduler(const Mdp& geo, std::uint64_t k, std::uint64_t bound) {
  WeightBasedScheduler out;
  out.bound = bound;
  out.tail = memoryless(geo, {{"c", "beta"}});
  const StateId c = *geo.find_state("c");
  const ActionId alpha = *geo.find_action(c, "alpha");
  for (std::uint64_t w = 0; w < std::min(k, bound); ++w) out.table[{c, w}] = point_mass(alpha);
  return out;
}

}  // namespace varpen::testing
