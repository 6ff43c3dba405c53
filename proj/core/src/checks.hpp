#pragma once

#include "varpen/end_components.hpp"
#include "varpen/errors.hpp"

namespace varpen::detail {

/// Weighted-VPE models: end-component free with non-negative weights.
inline void require_ec_free_nonnegative(const Mdp& m) {
  if (m.has_negative_weights()) throw Error(ErrorKind::NegativeWeight, "model has negative weights");
  if (!find_end_components(m).empty()) {
    throw Error(ErrorKind::EndComponentPresent, "model has an end component");
  }
}

}  // namespace varpen::detail
