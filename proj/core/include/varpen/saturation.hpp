#pragma once

#include <cstdint>
#include <optional>

#include "varpen/mdp.hpp"

namespace varpen {

/// Constants behind the saturation point K: past accumulated weight K, a
/// VPE-optimal scheduler only uses expectation-minimal actions.
struct SaturationConstants {
  std::size_t n = 0;
  std::int64_t W = 0;
  Rational eps;
  std::optional<Rational> delta;  // absent when every action is expectation-minimal
  Rational U1;
  Rational U2;
  Rational b_half;
  Rational B_half;
  BigInt K;
  bool degenerate = false;  // delta absent, K = ceil(B_half)

  /// K as a machine integer, or nullopt if it does not fit.
  std::optional<std::uint64_t> K_u64() const;
};

/// Requires an end-component free model with non-negative weights and
/// lambda > 0 (EndComponentPresent, NegativeWeight, NonPositiveLambda).
SaturationConstants saturation_point(const Mdp& m, const Rational& lambda);

}  // namespace varpen
