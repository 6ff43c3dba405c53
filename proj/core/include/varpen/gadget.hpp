#pragma once

#include <cstdint>

#include "varpen/mdp.hpp"

namespace varpen {

/// Threshold instance built from an exact-weight reachability question:
/// "is there a scheduler with Pr(accumulated weight = target) = 1?"
struct GadgetInstance {
  Mdp mdp;
  Rational lambda;
  Rational theta;
  std::uint64_t target = 0;
  Rational f_value;
};

/// n·W·(n/eps + (1−eps)/eps²). Requires n >= 1, W >= 0 (InvalidArgument) and
/// 0 < eps <= 1 (EpsOutOfRange).
Rational f_bound(std::int64_t n, std::int64_t W, const Rational& eps);

/// Adds a fresh initial state `iota` that moves with weight 0 to the old
/// initial state or to `iota_prime` (1/2 each); `iota_prime` reaches goal
/// with weight `target`. lambda = 18·f(n, W, eps) measured on the result,
/// theta = target. Requires an end-component free model with non-negative
/// weights.
GadgetInstance build_gadget(const Mdp& m, std::uint64_t target);

}  // namespace varpen
