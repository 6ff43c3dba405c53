#pragma once

#include <vector>

#include "varpen/mdp.hpp"

namespace varpen {

/// Closed, strongly connected sub-MDP. `retained[i]` lists the actions kept
/// at `states[i]`; states are sorted ascending.
struct EndComponent {
  std::vector<StateId> states;
  std::vector<std::vector<ActionId>> retained;

  bool contains(StateId s) const;
  const std::vector<ActionId>& retained_at(StateId s) const;

  friend bool operator==(const EndComponent&, const EndComponent&) = default;
};

enum class EcKind { ZeroEc, NegativeMeanPayoff, NonNegativeMeanPayoff };

struct EcClass {
  EcKind kind = EcKind::ZeroEc;
  Rational max_mean_payoff;
};

/// Maximal end components (none contains goal). Empty iff the model is
/// end-component free.
std::vector<EndComponent> find_end_components(const Mdp& m);

/// Zero test by potentials, otherwise the sign of the maximal mean payoff.
EcClass classify_ec(const Mdp& m, const EndComponent& ec);

/// Maximal long-run average of `sign * weight` inside the component, by exact
/// multichain policy iteration. `sign` is +1 or -1.
Rational max_mean_payoff(const Mdp& m, const EndComponent& ec, int sign = 1);

/// True iff every cycle inside the component has accumulated weight zero.
bool is_zero_component(const Mdp& m, const EndComponent& ec);

}  // namespace varpen
