#include "varpen/gadget.hpp"

#include <limits>

#include "checks.hpp"

namespace varpen {

Rational f_bound(std::int64_t n, std::int64_t W, const Rational& eps) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  if (W < 0) throw Error(ErrorKind::InvalidArgument, "W must be non-negative");
  if (eps.sign() <= 0 || eps > Rational(1)) throw Error(ErrorKind::EpsOutOfRange, "eps must lie in (0, 1]");
  const Rational nr(n);
  return nr * Rational(W) * (nr / eps + (Rational(1) - eps) / eps.square());
}

GadgetInstance build_gadget(const Mdp& m, std::uint64_t target) {
  detail::require_ec_free_nonnegative(m);
  if (target > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw Error(ErrorKind::InvalidArgument, "target weight out of range");
  }

  auto fresh = [&](std::string name) {
    while (m.find_state(name)) name += '_';
    return name;
  };
  const std::string iota_name = fresh("iota");
  std::string iota_prime_name = fresh("iota_prime");
  if (iota_prime_name == iota_name) iota_prime_name += '_';

  Mdp::Builder b;
  for (StateId s = 0; s < m.num_states(); ++s) b.add_state(m.state_name(s));
  const StateId iota = b.add_state(iota_name);
  const StateId iota_prime = b.add_state(iota_prime_name);
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& act : m.actions(s)) b.add_action(s, act);
  }
  b.add_action(iota, Action{"start", 0, {{m.init(), Rational(1, 2)}, {iota_prime, Rational(1, 2)}}});
  b.add_action(iota_prime, Action{"finish", static_cast<std::int64_t>(target), {{m.goal(), Rational(1)}}});
  b.set_init(iota);
  b.set_goal(m.goal());

  GadgetInstance g{std::move(b).build(), 0, 0, target, 0};
  g.f_value = f_bound(static_cast<std::int64_t>(g.mdp.num_states()), g.mdp.max_weight(), g.mdp.min_probability());
  g.lambda = Rational(18) * g.f_value;
  g.theta = Rational(static_cast<std::int64_t>(target));
  return g;
}

}  // namespace varpen
