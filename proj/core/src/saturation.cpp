#include "varpen/saturation.hpp"

#include <algorithm>

#include "checks.hpp"
#include "varpen/expectation.hpp"

namespace varpen {

std::optional<std::uint64_t> SaturationConstants::K_u64() const {
  if (K < 0 || !K.fits_ulong_p() || sizeof(unsigned long) < sizeof(std::uint64_t)) return std::nullopt;
  return static_cast<std::uint64_t>(K.get_ui());
}

SaturationConstants saturation_point(const Mdp& m, const Rational& lambda) {
  if (lambda.sign() <= 0) throw Error(ErrorKind::NonPositiveLambda, "lambda must be positive");
  detail::require_ec_free_nonnegative(m);

  SaturationConstants c;
  c.n = m.num_states();
  c.W = m.max_weight();
  c.eps = m.min_probability();

  const auto max_sol = solve_expectation(m, Direction::Maximize);
  c.U1 = *std::max_element(max_sol.values.begin(), max_sol.values.end());

  const auto min_sol = solve_expectation(m, Direction::Minimize);
  const auto& e = min_sol.values;
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (ActionId a = 0; a < m.num_actions(s); ++a) {
      const Action& act = m.action(s, a);
      Rational value = Rational(act.weight);
      for (const auto& tr : act.successors) value += tr.probability * e[tr.target];
      const Rational gap = value - e[s];
      if (gap.is_zero()) continue;
      if (!c.delta || gap < *c.delta) c.delta = gap;
    }
  }

  const auto n = static_cast<unsigned>(c.n);
  const Rational nr(static_cast<std::int64_t>(c.n));
  const Rational wr(c.W);
  c.b_half = Rational(1) / c.eps.pow(n);
  c.B_half = c.b_half * nr * wr;
  c.U2 = Rational(2) * nr * nr * wr * wr / c.eps.pow(2 * n);

  c.K = c.B_half.ceil();
  if (!c.delta) {
    c.degenerate = true;
    return c;
  }
  const Rational needed =
      (c.U1 / lambda + c.U2 + Rational(2) * c.U1 + c.U1.square() / Rational(2)) / *c.delta + Rational(1);
  c.K = std::max(c.K, needed.ceil());
  return c;
}

}  // namespace varpen
