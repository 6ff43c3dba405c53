#include "varpen/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

#include "text.hpp"
#include "varpen/errors.hpp"

namespace varpen {

using detail::LineError;

ActionDistribution point_mass(ActionId a) { return {ActionWeight{a, Rational(1)}}; }

bool is_point_mass(const ActionDistribution& d) {
  return d.size() == 1 && d.front().probability == Rational(1);
}

MemorylessScheduler MemorylessScheduler::deterministic(const Mdp& m,
                                                       const std::vector<ActionId>& actions) {
  MemorylessScheduler out;
  out.choice.resize(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (s != m.goal()) out.choice[s] = point_mass(actions.at(s));
  }
  return out;
}

bool MemorylessScheduler::is_deterministic() const {
  return std::all_of(choice.begin(), choice.end(),
                     [](const ActionDistribution& d) { return d.empty() || is_point_mass(d); });
}

const ActionDistribution& WeightBasedScheduler::at(StateId s, std::uint64_t w) const {
  if (w < bound) {
    if (const auto it = table.find({s, w}); it != table.end()) return it->second;
  }
  return tail.choice.at(s);
}

bool WeightBasedScheduler::is_deterministic() const {
  return tail.is_deterministic() &&
         std::all_of(table.begin(), table.end(), [](const auto& kv) { return is_point_mass(kv.second); });
}

namespace {

void check_distribution(const Mdp& m, StateId s, const ActionDistribution& d, const std::string& where) {
  if (d.empty()) throw Error(ErrorKind::ValidationError, where + ": no action chosen");
  Rational sum = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].action >= m.num_actions(s)) {
      throw Error(ErrorKind::ValidationError, where + ": action not enabled");
    }
    if (i > 0 && d[i - 1].action >= d[i].action) {
      throw Error(ErrorKind::ValidationError, where + ": actions must be distinct and ordered");
    }
    if (d[i].probability.sign() <= 0) {
      throw Error(ErrorKind::ValidationError, where + ": probabilities must be positive");
    }
    sum += d[i].probability;
  }
  if (sum != Rational(1)) {
    throw Error(ErrorKind::ValidationError, where + ": probabilities sum to " + sum.to_string());
  }
}

std::string format_distribution(const Mdp& m, StateId s, const ActionDistribution& d) {
  if (is_point_mass(d)) return m.action(s, d.front().action).label;
  std::string out;
  for (const auto& aw : d) {
    if (!out.empty()) out += ' ';
    out += m.action(s, aw.action).label + ' ' + aw.probability.to_string();
  }
  return out;
}

ActionDistribution parse_choice(const std::vector<std::string_view>& tokens, std::size_t first,
                                const Mdp& m, StateId s, const LineError& err) {
  auto lookup = [&](std::string_view label) {
    const auto a = m.find_action(s, label);
    if (!a) err.syntax("action '" + std::string(label) + "' not enabled at " + m.state_name(s));
    return *a;
  };
  const std::size_t count = tokens.size() - first;
  ActionDistribution d;
  if (count == 1) {
    d = point_mass(lookup(tokens[first]));
  } else if (count >= 2 && count % 2 == 0) {
    for (std::size_t i = first; i < tokens.size(); i += 2) {
      try {
        d.push_back({lookup(tokens[i]), parse_rational(tokens[i + 1])});
      } catch (const Error& e) {
        err.rethrow(e);
      }
    }
  } else {
    err.syntax("expected 'choose <action>' or 'choose (<action> <prob>)+'");
  }
  std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.action < b.action; });
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i - 1].action == d[i].action) err.syntax("action listed twice");
  }
  try {
    check_distribution(m, s, d, "choice at " + m.state_name(s));
  } catch (const Error& e) {
    err.rethrow(e);
  }
  return d;
}

}  // namespace

void validate_scheduler(const Mdp& m, const WeightBasedScheduler& sched) {
  if (sched.tail.choice.size() != m.num_states()) {
    throw Error(ErrorKind::ValidationError, "tail does not cover the model's states");
  }
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (s == m.goal()) {
      if (!sched.tail.choice[s].empty()) {
        throw Error(ErrorKind::ValidationError, "tail chooses an action at goal");
      }
      continue;
    }
    check_distribution(m, s, sched.tail.choice[s], "tail at " + m.state_name(s));
  }
  for (const auto& [key, d] : sched.table) {
    if (key.state >= m.num_states() || key.state == m.goal()) {
      throw Error(ErrorKind::ValidationError, "table entry at goal or unknown state");
    }
    if (key.weight >= sched.bound) {
      throw Error(ErrorKind::ValidationError, "table entry at " + m.state_name(key.state) + " " +
                                                  std::to_string(key.weight) + " is not below the bound");
    }
    check_distribution(m, key.state, d,
                       "choice at " + m.state_name(key.state) + " " + std::to_string(key.weight));
  }
}

WeightBasedScheduler parse_scheduler(std::string_view text, const Mdp& m) {
  WeightBasedScheduler sched;
  std::optional<std::uint64_t> bound;
  std::vector<std::optional<ActionDistribution>> tail(m.num_states());

  detail::for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
    const LineError err(line_no);
    auto state_of = [&](std::string_view name) {
      const auto s = m.find_state(name);
      if (!s) err.syntax("unknown state '" + std::string(name) + "'");
      if (*s == m.goal()) err.syntax("goal takes no choice");
      return *s;
    };
    auto parse_count = [&](std::string_view token) {
      std::uint64_t value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        err.syntax("malformed natural number '" + std::string(token) + "'");
      }
      return value;
    };

    if (tokens[0] == "bound") {
      if (bound) err.syntax("duplicate 'bound' line");
      if (tokens.size() != 2) err.syntax("'bound' takes one natural number");
      bound = parse_count(tokens[1]);
    } else if (tokens[0] == "at") {
      if (!bound) err.syntax("'at' before 'bound'");
      if (tokens.size() < 5 || tokens[3] != "choose") err.syntax("expected 'at <state> <weight> choose ...'");
      const StateId s = state_of(tokens[1]);
      const std::uint64_t w = parse_count(tokens[2]);
      if (w >= *bound) err.invalid("weight " + std::to_string(w) + " is not below the bound");
      auto d = parse_choice(tokens, 4, m, s, err);
      if (!sched.table.emplace(StateWeight{s, w}, std::move(d)).second) {
        err.syntax("duplicate entry for " + m.state_name(s) + " " + std::to_string(w));
      }
    } else if (tokens[0] == "tail") {
      if (tokens.size() < 4 || tokens[2] != "choose") err.syntax("expected 'tail <state> choose ...'");
      const StateId s = state_of(tokens[1]);
      if (tail[s]) err.syntax("duplicate tail for " + m.state_name(s));
      tail[s] = parse_choice(tokens, 3, m, s, err);
    } else {
      err.syntax("unknown directive '" + std::string(tokens[0]) + "'");
    }
  });

  if (!bound) throw Error(ErrorKind::ParseError, "missing 'bound' line");
  sched.bound = *bound;
  sched.tail.choice.resize(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (s == m.goal()) continue;
    if (tail[s]) {
      sched.tail.choice[s] = std::move(*tail[s]);
    } else if (m.num_actions(s) == 1) {
      sched.tail.choice[s] = point_mass(0);
    } else {
      throw Error(ErrorKind::ParseError, "missing tail choice for " + m.state_name(s));
    }
  }
  validate_scheduler(m, sched);
  return sched;
}

std::string serialize_scheduler(const WeightBasedScheduler& sched, const Mdp& m) {
  std::ostringstream out;
  out << "bound " << sched.bound << '\n';
  for (const auto& [key, d] : sched.table) {
    out << "at " << m.state_name(key.state) << ' ' << key.weight << " choose "
        << format_distribution(m, key.state, d) << '\n';
  }
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (s == m.goal()) continue;
    out << "tail " << m.state_name(s) << " choose " << format_distribution(m, s, sched.tail.choice.at(s))
        << '\n';
  }
  return out.str();
}

WeightBasedScheduler as_weight_based(const MemorylessScheduler& tail) {
  WeightBasedScheduler out;
  out.tail = tail;
  return out;
}

}  // namespace varpen
