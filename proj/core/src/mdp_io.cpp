#include "varpen/mdp_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "text.hpp"
#include "varpen/errors.hpp"

namespace varpen {

namespace {

using detail::LineError;

std::int64_t parse_weight(std::string_view token, const LineError& err) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) err.syntax("malformed weight '" + std::string(token) + "'");
  return value;
}

}  // namespace

Mdp parse_mdp(std::string_view text) {
  Mdp::Builder builder;
  bool have_states = false;
  bool have_init = false;
  bool have_goal = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = detail::split_tokens(line);
    if (tokens.empty()) continue;
    const LineError err(line_no);
    const std::string_view keyword = tokens[0];

    if (keyword == "states") {
      if (have_states) err.syntax("duplicate 'states' line");
      if (tokens.size() < 2) err.syntax("'states' needs at least one state");
      have_states = true;
      try {
        for (std::size_t i = 1; i < tokens.size(); ++i) builder.add_state(std::string(tokens[i]));
      } catch (const Error& e) {
        err.rethrow(e);
      }
      continue;
    }
    if (!have_states) err.syntax("'" + std::string(keyword) + "' before 'states'");

    auto lookup = [&](std::string_view name) {
      try {
        return builder.state(name);
      } catch (const Error&) {
        err.syntax("unknown state '" + std::string(name) + "'");
      }
    };

    if (keyword == "init" || keyword == "goal") {
      if (tokens.size() != 2) err.syntax("'" + std::string(keyword) + "' takes exactly one state");
      const StateId s = lookup(tokens[1]);
      if (keyword == "init") {
        if (have_init) err.syntax("duplicate 'init' line");
        have_init = true;
        builder.set_init(s);
      } else {
        if (have_goal) err.syntax("duplicate 'goal' line");
        have_goal = true;
        builder.set_goal(s);
      }
    } else if (keyword == "trans") {
      if (tokens.size() < 6 || (tokens.size() - 4) % 2 != 0) {
        err.syntax("expected 'trans <src> <action> <weight> (<dst> <prob>)+'");
      }
      const StateId src = lookup(tokens[1]);
      Action action;
      action.label = std::string(tokens[2]);
      action.weight = parse_weight(tokens[3], err);
      Rational sum = 0;
      for (std::size_t i = 4; i < tokens.size(); i += 2) {
        Rational p;
        try {
          p = parse_rational(tokens[i + 1]);
        } catch (const Error& e) {
          err.rethrow(e);
        }
        sum += p;
        action.successors.push_back({lookup(tokens[i]), std::move(p)});
      }
      if (sum != Rational(1)) {
        err.invalid("probabilities of '" + std::string(tokens[1]) + " " + action.label +
                    "' sum to " + sum.to_string() + " (stochasticity)");
      }
      try {
        builder.add_action(src, std::move(action));
      } catch (const Error& e) {
        err.rethrow(e);
      }
    } else {
      err.syntax("unknown directive '" + std::string(keyword) + "'");
    }
  }

  if (!have_states) throw Error(ErrorKind::ParseError, "missing 'states' line");
  if (!have_init) throw Error(ErrorKind::ParseError, "missing 'init' line");
  if (!have_goal) throw Error(ErrorKind::ParseError, "missing 'goal' line");
  return std::move(builder).build();
}

std::string serialize_mdp(const Mdp& m) {
  std::ostringstream out;
  out << "states";
  for (StateId s = 0; s < m.num_states(); ++s) out << ' ' << m.state_name(s);
  out << "\ninit " << m.state_name(m.init()) << "\ngoal " << m.state_name(m.goal()) << '\n';
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& act : m.actions(s)) {
      out << "trans " << m.state_name(s) << ' ' << act.label << ' ' << act.weight;
      for (const auto& tr : act.successors) {
        out << ' ' << m.state_name(tr.target) << ' ' << tr.probability;
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Mdp load_mdp(const std::filesystem::path& path) { return parse_mdp(read_text_file(path)); }

}  // namespace varpen
