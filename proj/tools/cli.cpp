#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "varpen/errors.hpp"
#include "varpen/expectation.hpp"
#include "varpen/gadget.hpp"
#include "varpen/mdp_io.hpp"
#include "varpen/saturation.hpp"
#include "varpen/simulate.hpp"
#include "varpen/variance.hpp"
#include "varpen/vpe.hpp"

namespace varpen::cli {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroEcPresent:
    case ErrorKind::InfiniteExpectation:
    case ErrorKind::EndComponentPresent:
    case ErrorKind::NegativeWeight:
    case ErrorKind::StepLimitExceeded:
      return kUnsupported;
    default:
      return kInputError;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  f << content;
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) throw Error(ErrorKind::ParseError, "empty entry in list '" + text + "'");
    out.push_back(parse_rational(token));
  }
  return out;
}

std::string action_list(const Mdp& m, StateId s, const std::vector<ActionId>& actions) {
  std::string out;
  for (ActionId a : actions) {
    if (!out.empty()) out += ',';
    out += m.action(s, a).label;
  }
  return out;
}

void print_choices(std::ostream& out, const Mdp& m, const WeightBasedScheduler& sched) {
  for (const auto& [sw, d] : sched.table) {
    out << "choose " << m.state_name(sw.state) << ' ' << sw.weight << ' ' << m.action(sw.state, d.front().action).label
        << '\n';
  }
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (s == m.goal()) continue;
    out << "tail " << m.state_name(s) << ' ' << m.action(s, sched.tail.action_at(s)).label << '\n';
  }
}

struct Options {
  std::string file;
  bool max = false;
  bool min = false;
  std::string lambda;
  std::optional<std::uint64_t> bound;
  bool minimize_expectation = false;
  std::optional<std::string> threshold;
  std::optional<std::string> out_path;
  std::optional<std::string> frontier_csv_path;
  std::string scheduler_path;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string lambdas;
  std::uint64_t target = 0;
  unsigned jobs = 1;
};

Direction direction_of(const Options& o) {
  if (o.max == o.min) throw Error(ErrorKind::InvalidArgument, "pass exactly one of --max and --min");
  return o.max ? Direction::Maximize : Direction::Minimize;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  std::size_t actions = 0;
  for (StateId s = 0; s < m.num_states(); ++s) actions += m.num_actions(s);
  out << "ok: " << m.num_states() << " states, " << actions << " actions\n";
  out << "init " << m.state_name(m.init()) << ", goal " << m.state_name(m.goal()) << '\n';
  return kOk;
}

int cmd_expect(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  const auto sol = solve_expectation(m, direction_of(o));
  out << "direction " << (sol.direction == Direction::Maximize ? "max" : "min") << '\n';
  for (StateId s = 0; s < m.num_states(); ++s) {
    out << "state " << m.state_name(s) << ": " << format_exact(sol.values[s]);
    if (s != m.goal()) out << " via " << action_list(m, s, sol.optimal_actions[s]);
    out << '\n';
  }
  return kOk;
}

int cmd_varmin(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  const auto sol = min_variance_among_optimal(m, direction_of(o));
  out << "direction " << (sol.direction == Direction::Maximize ? "max" : "min") << '\n';
  for (StateId s = 0; s < m.num_states(); ++s) {
    out << "state " << m.state_name(s) << ": e = " << format_exact(sol.expectation[s])
        << ", V = " << format_exact(sol.variance[s]) << ", q = " << format_exact(sol.second_moment[s]);
    if (s != m.goal()) out << ", choose " << m.action(s, sol.scheduler.action_at(s)).label;
    out << '\n';
  }
  if (o.out_path) write_file(*o.out_path, serialize_scheduler(as_weight_based(sol.scheduler), m));
  return kOk;
}

int cmd_saturation(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  const auto c = saturation_point(m, parse_rational(o.lambda));
  out << "n = " << c.n << '\n';
  out << "W = " << c.W << '\n';
  out << "eps = " << format_exact(c.eps) << '\n';
  if (c.delta) {
    out << "delta = " << format_exact(*c.delta) << '\n';
  } else {
    out << "delta = none (every action is expectation-minimal)\n";
  }
  out << "U1 = " << format_exact(c.U1) << '\n';
  out << "U2 = " << format_exact(c.U2) << '\n';
  out << "b_half = " << format_exact(c.b_half) << '\n';
  out << "B_half = " << format_exact(c.B_half) << '\n';
  out << "K = " << c.K.get_str() << '\n';
  return kOk;
}

void print_report(std::ostream& out, const Mdp& m, const VpeReport& r, const VpeSolver& solver) {
  out << "vpe = " << format_exact(r.value) << '\n';
  out << "expectation = " << format_exact(r.moments.expectation) << '\n';
  out << "variance = " << format_exact(r.moments.variance) << '\n';
  if (r.objective == VpeObjective::MinimizeExpectation) out << "objective = -expectation - lambda*variance\n";
  out << "bound = " << r.bound_used << '\n';
  out << "saturation K = " << solver.saturation().K.get_str() << '\n';
  out << "exact = " << (r.exact ? "yes" : "no (lower bound)") << '\n';
  print_choices(out, m, r.scheduler);
}

int cmd_vpe(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  const VpeSolver solver(m, parse_rational(o.lambda));
  VpeOptions vo;
  vo.bound = o.bound;
  vo.jobs = o.jobs;
  if (o.minimize_expectation) vo.objective = VpeObjective::MinimizeExpectation;
  std::optional<Rational> theta;
  if (o.threshold) theta = parse_rational(*o.threshold);

  const VpeReport r = solver.maximize(vo);
  print_report(out, m, r, solver);
  if (o.out_path) write_file(*o.out_path, serialize_scheduler(r.scheduler, m));
  if (o.frontier_csv_path) {
    write_file(*o.frontier_csv_path,
               frontier_csv({{r.lambda, r.moments.expectation, r.moments.variance, r.value}}));
  }
  if (!theta) return kOk;
  out << "threshold " << theta->to_string() << ": ";
  if (r.value >= *theta) {
    out << "holds\n";
    return kOk;
  }
  if (r.exact) {
    out << "fails\n";
    return kThresholdFails;
  }
  out << "undecided (lower bound " << r.value.to_string() << " at bound " << r.bound_used << ")\n";
  return kLowerBoundOnly;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  const VpeSolver solver(m, parse_rational(o.lambda));
  const auto sched = parse_scheduler(read_text_file(o.scheduler_path), m);
  const VpeReport r = solver.evaluate(sched);
  out << "vpe = " << format_exact(r.value) << '\n';
  out << "expectation = " << format_exact(r.moments.expectation) << '\n';
  out << "variance = " << format_exact(r.moments.variance) << '\n';
  out << "bound = " << r.bound_used << '\n';
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  const auto sched = parse_scheduler(read_text_file(o.scheduler_path), m);
  SimulationOptions so;
  so.samples = o.samples;
  so.seed = o.seed;
  so.jobs = o.jobs;
  const auto s = simulate(m, sched, so);
  out << "rng " << kSimulationRng << " seed " << o.seed << '\n';
  out << "samples = " << s.samples << '\n';
  out << "mean = " << format_exact(s.mean) << '\n';
  out << "variance = " << format_exact(s.variance) << '\n';
  out << "min = " << s.min << '\n';
  out << "max = " << s.max << '\n';
  out << histogram_csv(s);
  return kOk;
}

int cmd_frontier(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  VpeOptions vo;
  vo.bound = o.bound;
  vo.jobs = o.jobs;
  const auto lambdas = o.lambdas.empty() ? std::vector<Rational>{} : parse_list(o.lambdas);
  out << frontier_csv(frontier(m, lambdas, vo));
  return kOk;
}

int cmd_gadget(const Options& o, std::ostream& out) {
  const Mdp m = load_mdp(o.file);
  const auto g = build_gadget(m, o.target);
  write_file(*o.out_path, serialize_mdp(g.mdp));
  out << "lambda " << g.lambda.to_string() << '\n';
  out << "theta " << g.theta.to_string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact expectation, variance and variance-penalized expectation for weighted MDPs", "varpen"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--jobs", o.jobs, "Worker threads for enumeration and simulation")->check(CLI::PositiveNumber);

  std::function<int(const Options&, std::ostream&)> handler;
  auto command = [&](const std::string& name, const std::string& help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("FILE", o.file, "Model file")->required();
    sub->callback([&handler, fn] { handler = fn; });
    return sub;
  };
  auto direction_flags = [&](CLI::App* sub) {
    auto* mx = sub->add_flag("--max", o.max, "Maximize the expectation");
    auto* mn = sub->add_flag("--min", o.min, "Minimize the expectation");
    mx->excludes(mn);
  };

  command("validate", "Parse and validate a model", cmd_validate);

  direction_flags(command("expect", "Optimal expected accumulated weight", cmd_expect));

  auto* varmin = command("varmin", "Variance-minimal scheduler among expectation-optimal ones", cmd_varmin);
  direction_flags(varmin);
  varmin->add_option("--out", o.out_path, "Write the scheduler file here");

  command("saturation", "Saturation constants", cmd_saturation)
      ->add_option("--lambda", o.lambda, "Risk parameter")
      ->required();

  auto* vpe = command("vpe", "Maximal variance-penalized expectation", cmd_vpe);
  vpe->add_option("--lambda", o.lambda, "Risk parameter")->required();
  vpe->add_option("--bound", o.bound, "Weight bound (default: the saturation point)");
  vpe->add_flag("--minimize-expectation", o.minimize_expectation, "Optimize -E - lambda*V");
  vpe->add_option("--threshold", o.threshold, "Decide whether the optimum reaches this value");
  vpe->add_option("--out", o.out_path, "Write the optimal scheduler here");
  vpe->add_option("--emit-frontier-csv", o.frontier_csv_path, "Write a lambda,expectation,variance,vpe row");

  auto* eval = command("eval", "VPE of a given scheduler", cmd_eval);
  eval->add_option("--lambda", o.lambda, "Risk parameter")->required();
  eval->add_option("--scheduler", o.scheduler_path, "Scheduler file")->required();

  auto* sim = command("simulate", "Monte Carlo runs of a scheduler", cmd_simulate);
  sim->add_option("--scheduler", o.scheduler_path, "Scheduler file")->required();
  sim->add_option("--samples", o.samples, "Number of runs")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "Seed")->required();

  auto* front = command("frontier", "VPE optimum for several lambdas", cmd_frontier);
  front->add_option("--lambdas", o.lambdas, "Comma-separated risk parameters")->required();
  front->add_option("--bound", o.bound, "Weight bound (default: the saturation point)");

  auto* gadget = command("gadget", "Hardness gadget for an exact-weight target", cmd_gadget);
  gadget->add_option("--target", o.target, "Target weight")->required();
  gadget->add_option("--out", o.out_path, "Output model file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    return handler(o, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

}  // namespace varpen::cli
