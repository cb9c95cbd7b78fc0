#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mras/encoder.hpp"
#include "mras/generator.hpp"
#include "mras/maxsat.hpp"
#include "mras/oracle.hpp"
#include "mras/spec_io.hpp"
#include "mras/strategy.hpp"

namespace {

using namespace mras;

OptMode parse_mode(const std::string& s) {
  if (s == "none") return OptMode::None;
  if (s == "res") return OptMode::Res;
  return OptMode::Mra;
}

WcnfFormat parse_format(const std::string& s) {
  return s == "2022" ? WcnfFormat::Wcnf2022 : WcnfFormat::Classic;
}

std::string default_wcnf_path(const std::string& input) {
  std::size_t dot = input.find_last_of('.');
  std::size_t slash = input.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return input + ".wcnf";
  return input.substr(0, dot) + ".wcnf";
}

struct SolverChoice {
  bool external = false;
  std::string cmd;
};

// --solver-cmd wins; an explicit `--solver builtin` beats the environment;
// otherwise MRAS_SOLVER_CMD selects an external solver when set. `solver`
// stays empty unless the flag was actually given.
SolverChoice resolve_solver(const std::string& solver, const std::string& solver_cmd) {
  if (!solver_cmd.empty()) return {true, solver_cmd};
  if (solver == "builtin") return {false, {}};
  const char* env = std::getenv("MRAS_SOLVER_CMD");
  if (env && *env) return {true, env};
  return {false, {}};
}

int run_synth(const std::string& input, OptMode mode, const SolverChoice& solver,
              WcnfFormat format, int horizon, const std::string& out) {
  Mra mra = parse_mra(read_file(input));
  Encoding enc = build(mra, {mode, horizon});

  MaxSatResult result = solver.external
                            ? maxsat_external(enc.formula, solver.cmd, format)
                            : maxsat_builtin(enc.formula);
  if (!result) {
    std::cout << "no winning strategy exists\n";
    return 10;
  }

  SynthesisResult res = make_result(result->assignment, enc);
  std::cout << emit_run_report(enc.mra, res.schedule, res.run);
  std::cout << "\nforfeited soft weight: " << result->forfeited << '\n';
  std::cout << "\npruned system (" << res.pruned.resource_count() << '/'
            << mra.resource_count() << " resources, " << res.pruned.agent_count()
            << '/' << mra.agent_count() << " agents)";
  if (!out.empty()) {
    write_file(out, emit_mra(res.pruned));
    std::cout << " written to " << out << '\n';
  } else {
    std::cout << ":\n" << emit_mra(res.pruned);
  }
  return 0;
}

int run_encode(const std::string& input, OptMode mode, WcnfFormat format, int horizon,
               const std::string& out) {
  Mra mra = parse_mra(read_file(input));
  Encoding enc = build(mra, {mode, horizon});
  std::string path = out.empty() ? default_wcnf_path(input) : out;
  write_file(path, emit_wcnf(enc.formula, format));
  std::cout << "variables: " << enc.formula.hard.num_vars << '\n'
            << "hard clauses: " << enc.formula.hard.clauses.size() << '\n'
            << "soft clauses: " << enc.formula.softs.size() << '\n'
            << "wrote " << path << '\n';
  return 0;
}

int run_simulate(const std::string& input, const std::string& sched_path) {
  Mra mra = parse_mra(read_file(input));
  Schedule schedule = parse_schedule(read_file(sched_path), mra);
  Run run = simulate(mra, schedule);
  std::cout << emit_run_report(mra, schedule, run);
  return 0;
}

int run_check(const std::string& input, const std::string& sched_path,
              long long bound) {
  Mra mra = parse_mra(read_file(input));
  Schedule schedule = parse_schedule(read_file(sched_path), mra);
  Run run = simulate(mra, schedule);
  std::cout << emit_run_report(mra, schedule, run);

  int latest = 0;
  for (const Goal& goal : mra.goals) latest = std::max(latest, goal.deadline);
  if (run.horizon() < latest) {
    std::cout << "\ncheck failed: run ends at t=" << run.horizon()
              << ", before the latest deadline " << latest << '\n';
    return 3;
  }
  if (!all_goals_satisfied(run, mra)) {
    std::cout << "\ncheck failed: not every goal is satisfied\n";
    return 3;
  }
  if (bound >= 0 && resource_cost(run, mra) > static_cast<Weight>(bound)) {
    std::cout << "\ncheck failed: resource cost " << resource_cost(run, mra)
              << " exceeds the bound " << bound << '\n';
    return 3;
  }
  std::cout << "\ncheck passed\n";
  return 0;
}

int run_oracle(const std::string& input, OptMode mode, std::uint64_t max_branching) {
  Mra mra = parse_mra(read_file(input));
  OracleLimits limits;
  limits.max_branching = max_branching;
  OracleResult result = oracle_optimum(mra, mode, limits);
  if (!result) {
    std::cout << "no winning strategy exists\n";
    return 10;
  }
  std::cout << "oracle optimum: " << result->min_cost << "\n\n"
            << emit_schedule(mra, result->witness);
  return 0;
}

int run_gen(const GenParams& params, const std::string& out) {
  Mra mra = generate(params);
  std::string text = emit_mra(mra);
  if (!out.empty()) {
    write_file(out, text);
    std::cout << "wrote " << out << '\n';
  } else {
    std::cout << text;
  }
  return 0;
}

int run_maxsat(const std::string& input) {
  ParsedWcnf parsed = parse_wcnf(read_file(input));
  MaxSatInstance inst = to_maxsat(parsed);
  MaxSatResult result = maxsat_builtin(inst);
  std::cout << emit_solver_output(result, parsed.num_vars);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-optimal winning-strategy synthesis for multi-agent resource allocation"};
  app.require_subcommand(1);

  std::string input, sched_path, out, opt = "res", solver, solver_cmd,
              wcnf_format = "classic";
  int horizon = -1;
  long long bound = -1;
  std::uint64_t max_branching = OracleLimits{}.max_branching;
  GenParams gen_params;

  auto add_opt = [&](CLI::App* cmd) {
    cmd->add_option("--opt", opt, "cost to minimize: none, res, or mra")
        ->check(CLI::IsMember({"none", "res", "mra"}));
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--wcnf-format", wcnf_format, "classic (p-header) or 2022 (h-lines)")
        ->check(CLI::IsMember({"classic", "2022"}));
  };

  CLI::App* synth = app.add_subcommand("synth", "synthesize a cost-optimal winning strategy");
  synth->add_option("input", input, "system file (.mra)")->required();
  add_opt(synth);
  synth->add_option("--solver", solver, "builtin")->check(CLI::IsMember({"builtin"}));
  synth->add_option("--solver-cmd", solver_cmd,
                    "external max-sat solver command (gets the .wcnf path appended)")
      ->excludes(synth->get_option("--solver"));
  add_format(synth);
  synth->add_option("--horizon", horizon, "override the horizon (default: latest deadline)");
  synth->add_option("--out", out, "write the pruned system here");

  CLI::App* encode = app.add_subcommand("encode", "emit the max-sat encoding as WCNF");
  encode->add_option("input", input, "system file (.mra)")->required();
  add_opt(encode);
  add_format(encode);
  encode->add_option("--horizon", horizon, "override the horizon");
  encode->add_option("--out", out, "output path (default: input with .wcnf)");

  CLI::App* simulate = app.add_subcommand("simulate", "replay a schedule and report the run");
  simulate->add_option("input", input, "system file (.mra)")->required();
  simulate->add_option("schedule", sched_path, "schedule file (.sched)")->required();

  CLI::App* check = app.add_subcommand("check", "replay and assert a winning run");
  check->add_option("input", input, "system file (.mra)")->required();
  check->add_option("schedule", sched_path, "schedule file (.sched)")->required();
  check->add_option("--bound", bound, "fail when the resource cost exceeds this");

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force ground-truth optimum");
  oracle->add_option("input", input, "system file (.mra)")->required();
  add_opt(oracle);
  oracle->add_option("--max-branching", max_branching,
                     "refuse when (2|Res|+2)^|Agt| exceeds this");

  CLI::App* gen = app.add_subcommand("gen", "generate a random benchmark system");
  gen->add_option("--agents", gen_params.agents, "number of agents");
  gen->add_option("--types", gen_params.types, "number of resource types");
  gen->add_option("--goal-types-min", gen_params.goal_types_min, "goal size lower bound");
  gen->add_option("--goal-types-max", gen_params.goal_types_max, "goal size upper bound");
  gen->add_option("--deadline-min", gen_params.deadline_min, "deadline lower bound");
  gen->add_option("--deadline-max", gen_params.deadline_max, "deadline upper bound");
  gen->add_option("--period", gen_params.period, "goal period");
  gen->add_flag("--general", gen_params.general, "unowned goals");
  gen->add_option("--agent-price", gen_params.agent_price, "agent price (general mode)");
  gen->add_option("--seed", gen_params.seed, "rng seed");
  gen->add_option("--out", out, "output path (default: stdout)");

  CLI::App* maxsat = app.add_subcommand(
      "maxsat", "solve a WCNF file with the builtin optimizer (s/o/v output)");
  maxsat->add_option("input", input, "WCNF file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed())
      return run_synth(input, parse_mode(opt), resolve_solver(solver, solver_cmd),
                       parse_format(wcnf_format), horizon, out);
    if (encode->parsed())
      return run_encode(input, parse_mode(opt), parse_format(wcnf_format), horizon, out);
    if (simulate->parsed()) return run_simulate(input, sched_path);
    if (check->parsed()) return run_check(input, sched_path, bound);
    if (oracle->parsed()) return run_oracle(input, parse_mode(opt), max_branching);
    if (gen->parsed()) return run_gen(gen_params, out);
    if (maxsat->parsed()) return run_maxsat(input);
  } catch (const InconsistentModelError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  } catch (const NonUniformError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  } catch (const PruneBrokeWinningError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
