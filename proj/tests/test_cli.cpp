#include <cstdio>
#include <string>

#include "doctest.h"
#include "helpers.hpp"

using namespace mras::test;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

// run the tool with stderr folded into stdout
CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(MRAS_BIN_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, got);
  int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string mex() { return fixture_path("mex.mra"); }
std::string mex_general() { return fixture_path("mex_general.mra"); }

}  // namespace

TEST_CASE("synth finds the cost-7 strategy and prunes the leftovers") {
  CliResult r = run_cli("synth " + mex() + " --opt res");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "resource cost: 7"));
  CHECK(contains(r.out, "unused resources: t2#2 t3#2"));
  CHECK(contains(r.out, "forfeited soft weight: 7"));
  CHECK(contains(r.out, "pruned system (4/6 resources, 3/3 agents)"));

  // identical invocations produce identical bytes
  CHECK(run_cli("synth " + mex() + " --opt res").out == r.out);
}

TEST_CASE("synth in mra mode bills the agents") {
  CliResult r = run_cli("synth " + mex_general() + " --opt mra");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "resource cost: 6"));
  CHECK(contains(r.out, "agent cost: 10"));
  CHECK(contains(r.out, "total cost: 16"));
  CHECK(contains(r.out, "2/3 agents"));
}

TEST_CASE("unwinnable systems exit 10 with the fixed message") {
  CliResult r = run_cli("synth " + fixture_path("unwinnable.mra"));
  CHECK(r.code == 10);
  CHECK(r.out == "no winning strategy exists\n");
}

TEST_CASE("simulate replays a schedule file") {
  CliResult r = run_cli("simulate " + mex() + " " + fixture_path("table2.sched"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "resource cost: 7"));
  CHECK(contains(r.out, "unused resources: t2#2 t3#2"));
}

TEST_CASE("check gates on winning and on the bound") {
  std::string args = "check " + mex() + " " + fixture_path("table2.sched");
  CHECK(run_cli(args).code == 0);
  CHECK(contains(run_cli(args).out, "check passed"));
  CHECK(run_cli(args + " --bound 7").code == 0);

  CliResult over = run_cli(args + " --bound 6");
  CHECK(over.code == 3);
  CHECK(contains(over.out, "check failed"));
}

TEST_CASE("check rejects a losing schedule") {
  // the general-variant schedule leaves a3's goal unsatisfied on the owned
  // system
  CliResult r = run_cli("check " + mex() + " " + fixture_path("table3.sched"));
  CHECK(r.code == 3);
  CHECK(contains(r.out, "check failed"));
}

TEST_CASE("encode writes solvable wcnf in both formats") {
  CliResult enc = run_cli("encode " + mex() + " --opt res --out /tmp/mras_cli_c.wcnf");
  CHECK(enc.code == 0);
  CHECK(contains(enc.out, "variables: 562"));
  CHECK(contains(enc.out, "hard clauses: 3114"));
  CHECK(contains(enc.out, "soft clauses: 6"));

  CliResult sol = run_cli("maxsat /tmp/mras_cli_c.wcnf");
  CHECK(sol.code == 0);
  CHECK(contains(sol.out, "s OPTIMUM FOUND"));
  CHECK(contains(sol.out, "o 7"));

  run_cli("encode " + mex() + " --opt res --wcnf-format 2022 --out /tmp/mras_cli_m.wcnf");
  CliResult sol2 = run_cli("maxsat /tmp/mras_cli_m.wcnf");
  CHECK(contains(sol2.out, "o 7"));
}

TEST_CASE("the tool can serve as its own external solver") {
  std::string self = std::string(MRAS_BIN_PATH) + " maxsat";
  CliResult ext =
      run_cli("synth " + mex() + " --opt res --solver-cmd '" + self + "'");
  CliResult builtin = run_cli("synth " + mex() + " --opt res");
  CHECK(ext.code == 0);
  CHECK(ext.out == builtin.out);
}

TEST_CASE("the solver environment variable is a default, not an override") {
  std::string cmd = std::string("MRAS_SOLVER_CMD='") + MRAS_BIN_PATH +
                    " maxsat' " + MRAS_BIN_PATH + " synth " + mex() + " --opt res 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  CHECK(pclose(pipe) == 0);
  CHECK(contains(out, "resource cost: 7"));

  // an explicit --solver builtin wins over a broken environment default
  std::string forced = std::string("MRAS_SOLVER_CMD='/no/such/solver' ") +
                       MRAS_BIN_PATH + " synth " + mex() + " --opt res --solver builtin 2>&1";
  pipe = popen(forced.c_str(), "r");
  REQUIRE(pipe != nullptr);
  out.clear();
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  CHECK(pclose(pipe) == 0);
  CHECK(contains(out, "resource cost: 7"));
}

TEST_CASE("oracle subcommand prints the optimum") {
  CliResult r = run_cli("oracle " + mex_general() + " --opt mra");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "oracle optimum: 16"));
  CHECK(contains(r.out, "schedule:"));
}

TEST_CASE("gen is deterministic per seed and varies across seeds") {
  CliResult a = run_cli("gen --seed 7 --agents 3 --types 2");
  CliResult b = run_cli("gen --seed 7 --agents 3 --types 2");
  CliResult c = run_cli("gen --seed 8 --agents 3 --types 2");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(contains(a.out, "agents: a1 a2 a3"));
}

TEST_CASE("input errors exit 2 with a diagnostic") {
  CliResult missing = run_cli("synth /no/such/file.mra");
  CHECK(missing.code == 2);
  CHECK(contains(missing.out, "error:"));

  mras::write_file("/tmp/mras_cli_bad.mra", "agents a1\n");
  CliResult bad = run_cli("synth /tmp/mras_cli_bad.mra");
  CHECK(bad.code == 2);
  CHECK(contains(bad.out, "error:"));

  CliResult flag = run_cli("synth " + mex() + " --opt bogus");
  CHECK(flag.code == 2);
}

TEST_CASE("horizon override flows through synth") {
  // deadline 4 goals cannot fit a 3-step horizon
  CliResult r = run_cli("synth " + mex() + " --horizon 3");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "error:"));

  CliResult wide = run_cli("synth " + mex() + " --horizon 6 --opt res");
  CHECK(wide.code == 0);
  CHECK(contains(wide.out, "resource cost: 7"));
}

TEST_CASE("help exits zero") {
  CHECK(run_cli("--help").code == 0);
  CHECK(contains(run_cli("synth --help").out, "--opt"));
}
