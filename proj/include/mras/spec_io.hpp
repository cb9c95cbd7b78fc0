#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mras/maxsat.hpp"
#include "mras/mra.hpp"

namespace mras {

// Positioned diagnostic for the text formats. Lines and columns are 1-based;
// 0 means "not applicable".
struct ParseError : Error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_ = 0, int col_ = 0)
      : Error(format(msg, line_, col_)), line(line_), col(col_) {}

 private:
  static std::string format(const std::string& msg, int line, int col);
};

struct MalformedOutputError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// system documents (.mra)
//
//   # comment
//   agents: a1 a2 a3
//   resource_types:
//     t1 price=1 count=2
//     t2 price=2 instances=1,2      # sparse form, used by pruned systems
//   agent_price: 5                  # optional; required for unowned goals
//   goals:
//     owner=a1 types=t1,t2 period=0 deadline=4
//
// Unowned goals drop the owner= key. Resource instances are named
// <type>#<i>; the positional aliases r1..rN follow declaration order.
// ---------------------------------------------------------------------------

Mra parse_mra(const std::string& text);
std::string emit_mra(const Mra& mra);

// ---------------------------------------------------------------------------
// schedule documents (.sched)
//
//   schedule:
//     a1: request t3#1 | request t1#1 | idle
//     a2: idle | release_all | idle
//
// One row per agent, steps separated by '|'. Rows must agree in length and
// cover every agent of the system.
// ---------------------------------------------------------------------------

Schedule parse_schedule(const std::string& text, const Mra& mra);
std::string emit_schedule(const Mra& mra, const Schedule& schedule);

// Human-readable replay report: the schedule, every state of the run, per-
// goal verdicts, costs, and used/unused component lists. Byte-deterministic.
std::string emit_run_report(const Mra& mra, const Schedule& schedule, const Run& run);

// ---------------------------------------------------------------------------
// WCNF
// ---------------------------------------------------------------------------

struct ParsedWcnf {
  int num_vars = 0;
  std::vector<Clause> hard;
  std::vector<std::pair<Clause, Weight>> soft;
};

// Classic: "p wcnf V C TOP" header, hard clauses carry weight TOP with
// TOP = 1 + sum of soft weights. 2022: no header, hard lines start with 'h'.
std::string emit_wcnf(const MaxSatInstance& inst, WcnfFormat format);

// Accepts both formats (a "p wcnf" header selects classic).
ParsedWcnf parse_wcnf(const std::string& text);

// Conversion for solving; throws NotUnitSoftError if a soft clause is not a
// unit positive literal, or carries weight 0.
MaxSatInstance to_maxsat(const ParsedWcnf& parsed);

// ---------------------------------------------------------------------------
// Max-SAT solver stdout ("s ..." / "o ..." / "v ..." lines)
// ---------------------------------------------------------------------------

enum class SolverStatus { OptimumFound, Unsatisfiable, Unknown };

struct SolverVerdict {
  SolverStatus status = SolverStatus::Unknown;
  std::vector<bool> model;          // 1..var_count, filled for OptimumFound
  std::optional<Weight> objective;  // last "o" line, informational only
};

// "v" payloads may be signed DIMACS literals or one contiguous 0/1 string
// (variable i true iff digit i is '1'); the binary reading applies when all
// tokens consist of 0/1 digits and the digit count equals var_count.
// Variables a literal list leaves unmentioned default to false. Throws
// MalformedOutputError when no "s" status line is present.
SolverVerdict parse_solver_output(const std::string& text, int var_count);

// Renders a result in the same dialect (literal-list "v" line).
std::string emit_solver_output(const MaxSatResult& result, int num_vars);

// ---------------------------------------------------------------------------
// small file helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);   // throws Error on failure
void write_file(const std::string& path, const std::string& text);

}  // namespace mras
