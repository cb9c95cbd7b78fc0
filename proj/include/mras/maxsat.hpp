#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mras/sat.hpp"

namespace mras {

enum class WcnfFormat { Classic, Wcnf2022 };

// Soft clauses are unit positive literals — the shape every formula built by
// the encoder has (one indicator per priced component).
struct SoftUnit {
  Lit lit = 0;
  Weight weight = 0;
};

struct MaxSatInstance {
  CnfInstance hard;
  std::vector<SoftUnit> softs;

  Weight total_soft_weight() const {
    Weight w = 0;
    for (const SoftUnit& s : softs) w += s.weight;
    return w;
  }
};

struct MaxSatSolution {
  std::vector<bool> assignment;  // 1..num_vars
  Weight achieved = 0;           // satisfied soft weight
  Weight forfeited = 0;          // achieved + forfeited = total soft weight
};

// Empty = hard clauses alone are unsatisfiable.
using MaxSatResult = std::optional<MaxSatSolution>;

struct NotUnitSoftError : Error {
  using Error::Error;
};

// External-solver bridge failures.
struct SolverSpawnError : Error {
  using Error::Error;
};
struct ModelViolatesHardError : Error {
  using Error::Error;
};

// Exact optimum, specialized for unit positive softs: walks the soft-literal
// subset lattice in decreasing total-weight order (ties: prefer keeping
// later-declared indicators true), asking one incremental SAT query per
// subset with the subset as assumptions. The first satisfiable subset is
// optimal, because every superset weighs strictly more and was asked first.
// Unsatisfiable cores prune whole sublattices. Throws NotUnitSoftError on
// malformed softs and TooLargeError past 62 soft literals.
MaxSatResult maxsat_builtin(const MaxSatInstance& inst);

// Reference optimum by full truth-table enumeration; ties broken toward the
// lexicographically-least assignment (variable 1 most significant, false <
// true). Throws TooLargeError above `max_vars`.
MaxSatResult maxsat_exhaustive(const MaxSatInstance& inst, int max_vars = 26);

// Writes the instance to a temporary WCNF file, runs `solver_cmd <file>`
// through the shell, and parses the verdict from its standard output. The
// returned model is re-checked against every hard clause and the weights are
// recomputed from the model — the solver's "o" line is never trusted.
// Throws SolverSpawnError, MalformedOutputError (from spec_io) or
// ModelViolatesHardError.
MaxSatResult maxsat_external(const MaxSatInstance& inst,
                             const std::string& solver_cmd,
                             WcnfFormat format = WcnfFormat::Classic);

}  // namespace mras
