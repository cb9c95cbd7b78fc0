#pragma once

#include <cstdint>
#include <vector>

#include "mras/mra.hpp"

namespace mras {

// Literals are nonzero signed ints in DIMACS convention: +v / -v.
using Lit = int;
using Clause = std::vector<Lit>;

struct CnfInstance {
  int num_vars = 0;
  std::vector<Clause> clauses;
};

struct SatStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
};

// Conflict-driven clause-learning solver with two-watched-literal
// propagation, first-UIP learning, non-chronological backjumping and Luby
// restarts. Branching is pinned to "lowest-index unassigned variable, false
// first" so every query is reproducible bit for bit; learned clauses are
// kept forever, which keeps the procedure complete even across restarts.
//
// The solver is incremental: clauses may be added between solve() calls
// (never retracted) and each call may carry its own assumption literals.
class SatSolver {
 public:
  explicit SatSolver(int num_vars = 0);

  void ensure_vars(int num_vars);
  int num_vars() const { return static_cast<int>(assign_.size()) - 1; }

  // Adds a clause; duplicate literals are merged and tautologies dropped.
  // Adding the empty clause (or a unit contradicting level-0 knowledge)
  // makes the instance permanently unsatisfiable.
  void add_clause(Clause c);

  // Decides satisfiability under the given assumption literals. Returns
  // true and fills model() on SAT; returns false and fills conflict() —
  // a subset of the assumptions that is jointly unsatisfiable with the
  // clauses — on UNSAT.
  bool solve(const std::vector<Lit>& assumptions = {});

  // Complete assignment over variables 1..num_vars(); index 0 unused.
  const std::vector<bool>& model() const { return model_; }

  // Failed-assumption subset from the last unsatisfiable solve(). Empty
  // when the clauses alone are contradictory.
  const std::vector<Lit>& conflict() const { return conflict_; }

  const SatStats& stats() const { return stats_; }

 private:
  // Assignment values per variable: 0 unassigned, 1 true, -1 false.
  std::vector<signed char> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;  // clause id or -1
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal index
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  int branch_hint_ = 1;
  bool ok_ = true;

  std::vector<bool> model_;
  std::vector<Lit> conflict_;
  std::vector<char> seen_;
  SatStats stats_;

  static std::size_t widx(Lit l) {
    int v = l > 0 ? l : -l;
    return 2 * static_cast<std::size_t>(v) + (l < 0 ? 1 : 0);
  }
  signed char value(Lit l) const {
    signed char v = assign_[l > 0 ? l : -l];
    return l > 0 ? v : static_cast<signed char>(-v);
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(Lit l, int reason);
  int propagate();  // returns conflicting clause id or -1
  void attach(int clause_id);
  void cancel_until(int level);
  void analyze(int confl, Clause& learnt, int& backtrack_level);
  void analyze_final(Lit p, int num_assumptions);
  int pick_branch_var();
};

struct SatResult {
  bool sat = false;
  std::vector<bool> model;  // 1..num_vars when sat
  std::vector<Lit> core;    // failed assumptions when unsat under assumptions
};

// One-shot decision procedure over an instance.
SatResult sat_decide(const CnfInstance& inst, const std::vector<Lit>& assumptions = {});

// True iff the assignment (indexed 1..num_vars) satisfies every clause.
bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& assignment);

}  // namespace mras
