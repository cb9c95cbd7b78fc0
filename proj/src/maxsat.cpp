#include "mras/maxsat.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "mras/spec_io.hpp"

namespace mras {

namespace {

void check_softs(const MaxSatInstance& inst) {
  std::unordered_set<Lit> seen;
  for (const SoftUnit& s : inst.softs) {
    if (s.lit <= 0)
      throw NotUnitSoftError("soft clauses must be positive unit literals");
    if (s.weight == 0) throw NotUnitSoftError("soft clause with weight 0");
    if (!seen.insert(s.lit).second)
      throw NotUnitSoftError("duplicate soft literal " + std::to_string(s.lit));
  }
}

Weight model_weight(const std::vector<SoftUnit>& softs, const std::vector<bool>& model) {
  Weight w = 0;
  for (const SoftUnit& s : softs)
    if (s.lit < static_cast<Lit>(model.size()) && model[s.lit]) w += s.weight;
  return w;
}

}  // namespace

MaxSatResult maxsat_builtin(const MaxSatInstance& inst) {
  check_softs(inst);
  const int m = static_cast<int>(inst.softs.size());
  if (m > 62)
    throw TooLargeError("builtin optimizer handles at most 62 soft literals, got " +
                        std::to_string(m));

  SatSolver solver(inst.hard.num_vars);
  for (const Clause& c : inst.hard.clauses) solver.add_clause(c);
  for (const SoftUnit& s : inst.softs) solver.ensure_vars(s.lit);
  if (!solver.solve()) return std::nullopt;

  const Weight total = inst.total_soft_weight();
  if (m == 0) return MaxSatSolution{solver.model(), 0, 0};

  std::unordered_map<Lit, int> soft_index;
  for (int j = 0; j < m; ++j) soft_index[inst.softs[j].lit] = j;

  // Subsets of soft literals, visited in decreasing total weight; among
  // equal weights the larger bitmask (later-declared indicators included)
  // goes first. Since every proper superset weighs strictly more, the first
  // satisfiable subset popped is the optimum, and because all of its
  // supersets were refuted first, its model cannot satisfy any extra soft.
  using Entry = std::pair<Weight, std::uint64_t>;
  std::priority_queue<Entry> frontier;
  std::unordered_set<std::uint64_t> queued;
  std::vector<std::uint64_t> cores;

  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  frontier.push({total, full});
  queued.insert(full);

  while (!frontier.empty()) {
    auto [weight, mask] = frontier.top();
    frontier.pop();

    bool refuted = false;
    for (std::uint64_t core : cores) {
      if ((mask & core) == core) {
        refuted = true;
        break;
      }
    }
    if (!refuted) {
      std::vector<Lit> assumptions;
      for (int j = 0; j < m; ++j)
        if (mask >> j & 1) assumptions.push_back(inst.softs[j].lit);
      if (solver.solve(assumptions)) {
        const std::vector<bool>& model = solver.model();
        Weight achieved = model_weight(inst.softs, model);
        if (achieved != weight)
          throw Error("internal: optimal model weight " + std::to_string(achieved) +
                      " disagrees with its subset weight " + std::to_string(weight));
        return MaxSatSolution{model, achieved, total - achieved};
      }
      std::uint64_t core_mask = 0;
      for (Lit l : solver.conflict()) {
        auto it = soft_index.find(l);
        if (it != soft_index.end()) core_mask |= std::uint64_t{1} << it->second;
      }
      if (core_mask != 0) cores.push_back(core_mask);
    }
    for (int j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      std::uint64_t child = mask & ~(std::uint64_t{1} << j);
      if (queued.insert(child).second)
        frontier.push({weight - inst.softs[j].weight, child});
    }
  }
  throw Error("internal: soft-subset search exhausted; even the empty subset failed");
}

MaxSatResult maxsat_exhaustive(const MaxSatInstance& inst, int max_vars) {
  int n = inst.hard.num_vars;
  for (const Clause& c : inst.hard.clauses)
    for (Lit l : c) n = std::max(n, std::abs(l));
  for (const SoftUnit& s : inst.softs) n = std::max(n, std::abs(s.lit));
  if (n > max_vars)
    throw TooLargeError("exhaustive enumeration capped at " + std::to_string(max_vars) +
                        " variables, instance has " + std::to_string(n));

  const Weight total = inst.total_soft_weight();
  bool found = false;
  Weight best = 0;
  std::vector<bool> best_model;
  std::vector<bool> model(n + 1, false);
  // Counter bits map to variables with variable 1 most significant, so the
  // scan meets assignments in lexicographic order (false < true) and keeps
  // the first optimum it sees: the lexicographically least one.
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
    for (int v = 1; v <= n; ++v) model[v] = (i >> (n - v)) & 1;
    if (!satisfies(inst.hard.clauses, model)) continue;
    Weight achieved = model_weight(inst.softs, model);
    if (!found || achieved > best) {
      found = true;
      best = achieved;
      best_model = model;
    }
  }
  if (!found) return std::nullopt;
  return MaxSatSolution{std::move(best_model), best, total - best};
}

MaxSatResult maxsat_external(const MaxSatInstance& inst, const std::string& solver_cmd,
                             WcnfFormat format) {
  namespace fs = std::filesystem;
  std::string path =
      (fs::temp_directory_path() / "mras_XXXXXX.wcnf").string();
  int fd = mkstemps(path.data(), 5);
  if (fd < 0) throw SolverSpawnError("cannot create temporary WCNF file");
  {
    std::string text = emit_wcnf(inst, format);
    std::size_t off = 0;
    while (off < text.size()) {
      ssize_t n = write(fd, text.data() + off, text.size() - off);
      if (n <= 0) {
        close(fd);
        unlink(path.c_str());
        throw SolverSpawnError("cannot write temporary WCNF file");
      }
      off += static_cast<std::size_t>(n);
    }
    close(fd);
  }

  std::string cmd = solver_cmd + " " + path;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    unlink(path.c_str());
    throw SolverSpawnError("cannot spawn solver command: " + solver_cmd);
  }
  std::string output;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    output.append(buf.data(), got);
  int rc = pclose(pipe);
  unlink(path.c_str());

  SolverVerdict verdict;
  try {
    verdict = parse_solver_output(output, inst.hard.num_vars);
  } catch (const MalformedOutputError&) {
    if (rc != 0)
      throw SolverSpawnError("solver command failed (exit status " +
                             std::to_string(rc) + ") without printing a status line: " +
                             solver_cmd);
    throw;
  }

  switch (verdict.status) {
    case SolverStatus::Unsatisfiable:
      return std::nullopt;
    case SolverStatus::Unknown:
      throw MalformedOutputError("solver reported no optimum for: " + solver_cmd);
    case SolverStatus::OptimumFound:
      break;
  }
  if (!satisfies(inst.hard.clauses, verdict.model))
    throw ModelViolatesHardError(
        "solver model violates a hard clause (wrong format or unsound solver): " +
        solver_cmd);
  Weight achieved = model_weight(inst.softs, verdict.model);
  return MaxSatSolution{std::move(verdict.model), achieved,
                        inst.total_soft_weight() - achieved};
}

}  // namespace mras
