#include "mras/sat.hpp"

#include <algorithm>
#include <cstdlib>

namespace mras {

namespace {

// Luby restart sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
std::uint64_t luby(std::uint64_t x) {
  std::uint64_t size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) / 2;
    --seq;
    x %= size;
  }
  return std::uint64_t{1} << seq;
}

constexpr std::uint64_t kRestartBase = 100;

}  // namespace

SatSolver::SatSolver(int num_vars) {
  assign_.resize(1, 0);
  level_.resize(1, 0);
  reason_.resize(1, -1);
  seen_.resize(1, 0);
  watches_.resize(2);
  ensure_vars(num_vars);
}

void SatSolver::ensure_vars(int num_vars) {
  while (static_cast<int>(assign_.size()) - 1 < num_vars) {
    assign_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
  }
}

void SatSolver::attach(int clause_id) {
  const Clause& c = clauses_[clause_id];
  watches_[widx(-c[0])].push_back(clause_id);
  watches_[widx(-c[1])].push_back(clause_id);
}

void SatSolver::enqueue(Lit l, int reason) {
  int v = std::abs(l);
  assign_[v] = l > 0 ? 1 : -1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

void SatSolver::cancel_until(int level) {
  if (decision_level() <= level) return;
  std::size_t lim = trail_lim_[level];
  for (std::size_t i = trail_.size(); i-- > lim;) {
    int v = std::abs(trail_[i]);
    assign_[v] = 0;
    reason_[v] = -1;
  }
  trail_.resize(lim);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
  branch_hint_ = 1;
}

void SatSolver::add_clause(Clause c) {
  cancel_until(0);
  if (!ok_) return;
  for (Lit l : c) ensure_vars(std::abs(l));
  // Sort by (variable, sign) so duplicates and complementary pairs are
  // adjacent.
  std::sort(c.begin(), c.end(), [](Lit a, Lit b) {
    int va = std::abs(a), vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  Clause out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i + 1 < c.size() && c[i + 1] == -c[i]) return;  // tautology
    if (i > 0 && c[i - 1] == c[i]) continue;
    signed char v = value(c[i]);
    if (v == 1) return;       // satisfied at level 0
    if (v == -1) continue;    // falsified at level 0
    out.push_back(c[i]);
  }
  if (out.empty()) {
    ok_ = false;
    return;
  }
  if (out.size() == 1) {
    enqueue(out[0], -1);
    if (propagate() != -1) ok_ = false;
    return;
  }
  clauses_.push_back(std::move(out));
  attach(static_cast<int>(clauses_.size()) - 1);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    ++stats_.propagations;
    auto& ws = watches_[widx(p)];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      int id = ws[i++];
      Clause& c = clauses_[id];
      if (c[0] == -p) std::swap(c[0], c[1]);
      // c[1] is the newly falsified watch.
      if (value(c[0]) == 1) {
        ws[j++] = id;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != -1) {
          std::swap(c[1], c[k]);
          watches_[widx(-c[1])].push_back(id);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = id;
      if (value(c[0]) == -1) {
        // Conflict: keep the remaining watchers and bail out.
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return id;
      }
      enqueue(c[0], id);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::analyze(int confl, Clause& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  std::vector<int> to_clear;
  int pathc = 0;
  Lit p = 0;
  std::size_t index = trail_.size();
  const int cur = decision_level();
  int cid = confl;
  do {
    const Clause& c = clauses_[cid];
    for (std::size_t k = (p == 0 ? 0 : 1); k < c.size(); ++k) {
      int v = std::abs(c[k]);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        to_clear.push_back(v);
        if (level_[v] >= cur)
          ++pathc;
        else
          learnt.push_back(c[k]);
      }
    }
    while (!seen_[std::abs(trail_[--index])]) {
    }
    p = trail_[index];
    cid = reason_[std::abs(p)];
    --pathc;
  } while (pathc > 0);
  learnt[0] = -p;

  if (learnt.size() == 1) {
    backtrack_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[std::abs(learnt[i])] > level_[std::abs(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[std::abs(learnt[1])];
  }
  for (int v : to_clear) seen_[v] = 0;
}

void SatSolver::analyze_final(Lit p, int /*num_assumptions*/) {
  conflict_.clear();
  conflict_.push_back(p);
  if (decision_level() == 0) return;  // hard clauses alone force the negation
  seen_[std::abs(p)] = 1;
  for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[0]);) {
    int v = std::abs(trail_[i]);
    if (!seen_[v]) continue;
    if (reason_[v] == -1) {
      // A decision below the branching region is always an assumption here.
      if (trail_[i] != p) conflict_.push_back(trail_[i]);
    } else {
      const Clause& c = clauses_[reason_[v]];
      for (std::size_t k = 1; k < c.size(); ++k)
        if (level_[std::abs(c[k])] > 0) seen_[std::abs(c[k])] = 1;
    }
    seen_[v] = 0;
  }
  seen_[std::abs(p)] = 0;
}

int SatSolver::pick_branch_var() {
  for (int v = branch_hint_; v <= num_vars(); ++v) {
    if (assign_[v] == 0) {
      branch_hint_ = v;
      return v;
    }
  }
  return 0;
}

bool SatSolver::solve(const std::vector<Lit>& assumptions) {
  model_.clear();
  conflict_.clear();
  cancel_until(0);
  if (!ok_) return false;
  for (Lit a : assumptions) ensure_vars(std::abs(a));
  if (propagate() != -1) {
    ok_ = false;
    return false;
  }

  std::uint64_t restarts_done = 0;
  std::uint64_t conflicts_here = 0;
  std::uint64_t budget = kRestartBase * luby(restarts_done);

  while (true) {
    int confl = propagate();
    if (confl != -1) {
      ++stats_.conflicts;
      ++conflicts_here;
      if (decision_level() == 0) {
        ok_ = false;  // contradiction independent of assumptions
        return false;
      }
      Clause learnt;
      int bt = 0;
      analyze(confl, learnt, bt);
      if (learnt.size() == 1) {
        cancel_until(0);
        enqueue(learnt[0], -1);
      } else {
        cancel_until(bt);
        clauses_.push_back(std::move(learnt));
        int id = static_cast<int>(clauses_.size()) - 1;
        attach(id);
        enqueue(clauses_[id][0], id);
      }
      if (conflicts_here >= budget) {
        ++stats_.restarts;
        ++restarts_done;
        conflicts_here = 0;
        budget = kRestartBase * luby(restarts_done);
        cancel_until(0);
      }
      continue;
    }

    // Assumption placement: one decision level per assumption, empty levels
    // for assumptions that already hold (keeps level == assumption index).
    bool placed = false;
    while (decision_level() < static_cast<int>(assumptions.size())) {
      Lit a = assumptions[decision_level()];
      signed char v = value(a);
      if (v == 1) {
        trail_lim_.push_back(trail_.size());
      } else if (v == -1) {
        analyze_final(a, static_cast<int>(assumptions.size()));
        return false;
      } else {
        trail_lim_.push_back(trail_.size());
        enqueue(a, -1);
        placed = true;
        break;
      }
    }
    if (placed) continue;

    int var = pick_branch_var();
    if (var == 0) {
      model_.assign(num_vars() + 1, false);
      for (int v = 1; v <= num_vars(); ++v) model_[v] = assign_[v] == 1;
      cancel_until(0);
      return true;
    }
    ++stats_.decisions;
    trail_lim_.push_back(trail_.size());
    enqueue(-var, -1);  // false first
  }
}

SatResult sat_decide(const CnfInstance& inst, const std::vector<Lit>& assumptions) {
  SatSolver solver(inst.num_vars);
  for (const Clause& c : inst.clauses) solver.add_clause(c);
  SatResult res;
  res.sat = solver.solve(assumptions);
  if (res.sat)
    res.model = solver.model();
  else
    res.core = solver.conflict();
  return res;
}

bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& assignment) {
  for (const Clause& c : clauses) {
    bool sat = false;
    for (Lit l : c) {
      int v = std::abs(l);
      if (v >= static_cast<int>(assignment.size())) continue;
      if ((l > 0) == assignment[v]) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace mras
