#pragma once

#include <string>
#include <vector>

#include "mras/maxsat.hpp"
#include "mras/mra.hpp"

namespace mras {

enum class OptMode { None, Res, Mra };

struct DeadlineExceedsHorizonError : Error {
  using Error::Error;
};

// Every propositional variable has a semantic key so assignments can be
// decoded (and debugged) without guessing indices.
struct VarKey {
  enum class Kind : std::uint8_t {
    Own,      // a = resource, b = step, c = owner (0 = free)
    Act,      // a = agent, b = step, c = action index
    NuRes,    // a = resource         — true iff never allocated
    NuAgt,    // a = agent            — true iff never allocates
    Eq,       // a = step, b = step   — states identical
    SoleReq,  // a = resource, b = step, c = agent — unique requester
    PairOwn,  // a = resource, b = step, c = step, d = owner — same owner at both
    SameOwn,  // a = resource, b = step, c = step — resource agrees at both
    Window,   // a = goal, b = agent, c = window start — goal window holds
    Hold,     // a = resource, b = agent, c = start, d = period — held throughout
  };
  Kind kind;
  int a = -1, b = -1, c = -1, d = -1;
};

class VarPool {
 public:
  // Allocates the next variable index (starting at 1) for the key.
  int fresh(const VarKey& key);
  int num_vars() const { return static_cast<int>(keys_.size()) - 1; }
  const VarKey& key(int var) const { return keys_[var]; }
  std::string describe(int var, const Mra& mra) const;

 private:
  std::vector<VarKey> keys_{VarKey{}};  // index 0 unused
};

struct EncodeOptions {
  OptMode mode = OptMode::Res;
  int horizon_override = -1;  // -1: use the system's max deadline
};

// A built formula plus everything needed to decode its models: the variable
// registry and dense index tables for the Own/Act/Nu families.
struct Encoding {
  Mra mra;
  EncodeOptions options;
  int horizon = 0;

  MaxSatInstance formula;
  VarPool pool;

  // own[r][t][owner], t in 0..k, owner in 0..n (0 = free)
  std::vector<std::vector<std::vector<int>>> own;
  // act[a-1][t][action index], t in 0..k-1
  std::vector<std::vector<std::vector<int>>> act;
  std::vector<int> nu_res;  // [r], 0 when absent (mode none / price 0)
  std::vector<int> nu_agt;  // [a-1], 0 when absent

  // Action indices: 0..R-1 request r, R..2R-1 release r, 2R release-all,
  // 2R+1 idle.
  int action_count() const { return 2 * mra.resource_count() + 2; }
  int action_index(const Action& act) const;
  Action action_of(int index) const;
};

// The sub-encoders below append clauses to enc.formula.hard and allocate
// variables as needed; each returns the number of clauses it added. They are
// exposed separately so tests can measure them; build() runs the applicable
// ones in order.

// One-hot owner per (resource, step) plus the all-free initial state.
int encode_state_space(Encoding& enc);

// One-hot action per (agent, step) plus Def-4 availability: requests need a
// free resource, releases need ownership, release-all needs some holding.
int encode_actions_and_protocol(Encoding& enc);

// Def-6 transition rules via sole-requester indicators: a free resource goes
// to its unique requester and stays free under contention; releases free it;
// otherwise ownership persists.
int encode_evolution(Encoding& enc);

// Path uniformity: for every step pair, a chain of indicator definitions
// (same owner per resource -> states equal) forces equal states to repeat
// the same action profile.
int encode_uniformity(Encoding& enc);

// Goal windows, one clause per goal over window indicators (flattened to
// plain ownership literals where the window is a single disjunction);
// general-mode goals take the union over agents. Throws
// DeadlineExceedsHorizonError if a deadline exceeds the horizon.
int encode_goals(Encoding& enc);

// nu_r <-> resource free at every step; plus "never-used resources are never
// requested", which keeps pruned systems replayable (contested requests on a
// never-won resource would dangle after pruning; rerouting every such
// requester to idle provably preserves the run's states).
int encode_aux_res(Encoding& enc);

// nu_a <-> agent holds nothing at every step; plus "unused agents idle",
// for the same pruning-soundness reason as above.
int encode_aux_agt(Encoding& enc);

// Soft units (nu_r, price) and, in Mra mode, (nu_a, agent price).
// Zero-priced components get no soft clause — using them is free.
int encode_soft(Encoding& enc);

// F(none)  = state space ∧ protocol ∧ evolution ∧ uniformity ∧ goals
// F(res)   = F(none) ∧ aux_res with resource softs
// F(mra)   = F(res) ∧ aux_agt with agent softs     (general mode only)
Encoding build(const Mra& mra, const EncodeOptions& options);

}  // namespace mras
