#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mras/encoder.hpp"
#include "mras/mra.hpp"

namespace mras {

// A hard-satisfying assignment that does not decode cleanly — one-hot
// violations or decoded states disagreeing with the replay — which can only
// mean an encoder defect.
struct InconsistentModelError : Error {
  using Error::Error;
};

struct NonUniformError : Error {
  using Error::Error;
};

// Pruning must never invalidate the schedule it was derived from; this guards
// the implementation.
struct PruneBrokeWinningError : Error {
  using Error::Error;
};

// The state->profile mapping realized on the decoded run. Partial by design:
// the encoding constrains nothing off the synthesized path.
using StrategyMap = std::map<State, ActionProfile>;

struct SynthesisResult {
  Schedule schedule;
  StrategyMap strategy;
  Run run;

  Weight resource_cost = 0;
  std::optional<Weight> agent_cost;  // set when the system prices agents
  Weight total_cost = 0;             // resource + agent (when priced)

  std::vector<int> used_resources, unused_resources;
  std::vector<int> used_agents, unused_agents;

  Mra pruned;
};

// Reads the Act one-hots of a hard-satisfying assignment into a schedule,
// replays it, and cross-checks every Own variable against the replayed
// states. Throws InconsistentModelError on any mismatch.
Schedule decode(const std::vector<bool>& assignment, const Encoding& enc);

// Maps each visited state to the profile taken there; throws
// NonUniformError if the same state occurs with two different profiles.
StrategyMap extract_strategy_map(const Schedule& schedule, const Run& run);

// Drops never-allocated resources; in Mra mode also drops never-allocating
// agents (agent-goal systems keep all agents — goals are bound to their
// owners). Types left without instances disappear and goal type indices are
// remapped. The surviving schedule is re-simulated and re-checked; a failure
// throws PruneBrokeWinningError.
Mra prune(const Mra& mra, const Run& run, OptMode mode, Schedule* schedule_out = nullptr);

// Bundles decode + strategy map + costs + prune for a winning assignment.
SynthesisResult make_result(const std::vector<bool>& assignment, const Encoding& enc);

}  // namespace mras
