#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mras {

using Weight = std::uint64_t;

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
  using Error::Error;
};

struct NotExecutableError : Error {
  int step = -1;   // -1 when no step context
  int agent = 0;   // offending agent, 1-based; 0 when unknown
  NotExecutableError(const std::string& msg, int step_ = -1, int agent_ = 0)
      : Error(msg), step(step_), agent(agent_) {}
};

struct HorizonTooShortError : Error {
  using Error::Error;
};

struct MissingAgentPriceError : Error {
  using Error::Error;
};

// Raised when an instance exceeds a configured size cap (exhaustive
// Max-SAT enumeration, brute-force strategy search).
struct TooLargeError : Error {
  using Error::Error;
};

// Agents are 1..n. Owner value 0 is the "unallocated" marker and is never a
// valid acting agent.
constexpr int kUnallocated = 0;

struct ResourceType {
  std::string name;
  Weight price = 0;
  // Instance labels, normally 1..count. Pruned systems keep the original
  // labels of the surviving instances, so this need not be contiguous.
  std::vector<int> instances;
};

// One concrete resource: the type it belongs to plus its instance label.
struct Resource {
  int type = 0;      // index into Mra::types
  int instance = 0;  // 1-based label within the type
};

struct Goal {
  std::optional<int> owner;   // 1-based agent; empty in general-goal mode
  std::vector<int> types;     // indices into Mra::types, no duplicates
  int period = 0;
  int deadline = 1;
};

struct Mra {
  std::vector<std::string> agent_names;  // index 0 names agent 1
  std::vector<ResourceType> types;
  std::vector<Resource> resources;       // flattened, declaration order
  std::vector<Goal> goals;
  std::optional<Weight> agent_price;

  int agent_count() const { return static_cast<int>(agent_names.size()); }
  int resource_count() const { return static_cast<int>(resources.size()); }
  Weight price(int r) const { return types[resources[r].type].price; }
  bool general_mode() const {
    return !goals.empty() && !goals.front().owner.has_value();
  }
  // "t2#1" style canonical name.
  std::string resource_name(int r) const;
  const std::string& agent_name(int a) const { return agent_names[a - 1]; }
  std::vector<int> resources_of_type(int type) const;

  // Resolves "t2#1" or the positional alias "r3". Returns -1 if unknown.
  int find_resource(const std::string& name) const;
  int find_agent(const std::string& name) const;  // 1-based, -1 if unknown
  int find_type(const std::string& name) const;   // 0-based, -1 if unknown
};

// Rebuilds Mra::resources from the per-type instance lists. Call after
// editing types directly; parse_mra and the generator do this for you.
void rebuild_resources(Mra& mra);

// Structural validation: nonempty agent/resource/goal sets, p <= d, goal
// types exist, no duplicate types inside a goal, uniform goal mode, agent
// price present in general mode. Throws ValidationError.
void validate(const Mra& mra);

enum class ActionKind : std::uint8_t { Idle, Request, Release, ReleaseAll };

struct Action {
  ActionKind kind = ActionKind::Idle;
  int resource = -1;  // for Request/Release

  static Action idle() { return {ActionKind::Idle, -1}; }
  static Action request(int r) { return {ActionKind::Request, r}; }
  static Action release(int r) { return {ActionKind::Release, r}; }
  static Action release_all() { return {ActionKind::ReleaseAll, -1}; }

  bool operator==(const Action&) const = default;
};

// Ownership map, index = resource id, value = 0 (free) or owning agent.
using State = std::vector<int>;

// One action per agent, index = agent - 1.
using ActionProfile = std::vector<Action>;

// Per-agent action rows for steps 0..k-1, index [agent - 1][t].
using Schedule = std::vector<std::vector<Action>>;

struct Run {
  std::vector<State> states;           // s_0 .. s_k
  std::vector<ActionProfile> profiles; // ap_0 .. ap_{k-1}

  int horizon() const { return static_cast<int>(profiles.size()); }
};

State initial_state(const Mra& mra);

// Latest goal deadline.
int horizon(const Mra& mra);

// Def-4 availability: request a free resource, release a held one,
// release-all when holding anything, idle always.
std::vector<Action> available_actions(const State& s, int agent, const Mra& mra);

bool action_available(const State& s, int agent, const Action& act, const Mra& mra);

bool is_executable(const State& s, const ActionProfile& ap, const Mra& mra);

// Deterministic successor. A free resource requested by exactly one agent is
// granted; contested requests leave it free; released resources become free;
// everything else persists. Throws NotExecutableError if ap violates the
// protocol in s.
State step(const State& s, const ActionProfile& ap, const Mra& mra);

// Replays a schedule from the initial state. The schedule must cover steps
// 0..k-1 for every agent; throws NotExecutableError (with step/agent) if a
// profile is not executable where it occurs.
Run simulate(const Mra& mra, const Schedule& schedule);

// Window semantics: there is a start t <= d - p such that for every type in
// the goal some single resource of that type is owned by `agent` at every
// instant t..t+p. Throws HorizonTooShortError if the run ends before d.
bool goal_satisfied(const Run& run, const Goal& goal, int agent, const Mra& mra);

// Agent-goal mode: every goal holds for its owner. General mode: every goal
// holds for some agent.
bool all_goals_satisfied(const Run& run, const Mra& mra);

// Sum of prices of resources allocated in at least one state of the run.
Weight resource_cost(const Run& run, const Mra& mra);

// Sum of the agent price over agents that ever hold a resource in the run.
// Requires mra.agent_price. Throws MissingAgentPriceError.
Weight agent_cost(const Run& run, const Mra& mra);

Weight mra_cost(const Run& run, const Mra& mra);

// Resources allocated at least once / agents that allocate at least once.
std::vector<int> used_resources(const Run& run, const Mra& mra);
std::vector<int> used_agents(const Run& run, const Mra& mra);

std::string to_string(const Action& act, const Mra& mra);

}  // namespace mras
