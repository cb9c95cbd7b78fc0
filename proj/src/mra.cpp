#include "mras/mra.hpp"

#include <algorithm>
#include <set>

namespace mras {

std::string Mra::resource_name(int r) const {
  const Resource& res = resources[r];
  return types[res.type].name + "#" + std::to_string(res.instance);
}

std::vector<int> Mra::resources_of_type(int type) const {
  std::vector<int> out;
  for (int r = 0; r < resource_count(); ++r)
    if (resources[r].type == type) out.push_back(r);
  return out;
}

int Mra::find_resource(const std::string& name) const {
  for (int r = 0; r < resource_count(); ++r)
    if (resource_name(r) == name) return r;
  // positional alias r1..rN over declaration order
  if (name.size() > 1 && name[0] == 'r') {
    bool digits = true;
    for (size_t i = 1; i < name.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(name[i]))) digits = false;
    if (digits) {
      int idx = std::stoi(name.substr(1));
      if (idx >= 1 && idx <= resource_count()) return idx - 1;
    }
  }
  return -1;
}

int Mra::find_agent(const std::string& name) const {
  for (int a = 1; a <= agent_count(); ++a)
    if (agent_names[a - 1] == name) return a;
  return -1;
}

int Mra::find_type(const std::string& name) const {
  for (size_t i = 0; i < types.size(); ++i)
    if (types[i].name == name) return static_cast<int>(i);
  return -1;
}

void rebuild_resources(Mra& mra) {
  mra.resources.clear();
  for (size_t ti = 0; ti < mra.types.size(); ++ti)
    for (int inst : mra.types[ti].instances)
      mra.resources.push_back({static_cast<int>(ti), inst});
}

void validate(const Mra& mra) {
  if (mra.agent_names.empty()) throw ValidationError("system declares no agents");
  {
    std::set<std::string> seen;
    for (const auto& n : mra.agent_names)
      if (!seen.insert(n).second)
        throw ValidationError("duplicate agent name '" + n + "'");
  }
  if (mra.types.empty()) throw ValidationError("system declares no resource types");
  {
    std::set<std::string> seen;
    for (const auto& t : mra.types) {
      if (t.name.empty()) throw ValidationError("resource type with empty name");
      if (!seen.insert(t.name).second)
        throw ValidationError("duplicate resource type '" + t.name + "'");
      std::set<int> insts;
      for (int i : t.instances) {
        if (i < 1) throw ValidationError("instance labels are 1-based");
        if (!insts.insert(i).second)
          throw ValidationError("duplicate instance label in type '" + t.name + "'");
      }
    }
  }
  if (mra.resources.empty()) throw ValidationError("system declares no resources");
  if (mra.goals.empty()) throw ValidationError("system declares no goals");

  bool any_owned = false, any_unowned = false;
  for (const Goal& g : mra.goals) {
    if (g.owner.has_value()) {
      any_owned = true;
      if (*g.owner < 1 || *g.owner > mra.agent_count())
        throw ValidationError("goal owner out of range");
    } else {
      any_unowned = true;
    }
    if (g.types.empty()) throw ValidationError("goal with empty resource composition");
    std::set<int> seen;
    for (int t : g.types) {
      if (t < 0 || t >= static_cast<int>(mra.types.size()))
        throw ValidationError("goal references unknown resource type");
      if (!seen.insert(t).second)
        throw ValidationError("duplicate type in goal composition");
      if (mra.resources_of_type(t).empty())
        throw ValidationError("goal references type '" + mra.types[t].name +
                              "' that has no instances");
    }
    if (g.period < 0) throw ValidationError("goal period must be >= 0");
    if (g.deadline < 1) throw ValidationError("goal deadline must be >= 1");
    if (g.period > g.deadline)
      throw ValidationError("goal period exceeds its deadline");
  }
  if (any_owned && any_unowned)
    throw ValidationError("owned and unowned goals cannot be mixed");
  if (any_unowned && !mra.agent_price.has_value())
    throw ValidationError("agent_price is required when goals are unowned");
}

State initial_state(const Mra& mra) {
  return State(mra.resource_count(), kUnallocated);
}

int horizon(const Mra& mra) {
  int k = 0;
  for (const Goal& g : mra.goals) k = std::max(k, g.deadline);
  return k;
}

bool action_available(const State& s, int agent, const Action& act, const Mra& mra) {
  switch (act.kind) {
    case ActionKind::Idle:
      return true;
    case ActionKind::Request:
      return act.resource >= 0 && act.resource < mra.resource_count() &&
             s[act.resource] == kUnallocated;
    case ActionKind::Release:
      return act.resource >= 0 && act.resource < mra.resource_count() &&
             s[act.resource] == agent;
    case ActionKind::ReleaseAll:
      for (int owner : s)
        if (owner == agent) return true;
      return false;
  }
  return false;
}

std::vector<Action> available_actions(const State& s, int agent, const Mra& mra) {
  if (agent < 1 || agent > mra.agent_count())
    throw Error("unknown agent id " + std::to_string(agent));
  std::vector<Action> out;
  for (int r = 0; r < mra.resource_count(); ++r)
    if (s[r] == kUnallocated) out.push_back(Action::request(r));
  for (int r = 0; r < mra.resource_count(); ++r)
    if (s[r] == agent) out.push_back(Action::release(r));
  if (action_available(s, agent, Action::release_all(), mra))
    out.push_back(Action::release_all());
  out.push_back(Action::idle());
  return out;
}

bool is_executable(const State& s, const ActionProfile& ap, const Mra& mra) {
  if (static_cast<int>(ap.size()) != mra.agent_count()) return false;
  for (int a = 1; a <= mra.agent_count(); ++a)
    if (!action_available(s, a, ap[a - 1], mra)) return false;
  return true;
}

State step(const State& s, const ActionProfile& ap, const Mra& mra) {
  for (int a = 1; a <= mra.agent_count(); ++a)
    if (!action_available(s, a, ap[a - 1], mra))
      throw NotExecutableError("action of agent " + mra.agent_name(a) +
                                   " is not available in this state",
                               -1, a);
  State next = s;
  for (int r = 0; r < mra.resource_count(); ++r) {
    if (s[r] == kUnallocated) {
      int sole = kUnallocated;
      int requesters = 0;
      for (int a = 1; a <= mra.agent_count(); ++a) {
        const Action& act = ap[a - 1];
        if (act.kind == ActionKind::Request && act.resource == r) {
          ++requesters;
          sole = a;
        }
      }
      next[r] = (requesters == 1) ? sole : kUnallocated;
    } else {
      const Action& act = ap[s[r] - 1];
      bool released = (act.kind == ActionKind::Release && act.resource == r) ||
                      act.kind == ActionKind::ReleaseAll;
      if (released) next[r] = kUnallocated;
    }
  }
  return next;
}

Run simulate(const Mra& mra, const Schedule& schedule) {
  if (static_cast<int>(schedule.size()) != mra.agent_count())
    throw Error("schedule does not cover every agent");
  size_t steps = schedule.empty() ? 0 : schedule[0].size();
  for (const auto& row : schedule)
    if (row.size() != steps) throw Error("ragged schedule");

  Run run;
  run.states.push_back(initial_state(mra));
  for (size_t t = 0; t < steps; ++t) {
    ActionProfile ap;
    ap.reserve(schedule.size());
    for (const auto& row : schedule) ap.push_back(row[t]);
    const State& cur = run.states.back();
    for (int a = 1; a <= mra.agent_count(); ++a)
      if (!action_available(cur, a, ap[a - 1], mra))
        throw NotExecutableError(
            "schedule not executable at step " + std::to_string(t) +
                " for agent " + mra.agent_name(a),
            static_cast<int>(t), a);
    run.states.push_back(step(cur, ap, mra));
    run.profiles.push_back(std::move(ap));
  }
  return run;
}

bool goal_satisfied(const Run& run, const Goal& goal, int agent, const Mra& mra) {
  if (run.horizon() < goal.deadline)
    throw HorizonTooShortError("run horizon " + std::to_string(run.horizon()) +
                               " shorter than goal deadline " +
                               std::to_string(goal.deadline));
  for (int t = 0; t + goal.period <= goal.deadline; ++t) {
    bool all_types = true;
    for (int type : goal.types) {
      bool some_resource = false;
      for (int r : mra.resources_of_type(type)) {
        bool held_throughout = true;
        for (int u = t; u <= t + goal.period; ++u)
          if (run.states[u][r] != agent) { held_throughout = false; break; }
        if (held_throughout) { some_resource = true; break; }
      }
      if (!some_resource) { all_types = false; break; }
    }
    if (all_types) return true;
  }
  return false;
}

bool all_goals_satisfied(const Run& run, const Mra& mra) {
  for (const Goal& g : mra.goals) {
    if (g.owner.has_value()) {
      if (!goal_satisfied(run, g, *g.owner, mra)) return false;
    } else {
      bool some = false;
      for (int a = 1; a <= mra.agent_count() && !some; ++a)
        some = goal_satisfied(run, g, a, mra);
      if (!some) return false;
    }
  }
  return true;
}

std::vector<int> used_resources(const Run& run, const Mra& mra) {
  std::vector<int> out;
  for (int r = 0; r < mra.resource_count(); ++r) {
    for (const State& s : run.states)
      if (s[r] != kUnallocated) { out.push_back(r); break; }
  }
  return out;
}

std::vector<int> used_agents(const Run& run, const Mra& mra) {
  std::vector<bool> used(mra.agent_count() + 1, false);
  for (const State& s : run.states)
    for (int owner : s)
      if (owner != kUnallocated) used[owner] = true;
  std::vector<int> out;
  for (int a = 1; a <= mra.agent_count(); ++a)
    if (used[a]) out.push_back(a);
  return out;
}

Weight resource_cost(const Run& run, const Mra& mra) {
  Weight total = 0;
  for (int r : used_resources(run, mra)) total += mra.price(r);
  return total;
}

Weight agent_cost(const Run& run, const Mra& mra) {
  if (!mra.agent_price.has_value())
    throw MissingAgentPriceError("agent cost requested but no agent_price set");
  return *mra.agent_price * static_cast<Weight>(used_agents(run, mra).size());
}

Weight mra_cost(const Run& run, const Mra& mra) {
  return resource_cost(run, mra) + agent_cost(run, mra);
}

std::string to_string(const Action& act, const Mra& mra) {
  switch (act.kind) {
    case ActionKind::Idle: return "idle";
    case ActionKind::Request: return "request " + mra.resource_name(act.resource);
    case ActionKind::Release: return "release " + mra.resource_name(act.resource);
    case ActionKind::ReleaseAll: return "release_all";
  }
  return "?";
}

}  // namespace mras
