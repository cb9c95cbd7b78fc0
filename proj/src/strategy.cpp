#include "mras/strategy.hpp"

#include <algorithm>
#include <sstream>

namespace mras {

namespace {

bool lit_true(const std::vector<bool>& assignment, int var) {
  return var > 0 && var < static_cast<int>(assignment.size()) && assignment[var];
}

}  // namespace

Schedule decode(const std::vector<bool>& assignment, const Encoding& enc) {
  const Mra& mra = enc.mra;
  const int n = mra.agent_count();
  const int R = mra.resource_count();
  const int k = enc.horizon;

  Schedule schedule(n);
  for (int a = 1; a <= n; ++a) {
    schedule[a - 1].reserve(k);
    for (int t = 0; t < k; ++t) {
      int chosen = -1;
      for (int i = 0; i < enc.action_count(); ++i) {
        if (lit_true(assignment, enc.act[a - 1][t][i])) {
          if (chosen >= 0)
            throw InconsistentModelError("two actions chosen for " +
                                         mra.agent_name(a) + " at t=" +
                                         std::to_string(t));
          chosen = i;
        }
      }
      if (chosen < 0)
        throw InconsistentModelError("no action chosen for " + mra.agent_name(a) +
                                     " at t=" + std::to_string(t));
      schedule[a - 1].push_back(enc.action_of(chosen));
    }
  }

  Run run;
  try {
    run = simulate(mra, schedule);
  } catch (const NotExecutableError& e) {
    throw InconsistentModelError(std::string("decoded schedule is not executable: ") +
                                 e.what());
  }

  for (int r = 0; r < R; ++r)
    for (int t = 0; t <= k; ++t) {
      int owner = -1;
      for (int o = 0; o <= n; ++o)
        if (lit_true(assignment, enc.own[r][t][o])) {
          if (owner >= 0)
            throw InconsistentModelError("two owners assigned to " +
                                         mra.resource_name(r) + " at t=" +
                                         std::to_string(t));
          owner = o;
        }
      if (owner < 0)
        throw InconsistentModelError("no owner assigned to " + mra.resource_name(r) +
                                     " at t=" + std::to_string(t));
      if (owner != run.states[t][r]) {
        std::ostringstream msg;
        msg << "ownership variables disagree with the replay: " << mra.resource_name(r)
            << " at t=" << t << " decodes to "
            << (owner ? mra.agent_name(owner) : "free") << " but replays to "
            << (run.states[t][r] ? mra.agent_name(run.states[t][r]) : "free");
        throw InconsistentModelError(msg.str());
      }
    }

  return schedule;
}

StrategyMap extract_strategy_map(const Schedule& schedule, const Run& run) {
  StrategyMap map;
  const std::size_t steps = run.profiles.size();
  for (std::size_t t = 0; t < steps; ++t) {
    ActionProfile profile(schedule.size());
    for (std::size_t a = 0; a < schedule.size(); ++a) profile[a] = schedule[a][t];
    auto [it, fresh] = map.emplace(run.states[t], profile);
    if (!fresh && !(it->second == profile))
      throw NonUniformError("state at t=" + std::to_string(t) +
                            " was visited before with a different action profile");
  }
  return map;
}

Mra prune(const Mra& mra, const Run& run, OptMode mode, Schedule* schedule_out) {
  if (mode == OptMode::None) {
    if (schedule_out) {
      Schedule same(mra.agent_count());
      for (std::size_t t = 0; t < run.profiles.size(); ++t)
        for (int a = 1; a <= mra.agent_count(); ++a)
          same[a - 1].push_back(run.profiles[t][a - 1]);
      *schedule_out = same;
    }
    return mra;
  }

  std::vector<int> used_r = used_resources(run, mra);
  std::vector<bool> keep_resource(mra.resource_count(), false);
  for (int r : used_r) keep_resource[r] = true;

  std::vector<bool> keep_agent(mra.agent_count() + 1, true);
  if (mode == OptMode::Mra) {
    std::fill(keep_agent.begin(), keep_agent.end(), false);
    for (int a : used_agents(run, mra)) keep_agent[a] = true;
  }

  Mra pruned;
  std::vector<int> agent_map(mra.agent_count() + 1, 0);
  for (int a = 1; a <= mra.agent_count(); ++a)
    if (keep_agent[a]) {
      pruned.agent_names.push_back(mra.agent_name(a));
      agent_map[a] = static_cast<int>(pruned.agent_names.size());
    }

  std::vector<int> type_map(mra.types.size(), -1);
  for (std::size_t type = 0; type < mra.types.size(); ++type) {
    ResourceType kept;
    kept.name = mra.types[type].name;
    kept.price = mra.types[type].price;
    for (int r : mra.resources_of_type(static_cast<int>(type)))
      if (keep_resource[r]) kept.instances.push_back(mra.resources[r].instance);
    if (!kept.instances.empty()) {
      type_map[type] = static_cast<int>(pruned.types.size());
      pruned.types.push_back(std::move(kept));
    }
  }
  rebuild_resources(pruned);

  std::vector<int> resource_map(mra.resource_count(), -1);
  for (int r = 0; r < mra.resource_count(); ++r) {
    if (!keep_resource[r]) continue;
    resource_map[r] = pruned.find_resource(mra.resource_name(r));
    if (resource_map[r] < 0)
      throw PruneBrokeWinningError("kept resource " + mra.resource_name(r) +
                                   " missing after pruning");
  }

  pruned.agent_price = mra.agent_price;
  for (const Goal& goal : mra.goals) {
    Goal g = goal;
    if (g.owner) {
      if (!keep_agent[*g.owner])
        throw PruneBrokeWinningError("pruning removed the owner of a goal");
      g.owner = agent_map[*g.owner];
    }
    for (int& type : g.types) {
      if (type_map[type] < 0)
        throw PruneBrokeWinningError("pruning removed every instance of type " +
                                     mra.types[type].name);
      type = type_map[type];
    }
    pruned.goals.push_back(std::move(g));
  }
  validate(pruned);

  // Re-express the surviving rows of the joint strategy in the pruned
  // system's indices.
  Schedule remapped(pruned.agent_count());
  for (int a = 1; a <= mra.agent_count(); ++a) {
    if (!keep_agent[a]) continue;
    auto& row = remapped[agent_map[a] - 1];
    for (std::size_t t = 0; t < run.profiles.size(); ++t) {
      Action act = run.profiles[t][a - 1];
      if (act.kind == ActionKind::Request || act.kind == ActionKind::Release) {
        if (resource_map[act.resource] < 0)
          throw PruneBrokeWinningError(
              mra.agent_name(a) + " still acts on pruned resource " +
              mra.resource_name(act.resource) + " at t=" + std::to_string(t));
        act.resource = resource_map[act.resource];
      }
      row.push_back(act);
    }
  }

  // The pruned system must replay to the same win at the same cost.
  Run replay;
  try {
    replay = simulate(pruned, remapped);
  } catch (const NotExecutableError& e) {
    throw PruneBrokeWinningError(std::string("pruned schedule not executable: ") +
                                 e.what());
  }
  for (std::size_t g = 0; g < pruned.goals.size(); ++g) {
    const Goal& goal = pruned.goals[g];
    bool ok = false;
    if (goal.owner) {
      ok = goal_satisfied(replay, goal, *goal.owner, pruned);
    } else {
      for (int a = 1; a <= pruned.agent_count() && !ok; ++a)
        ok = goal_satisfied(replay, goal, a, pruned);
    }
    if (!ok)
      throw PruneBrokeWinningError("goal " + std::to_string(g + 1) +
                                   " no longer satisfied after pruning");
  }
  if (resource_cost(replay, pruned) != resource_cost(run, mra))
    throw PruneBrokeWinningError("pruning changed the resource cost");
  if (pruned.agent_price && agent_cost(replay, pruned) != agent_cost(run, mra))
    throw PruneBrokeWinningError("pruning changed the agent cost");

  if (schedule_out) *schedule_out = remapped;
  return pruned;
}

SynthesisResult make_result(const std::vector<bool>& assignment, const Encoding& enc) {
  SynthesisResult res;
  res.schedule = decode(assignment, enc);
  res.run = simulate(enc.mra, res.schedule);
  res.strategy = extract_strategy_map(res.schedule, res.run);

  res.resource_cost = resource_cost(res.run, enc.mra);
  if (enc.mra.agent_price) res.agent_cost = agent_cost(res.run, enc.mra);
  res.total_cost = res.resource_cost + res.agent_cost.value_or(0);

  res.used_resources = used_resources(res.run, enc.mra);
  for (int r = 0; r < enc.mra.resource_count(); ++r)
    if (!std::binary_search(res.used_resources.begin(), res.used_resources.end(), r))
      res.unused_resources.push_back(r);
  res.used_agents = used_agents(res.run, enc.mra);
  for (int a = 1; a <= enc.mra.agent_count(); ++a)
    if (!std::binary_search(res.used_agents.begin(), res.used_agents.end(), a))
      res.unused_agents.push_back(a);

  res.pruned = prune(enc.mra, res.run, enc.options.mode);
  return res;
}

}  // namespace mras
