#include "mras/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace mras {

namespace {

struct Frame {
  std::vector<int> new_allocations;
  std::vector<int> new_agents;
  std::vector<int> newly_satisfied;
  std::vector<int> old_streak;
  Weight old_cost = 0;
};

struct Search {
  const Mra& mra;
  OptMode mode;
  int k;

  Weight best = std::numeric_limits<Weight>::max();
  bool found = false;
  Schedule witness;

  std::map<State, ActionProfile> commitments;
  std::vector<State> states;
  std::vector<ActionProfile> chosen;

  std::vector<bool> allocated;   // ever, per resource
  std::vector<bool> agent_used;  // ever, per agent (1-based)
  Weight used_cost = 0;          // resource prices; plus agent prices in Mra mode
  std::vector<int> streak;       // consecutive states the current owner has held r
  std::vector<bool> satisfied;   // latched per goal
  int open_goals = 0;

  std::vector<std::vector<int>> candidates;  // per goal
  std::vector<Weight> type_floor;            // cheapest instance per type

  explicit Search(const Mra& m, OptMode md, int horizon)
      : mra(m), mode(md), k(horizon) {
    allocated.assign(mra.resource_count(), false);
    agent_used.assign(mra.agent_count() + 1, false);
    streak.assign(mra.resource_count(), 0);
    satisfied.assign(mra.goals.size(), false);
    open_goals = static_cast<int>(mra.goals.size());
    for (const Goal& goal : mra.goals) {
      std::vector<int> cand;
      if (goal.owner)
        cand.push_back(*goal.owner);
      else
        for (int a = 1; a <= mra.agent_count(); ++a) cand.push_back(a);
      candidates.push_back(std::move(cand));
    }
    for (std::size_t type = 0; type < mra.types.size(); ++type) {
      Weight floor = std::numeric_limits<Weight>::max();
      for (int r : mra.resources_of_type(static_cast<int>(type)))
        floor = std::min(floor, mra.price(r));
      type_floor.push_back(floor);
    }
  }

  bool window_done(const Goal& goal, int a, int need) const {
    const State& s = states.back();
    for (int type : goal.types) {
      bool some = false;
      for (int r : mra.resources_of_type(type))
        if (s[r] == a && streak[r] >= need) {
          some = true;
          break;
        }
      if (!some) return false;
    }
    return true;
  }

  // Latches goals whose shared window just completed; records them in the
  // frame for backtracking.
  void latch(Frame& frame) {
    const int u = static_cast<int>(states.size()) - 1;
    for (std::size_t g = 0; g < mra.goals.size(); ++g) {
      if (satisfied[g]) continue;
      const Goal& goal = mra.goals[g];
      if (u > goal.deadline) continue;
      for (int a : candidates[g])
        if (window_done(goal, a, goal.period + 1)) {
          satisfied[g] = true;
          --open_goals;
          frame.newly_satisfied.push_back(static_cast<int>(g));
          break;
        }
    }
  }

  // A goal is dead once its deadline has passed, or once even the
  // latest-starting window can no longer be completed.
  bool someone_dead() const {
    const int u = static_cast<int>(states.size()) - 1;
    for (std::size_t g = 0; g < mra.goals.size(); ++g) {
      if (satisfied[g]) continue;
      const Goal& goal = mra.goals[g];
      if (u >= goal.deadline) return true;
      const int latest = goal.deadline - goal.period;
      if (u <= latest) continue;
      bool alive = false;
      for (int a : candidates[g])
        if (window_done(goal, a, u - latest + 1)) {
          alive = true;
          break;
        }
      if (!alive) return true;
    }
    return false;
  }

  // used_cost plus the cheapest instance of every still-untouched type some
  // open goal needs, plus one agent price if nobody has allocated yet.
  Weight lower_bound() const {
    Weight lb = used_cost;
    std::vector<bool> counted(mra.types.size(), false);
    for (std::size_t g = 0; g < mra.goals.size(); ++g) {
      if (satisfied[g]) continue;
      for (int type : mra.goals[g].types) {
        if (counted[type]) continue;
        bool touched = false;
        for (int r : mra.resources_of_type(type))
          if (allocated[r]) {
            touched = true;
            break;
          }
        if (!touched) {
          lb += type_floor[type];
          counted[type] = true;
        }
      }
    }
    if (mode == OptMode::Mra && open_goals > 0) {
      bool any = false;
      for (int a = 1; a <= mra.agent_count(); ++a)
        if (agent_used[a]) {
          any = true;
          break;
        }
      if (!any) lb += mra.agent_price.value_or(0);
    }
    return lb;
  }

  Frame apply(const ActionProfile& profile) {
    Frame frame;
    frame.old_cost = used_cost;
    frame.old_streak = streak;

    State next = step(states.back(), profile, mra);
    for (int r = 0; r < mra.resource_count(); ++r) {
      if (next[r] != kUnallocated && !allocated[r]) {
        allocated[r] = true;
        frame.new_allocations.push_back(r);
        used_cost += mra.price(r);
      }
      if (next[r] != kUnallocated && !agent_used[next[r]]) {
        agent_used[next[r]] = true;
        frame.new_agents.push_back(next[r]);
        if (mode == OptMode::Mra) used_cost += mra.agent_price.value_or(0);
      }
      streak[r] = next[r] != kUnallocated && next[r] == states.back()[r]
                      ? streak[r] + 1
                      : (next[r] != kUnallocated ? 1 : 0);
    }
    chosen.push_back(profile);
    states.push_back(std::move(next));
    latch(frame);
    return frame;
  }

  void undo(Frame& frame) {
    states.pop_back();
    chosen.pop_back();
    for (int g : frame.newly_satisfied) {
      satisfied[g] = false;
      ++open_goals;
    }
    for (int r : frame.new_allocations) allocated[r] = false;
    for (int a : frame.new_agents) agent_used[a] = false;
    streak = frame.old_streak;
    used_cost = frame.old_cost;
  }

  std::vector<Action> executable_actions(int a, const State& s) const {
    std::vector<Action> acts;
    bool holds = false;
    for (int r = 0; r < mra.resource_count(); ++r) {
      if (s[r] == kUnallocated) acts.push_back(Action::request(r));
      if (s[r] == a) holds = true;
    }
    for (int r = 0; r < mra.resource_count(); ++r)
      if (s[r] == a) acts.push_back(Action::release(r));
    if (holds) acts.push_back(Action::release_all());
    acts.push_back(Action::idle());
    return acts;
  }

  Weight delta_cost(const State& next) const {
    Weight delta = 0;
    std::vector<int> fresh;
    for (int r = 0; r < mra.resource_count(); ++r) {
      if (next[r] != kUnallocated && !allocated[r]) delta += mra.price(r);
      if (next[r] != kUnallocated && !agent_used[next[r]] && mode == OptMode::Mra) {
        if (std::find(fresh.begin(), fresh.end(), next[r]) == fresh.end()) {
          fresh.push_back(next[r]);
          delta += mra.agent_price.value_or(0);
        }
      }
    }
    return delta;
  }

  void record_win() {
    if (used_cost >= best && found) return;
    best = used_cost;
    found = true;
    // Extend to the full horizon: committed states replay their profile,
    // fresh states idle (an all-idle step is a self-loop), so the extension
    // revisits only known states and allocates nothing new.
    std::vector<ActionProfile> profiles = chosen;
    State cur = states.back();
    const ActionProfile all_idle(mra.agent_count(), Action::idle());
    while (static_cast<int>(profiles.size()) < k) {
      auto it = commitments.find(cur);
      const ActionProfile& prof = it != commitments.end() ? it->second : all_idle;
      profiles.push_back(prof);
      cur = step(cur, prof, mra);
    }
    witness.assign(mra.agent_count(), {});
    for (const ActionProfile& prof : profiles)
      for (int a = 1; a <= mra.agent_count(); ++a)
        witness[a - 1].push_back(prof[a - 1]);
  }

  void explore() {
    if (open_goals == 0) {
      record_win();
      return;  // deeper never gets cheaper
    }
    const int t = static_cast<int>(states.size()) - 1;
    if (t == k) return;
    if (someone_dead()) return;
    if (mode == OptMode::None && found) return;
    if (found && lower_bound() >= best) return;

    const State s = states.back();
    auto committed = commitments.find(s);
    if (committed != commitments.end()) {
      Frame frame = apply(committed->second);
      explore();
      undo(frame);
      return;
    }

    std::vector<std::vector<Action>> menu;
    for (int a = 1; a <= mra.agent_count(); ++a)
      menu.push_back(executable_actions(a, s));

    struct Child {
      ActionProfile profile;
      Weight delta;
    };
    std::vector<Child> children;
    ActionProfile profile(mra.agent_count(), Action::idle());
    std::vector<std::size_t> pick(mra.agent_count(), 0);
    for (;;) {
      for (int a = 0; a < mra.agent_count(); ++a) profile[a] = menu[a][pick[a]];
      children.push_back({profile, delta_cost(step(s, profile, mra))});
      int a = mra.agent_count() - 1;
      while (a >= 0 && ++pick[a] == menu[a].size()) pick[a--] = 0;
      if (a < 0) break;
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& x, const Child& y) { return x.delta < y.delta; });

    for (const Child& child : children) {
      commitments.emplace(s, child.profile);
      Frame frame = apply(child.profile);
      explore();
      undo(frame);
      commitments.erase(s);
      if (mode == OptMode::None && found) return;
    }
  }
};

}  // namespace

OracleResult oracle_optimum(const Mra& mra, OptMode mode, const OracleLimits& limits) {
  validate(mra);
  if (mode == OptMode::Mra && !mra.general_mode())
    throw ValidationError(
        "agent-cost optimization applies only to systems with unowned goals");

  std::uint64_t branching = 1;
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(mra.resource_count()) + 2;
  for (int a = 0; a < mra.agent_count(); ++a) {
    branching *= base;
    if (branching > limits.max_branching)
      throw TooLargeError("per-step branching " + std::to_string(base) + "^" +
                          std::to_string(mra.agent_count()) + " exceeds the limit of " +
                          std::to_string(limits.max_branching));
  }

  int k = 0;
  for (const Goal& goal : mra.goals) k = std::max(k, goal.deadline);

  Search search(mra, mode, k);
  search.states.push_back(State(mra.resource_count(), kUnallocated));
  search.explore();

  if (!search.found) return std::nullopt;
  OracleOutcome outcome;
  outcome.min_cost = search.best;
  outcome.witness = search.witness;
  return outcome;
}

bool oracle_decide(const Mra& mra, const OracleLimits& limits) {
  return oracle_optimum(mra, OptMode::None, limits).has_value();
}

}  // namespace mras
