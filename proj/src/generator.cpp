#include "mras/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace mras {

namespace {

// libstdc++ and libc++ disagree on distribution internals, so draw bounded
// ints by hand to keep seeds portable.
int bounded(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

Mra generate(const GenParams& params) {
  if (params.agents < 1 || params.types < 1)
    throw ValidationError("generator needs at least one agent and one type");
  if (params.goal_types_min < 1 || params.goal_types_min > params.goal_types_max)
    throw ValidationError("generator needs 1 <= goal_types_min <= goal_types_max");
  if (params.deadline_min < 1 || params.deadline_min > params.deadline_max)
    throw ValidationError("generator needs 1 <= deadline_min <= deadline_max");
  if (params.period < 0) throw ValidationError("generator needs period >= 0");

  std::mt19937_64 rng(params.seed);
  Mra mra;
  for (int a = 1; a <= params.agents; ++a)
    mra.agent_names.push_back("a" + std::to_string(a));
  for (int i = 1; i <= params.types; ++i) {
    ResourceType type;
    type.name = "t" + std::to_string(i);
    type.price = static_cast<Weight>(i);
    mra.types.push_back(std::move(type));
  }

  std::vector<int> demand(params.types, 0);
  for (int a = 1; a <= params.agents; ++a) {
    int size = std::min(bounded(rng, params.goal_types_min, params.goal_types_max),
                        params.types);
    std::vector<int> order(params.types);
    std::iota(order.begin(), order.end(), 0);
    for (int i = params.types - 1; i > 0; --i)
      std::swap(order[i], order[bounded(rng, 0, i)]);

    Goal goal;
    goal.types.assign(order.begin(), order.begin() + size);
    std::sort(goal.types.begin(), goal.types.end());
    goal.period = params.period;
    goal.deadline = bounded(rng, params.deadline_min, params.deadline_max);
    if (!params.general) goal.owner = a;
    for (int type : goal.types) ++demand[type];
    mra.goals.push_back(std::move(goal));
  }

  // One instance per goal that wants the type: enough that no contention is
  // ever forced.
  for (int i = 0; i < params.types; ++i)
    for (int inst = 1; inst <= std::max(1, demand[i]); ++inst)
      mra.types[i].instances.push_back(inst);
  rebuild_resources(mra);

  if (params.general) mra.agent_price = params.agent_price;
  validate(mra);
  return mra;
}

}  // namespace mras
