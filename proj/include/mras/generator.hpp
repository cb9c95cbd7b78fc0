#pragma once

#include <cstdint>

#include "mras/mra.hpp"

namespace mras {

// Random scenario generator for benchmarking: one goal per agent, goal
// composition size drawn from [goal_types_min, goal_types_max], deadline
// from [deadline_min, deadline_max], period fixed, prices $(t_i) = i.
// Each type gets as many instances as there are goals referencing it (at
// least one), so no contention is ever forced and every scenario is winnable
// within its horizon when deadline_min >= goal_types_max + period + 1.
// Deterministic for a given parameter set and seed on every platform.
struct GenParams {
  int agents = 4;
  int types = 4;
  int goal_types_min = 1;
  int goal_types_max = 3;
  int deadline_min = 5;
  int deadline_max = 15;
  int period = 1;
  bool general = false;       // unowned goals
  Weight agent_price = 1;     // used only when general
  std::uint64_t seed = 1;
};

Mra generate(const GenParams& params);

}  // namespace mras
