#pragma once

#include <optional>

#include "mras/encoder.hpp"
#include "mras/mra.hpp"

namespace mras {

struct OracleLimits {
  // Cap on the per-step branching bound (2|Res|+2)^|Agt|.
  std::uint64_t max_branching = 200000;
};

struct OracleOutcome {
  Weight min_cost = 0;
  Schedule witness;
};

// Empty = no uniform joint strategy wins within the horizon.
using OracleResult = std::optional<OracleOutcome>;

// Ground-truth optimum by exhaustive search: depth-first over executable
// action profiles, committing each visited state to the profile chosen there
// (revisits replay the commitment), so exactly the path-uniform strategies
// are enumerated. Prunes on a cost lower bound against the best win and on
// goals that can no longer meet their deadline. Mode Res minimizes resource
// cost; mode Mra minimizes resource + agent cost (general-goal systems
// only); mode None stops at the first win with its cost.
// Throws TooLargeError when the branching bound exceeds the limit.
OracleResult oracle_optimum(const Mra& mra, OptMode mode, const OracleLimits& limits = {});

// True iff some uniform joint strategy wins within the horizon.
bool oracle_decide(const Mra& mra, const OracleLimits& limits = {});

}  // namespace mras
