#pragma once

#include <string>
#include <vector>

#include "mras/mra.hpp"
#include "mras/spec_io.hpp"

namespace mras::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline Mra load_fixture(const std::string& name) {
  return parse_mra(read_file(fixture_path(name)));
}

inline Schedule load_schedule(const std::string& name, const Mra& mra) {
  return parse_schedule(read_file(fixture_path(name)), mra);
}

// Compact builder for the little systems the tests construct inline.
// prices[i] and counts[i] describe type t{i+1}.
inline Mra make_mra(int agents, const std::vector<Weight>& prices,
                    const std::vector<int>& counts) {
  Mra mra;
  for (int a = 1; a <= agents; ++a) mra.agent_names.push_back("a" + std::to_string(a));
  for (std::size_t i = 0; i < prices.size(); ++i) {
    ResourceType type;
    type.name = "t" + std::to_string(i + 1);
    type.price = prices[i];
    for (int j = 1; j <= counts[i]; ++j) type.instances.push_back(j);
    mra.types.push_back(type);
  }
  rebuild_resources(mra);
  return mra;
}

inline Goal make_goal(std::vector<int> types, int period, int deadline,
                      std::optional<int> owner = std::nullopt) {
  Goal g;
  g.owner = owner;
  g.types = std::move(types);
  g.period = period;
  g.deadline = deadline;
  return g;
}

}  // namespace mras::test
