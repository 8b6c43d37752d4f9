#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weedsim/geometry.hpp"

namespace weedsim {

// Mean measures of one strategy; NaN marks a measure that was undefined in
// every replication.
struct StrategyOutcome {
  std::string strategy_id;
  std::map<std::string, double, std::less<>> measures;
};

struct ParetoFront {
  std::vector<std::size_t> optimal;    // indices into the input, sorted by (m1, m2)
  std::vector<std::size_t> dominated;  // ascending index
  std::vector<std::size_t> excluded;   // non-finite measure, left out
  std::vector<Vec2> staircase;         // frontier polyline through the optimal points
  std::vector<std::string> warnings;
};

// Both measures are minimized. An outcome is optimal iff no other outcome is
// <= in both measures and < in at least one; exact duplicates are all optimal.
ParetoFront pareto_front(std::span<const StrategyOutcome> outcomes, std::string_view m1, std::string_view m2);

}  // namespace weedsim
