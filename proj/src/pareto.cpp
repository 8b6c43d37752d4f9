#include "weedsim/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weedsim/error.hpp"

namespace weedsim {

namespace {

double measure(const StrategyOutcome& o, std::string_view name) {
  const auto it = o.measures.find(name);
  if (it == o.measures.end()) {
    throw Error(ErrorKind::MissingMeasure, "outcome '" + o.strategy_id + "' has no measure '" + std::string(name) + "'");
  }
  return it->second;
}

}  // namespace

ParetoFront pareto_front(std::span<const StrategyOutcome> outcomes, std::string_view m1, std::string_view m2) {
  if (outcomes.empty()) throw Error(ErrorKind::InvalidArgument, "pareto front of no outcomes");
  ParetoFront front;
  struct Entry {
    double a, b;
    std::size_t index;
  };
  std::vector<Entry> entries;
  entries.reserve(outcomes.size());
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const double a = measure(outcomes[k], m1);
    const double b = measure(outcomes[k], m2);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      front.excluded.push_back(k);
      front.warnings.push_back("excluding '" + outcomes[k].strategy_id + "': undefined measure");
      continue;
    }
    entries.push_back({a, b, k});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.index < y.index;
  });

  // Sweep groups of equal m1. A point is optimal iff it has the smallest m2
  // in its group and that m2 beats every point with strictly smaller m1.
  double best_before = std::numeric_limits<double>::infinity();
  std::vector<bool> is_optimal(outcomes.size(), false);
  for (std::size_t g = 0; g < entries.size();) {
    std::size_t end = g;
    while (end < entries.size() && entries[end].a == entries[g].a) ++end;
    const double group_min = entries[g].b;
    if (group_min < best_before) {
      for (std::size_t k = g; k < end && entries[k].b == group_min; ++k) {
        is_optimal[entries[k].index] = true;
        front.optimal.push_back(entries[k].index);
      }
    }
    best_before = std::min(best_before, group_min);
    g = end;
  }
  for (const Entry& e : entries) {
    if (!is_optimal[e.index]) front.dominated.push_back(e.index);
  }
  std::sort(front.dominated.begin(), front.dominated.end());

  for (std::size_t k = 0; k < front.optimal.size(); ++k) {
    const StrategyOutcome& o = outcomes[front.optimal[k]];
    const Vec2 p{measure(o, m1), measure(o, m2)};
    if (k > 0) front.staircase.push_back({p.x, front.staircase.back().y});
    front.staircase.push_back(p);
  }
  front.staircase.erase(std::unique(front.staircase.begin(), front.staircase.end()), front.staircase.end());
  return front;
}

}  // namespace weedsim
