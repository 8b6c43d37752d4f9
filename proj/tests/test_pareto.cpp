#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weedsim/error.hpp"
#include "weedsim/pareto.hpp"

using namespace weedsim;

namespace {

std::vector<StrategyOutcome> outcomes(const std::vector<Vec2>& pts) {
  std::vector<StrategyOutcome> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.push_back({"s" + std::to_string(k), {{"a", pts[k].x}, {"b", pts[k].y}}});
  }
  return out;
}

std::vector<bool> flags(const ParetoFront& f, std::size_t n) {
  std::vector<bool> opt(n, false);
  for (const auto k : f.optimal) opt[k] = true;
  return opt;
}

}  // namespace

TEST_CASE("pareto examples") {
  const auto all = pareto_front(outcomes({{1, 5}, {2, 4}, {3, 3}}), "a", "b");
  CHECK(all.optimal.size() == 3);
  CHECK(all.dominated.empty());
  const auto one = pareto_front(outcomes({{2, 2}, {1, 1}}), "a", "b");
  CHECK(one.optimal == std::vector<std::size_t>{1});
  CHECK(one.dominated == std::vector<std::size_t>{0});
  const auto dup = pareto_front(outcomes({{1, 1}, {1, 1}, {1, 2}}), "a", "b");
  CHECK(dup.optimal.size() == 2);
  CHECK(dup.dominated == std::vector<std::size_t>{2});
}

TEST_CASE("pareto partition equals the pairwise domination oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec2> pts;
    std::uniform_int_distribution<int> small(0, 10);
    for (int k = 0; k < 100; ++k) {
      // Integer coordinates every other trial to force ties.
      pts.push_back(trial % 2 ? Vec2{double(small(rng)), double(small(rng))}
                              : oracle::uniform_points(rng, 1, 0, 0, 1, 1)[0]);
    }
    const auto front = pareto_front(outcomes(pts), "a", "b");
    CHECK(flags(front, pts.size()) == oracle::pareto_optimal(pts));
    CHECK(front.optimal.size() + front.dominated.size() == pts.size());
  }
}

TEST_CASE("pareto properties") {
  std::mt19937_64 rng(12);
  const auto pts = oracle::uniform_points(rng, 60, 0, 1, 10, 5);
  const auto base = pareto_front(outcomes(pts), "a", "b");

  // Strictly increasing transform of one measure keeps membership.
  auto moved = pts;
  for (auto& p : moved) p.y = std::exp(p.y) * 3 + 1;
  CHECK(flags(pareto_front(outcomes(moved), "a", "b"), pts.size()) == flags(base, pts.size()));

  // A dominated newcomer changes nothing.
  auto more = pts;
  more.push_back({pts[base.optimal[0]].x + 1, pts[base.optimal[0]].y + 1});
  const auto extended = pareto_front(outcomes(more), "a", "b");
  CHECK(extended.optimal == base.optimal);

  // Every dominated outcome is beaten by an optimal one.
  for (const auto d : base.dominated) {
    bool beaten = false;
    for (const auto o : base.optimal) {
      beaten |= pts[o].x <= pts[d].x && pts[o].y <= pts[d].y && (pts[o].x < pts[d].x || pts[o].y < pts[d].y);
    }
    CHECK(beaten);
  }

  // Staircase starts and ends at the extreme optimal points, sorted by m1.
  REQUIRE(!base.staircase.empty());
  for (std::size_t k = 1; k < base.staircase.size(); ++k) {
    CHECK(base.staircase[k].x >= base.staircase[k - 1].x);
    CHECK(base.staircase[k].y <= base.staircase[k - 1].y);
  }
}

TEST_CASE("pareto errors and undefined measures") {
  CHECK_THROWS_AS(pareto_front(outcomes({{1, 1}}), "a", "zz"), Error);
  auto o = outcomes({{1, 1}, {2, 0.5}});
  o.push_back({"nan", {{"a", std::nan("")}, {"b", 0.0}}});
  const auto front = pareto_front(o, "a", "b");
  CHECK(front.excluded == std::vector<std::size_t>{2});
  CHECK(front.optimal.size() == 2);
  CHECK(front.warnings.size() == 1);
}
