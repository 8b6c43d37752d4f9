#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weedsim/error.hpp"
#include "weedsim/strategy.hpp"

using namespace weedsim;

namespace {

const Field& field() {
  static const Field f({{0, 0}, {60, 0}, {60, 40}, {0, 40}});
  return f;
}

PointPattern targets(std::vector<Vec2> pts) { return PointPattern{std::move(pts), PatternRole::targeted}; }

}  // namespace

TEST_CASE("action threshold equals the nearest-neighbour oracle") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::uniform_points(rng, 50 + 10 * trial, 0, 0, 60, 40);
    for (const double la : {0.5, 2.5, 5.0}) {
      CHECK(action_threshold(PointPattern{pts}, la).points == oracle::threshold_filter(pts, la));
    }
  }
}

TEST_CASE("action threshold edge cases") {
  const PointPattern two{{{0, 0}, {2.5, 0}}, PatternRole::observed};
  CHECK(action_threshold(two, 2.5).size() == 2);  // inclusive
  CHECK(action_threshold(two, 2.4).size() == 0);
  CHECK(action_threshold(PointPattern{{{1, 1}}}, 5.0).size() == 0);
  const auto all = action_threshold(PointPattern{{{1, 1}}}, defaults::kUnlimited);
  CHECK(all.size() == 1);
  CHECK(all.role == PatternRole::targeted);
  CHECK_THROWS_AS(action_threshold(two, 0.0), Error);
}

TEST_CASE("nearest-neighbour tour breaks ties by lower index") {
  const std::vector<Vec2> nodes{{0, 0}, {1, 0}, {-1, 0}, {5, 0}};
  CHECK(nearest_neighbor_tour(nodes) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("2-opt never lengthens the nearest-neighbour tour") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto nodes = oracle::uniform_points(rng, 5 + trial * 3, 0, 0, 50, 50);
    auto tour = nearest_neighbor_tour(nodes);
    const double nn = tour_length(nodes, tour);
    two_opt(nodes, tour);
    CHECK(tour_length(nodes, tour) <= nn + 1e-9);
    CHECK(tour.front() == 0);
    auto sorted = tour;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) CHECK(sorted[k] == k);
  }
}

TEST_CASE("Or-opt keeps a valid tour and only shortens it") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto nodes = oracle::uniform_points(rng, 4 + trial * 5, 0, 0, 50, 50);
    auto tour = nearest_neighbor_tour(nodes);
    two_opt(nodes, tour);
    const double before = tour_length(nodes, tour);
    const bool changed = or_opt(nodes, tour);
    const double after = tour_length(nodes, tour);
    CHECK(after <= before + 1e-9);
    if (changed) CHECK(after < before);
    improve_tour(nodes, tour);
    CHECK(tour_length(nodes, tour) <= after + 1e-9);
    CHECK(tour.front() == 0);
    auto sorted = tour;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) CHECK(sorted[k] == k);
  }
  // Moving node 3 between 1 and 2 is the only improvement here.
  const std::vector<Vec2> line{{0, 0}, {1, 0}, {3, 0}, {2, 0}, {4, 0}};
  std::vector<std::size_t> tour{0, 1, 2, 3, 4};
  CHECK(or_opt(line, tour));
  CHECK(tour_length(line, tour) == doctest::Approx(8.0));
}

TEST_CASE("robot plan") {
  const Vec2 x0{0, 0};
  std::mt19937_64 rng(3);
  const auto pts = oracle::uniform_points(rng, 40, 1, 1, 59, 39);
  const auto small = plan_robot(targets(pts), RobotConfig{0.2}, field(), x0);
  const auto large = plan_robot(targets(pts), RobotConfig{1.25}, field(), x0);
  CHECK(small.route.front() == x0);
  CHECK(small.route.back() == x0);
  CHECK(small.route.size() == pts.size() + 2);
  CHECK(small.route == large.route);  // independent of the treatment radius
  CHECK(small.driving_distance == doctest::Approx(polyline_length(small.route)));
  for (const Vec2 p : pts) {
    CHECK(std::count(small.route.begin(), small.route.end(), p) == 1);
    CHECK(small.treated_region.covers(p));
  }
  CHECK(large.treated_region.count() > small.treated_region.count());

  const auto empty = plan_robot(targets({}), RobotConfig{0.2}, field(), x0);
  CHECK(empty.route == std::vector<Vec2>{x0});
  CHECK(empty.driving_distance == 0.0);
  CHECK(empty.treated_region.count() == 0);

  CHECK_THROWS_AS(plan_robot(targets(pts), RobotConfig{0.2}, field(), {-5, 0}), Error);
  CHECK_THROWS_AS(plan_robot(targets(pts), RobotConfig{0.0}, field(), x0), Error);
}

TEST_CASE("tractor: one target gives one 0.25 m square") {
  const auto plan = plan_tractor(targets({{20.02, 10.03}}), TractorConfig{}, field(), {0, 0});
  CHECK(std::abs(plan.treated_region.area() - 0.0625) <= 0.005);
  REQUIRE(plan.tractor);
  CHECK(plan.tractor->fallback);
  CHECK(plan.tractor->sections.size() == 1);
  CHECK(plan.route.front() == Vec2{0, 0});
  CHECK(plan.route.back() == Vec2{0, 0});
}

TEST_CASE("tractor: sections do not change the route") {
  std::mt19937_64 rng(4);
  const auto pts = oracle::uniform_points(rng, 30, 5, 5, 45, 30);
  TractorConfig one{2.5, 1, std::nullopt}, five{2.5, 5, std::nullopt};
  const auto a = plan_tractor(targets(pts), one, field(), {0, 0});
  const auto b = plan_tractor(targets(pts), five, field(), {0, 0});
  CHECK(a.route == b.route);
  CHECK(a.driving_distance == b.driving_distance);
  CHECK(a.treated_region.area() >= b.treated_region.area());
}

TEST_CASE("tractor coverage geometry") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::uniform_points(rng, 3 + trial, 2, 2, 58, 38);
    const TractorConfig cfg{2.5, 10, std::nullopt};
    const auto plan = plan_tractor(targets(pts), cfg, field(), {0, 0});
    REQUIRE(plan.tractor);
    const auto& lay = *plan.tractor;
    const double half = 0.5 * cfg.meander_width + 1e-9;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Swath& s = lay.swaths[lay.target_swath[k]];
      CHECK(std::abs(dot(pts[k], lay.across) - s.offset) <= half);
      CHECK(lay.sections[k].contains(pts[k], 1e-9));
      CHECK(plan.treated_region.covers(pts[k]));
    }
    for (const Vec2 v : lay.infested_hull) {
      double best = 1e300;
      for (const Swath& s : lay.swaths) best = std::min(best, oracle::segment_distance(v, s.start, s.end));
      CHECK(best <= half);
    }
    // Consecutive route legs alternate between along-track and cross-track.
    for (std::size_t k = 1; k + 2 < plan.route.size(); ++k) {
      const Vec2 d = plan.route[k + 1] - plan.route[k];
      const double along = std::abs(dot(d, lay.direction));
      const double across = std::abs(dot(d, lay.across));
      CHECK(std::min(along, across) <= 1e-9 * std::max(1.0, std::max(along, across)));
    }
  }
}

TEST_CASE("tractor: empty targets and invalid configs") {
  const auto empty = plan_tractor(targets({}), TractorConfig{}, field(), {0, 0});
  CHECK(empty.route == std::vector<Vec2>{{0, 0}});
  CHECK(empty.driving_distance == 0.0);
  CHECK_THROWS_AS(plan_tractor(targets({{1, 1}}), TractorConfig{0.0, 10, std::nullopt}, field(), {0, 0}), Error);
  CHECK_THROWS_AS(plan_tractor(targets({{1, 1}}), TractorConfig{2.5, 0, std::nullopt}, field(), {0, 0}), Error);
  CHECK_THROWS_AS(plan_tractor(targets({{1, 1}}), TractorConfig{}, field(), {100, 0}), Error);
  CHECK(TractorConfig{}.effective_treatment_length() == doctest::Approx(0.25));
}
