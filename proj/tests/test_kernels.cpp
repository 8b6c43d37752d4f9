#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weedsim/kernels.hpp"

using namespace weedsim;
using kernels::Exec;

namespace {

const std::vector<Vec2> kRing{{0, 0}, {9, 0}, {9, 2}, {3, 2}, {3, 6}, {0, 6}};

}  // namespace

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
  const Grid g = Grid::covering(bounding_box(kRing), 0.05);
  const auto serial_mask = kernels::inside_mask(kRing, g, Exec::serial);
  CHECK(serial_mask == kernels::inside_mask(kRing, g, Exec::parallel));

  const kernels::CellFunction f = [](Vec2 x) { return std::sin(x.x) * std::exp(-0.1 * x.y) + 2.0; };
  const auto rs = kernels::reduce_cells(g, serial_mask, f, Exec::serial);
  const auto rp = kernels::reduce_cells(g, serial_mask, f, Exec::parallel);
  CHECK(rs.sum == rp.sum);
  CHECK(rs.max == rp.max);
  CHECK(rs.cells == rp.cells);

  std::mt19937_64 rng(5);
  const auto pts = oracle::uniform_points(rng, 300, 0, 0, 9, 6);
  CHECK(kernels::max_disk_count(g, serial_mask, pts, 2.0, Exec::serial) ==
        kernels::max_disk_count(g, serial_mask, pts, 2.0, Exec::parallel));
  CHECK(kernels::loo_log_likelihood(pts, 0.7, Exec::serial) == kernels::loo_log_likelihood(pts, 0.7, Exec::parallel));
}

TEST_CASE("inside mask matches ray casting") {
  const Grid g = Grid::covering(bounding_box(kRing), 0.1);
  const auto mask = kernels::inside_mask(kRing, g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      CHECK((mask[g.index(i, j)] != 0) == oracle::ray_cast_contains(kRing, g.center(i, j)));
    }
  }
}

TEST_CASE("cell reduction is the midpoint rule") {
  const Grid g = Grid::covering({{0, 0}, {2, 1}}, 0.05);
  const std::vector<std::uint8_t> all(g.cell_count(), 1);
  const auto r = kernels::reduce_cells(g, all, [](Vec2 x) { return x.x; });
  CHECK(r.cells == 40u * 20u);
  CHECK(r.sum * 0.05 * 0.05 == doctest::Approx(2.0));  // integral of x over [0,2]x[0,1]
  CHECK(r.max == doctest::Approx(1.975));
}

TEST_CASE("disk counts equal the brute-force oracle") {
  std::mt19937_64 rng(6);
  const Grid g = Grid::covering(bounding_box(kRing), 0.05);
  const auto mask = kernels::inside_mask(kRing, g);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = oracle::uniform_points(rng, 20 + 20 * trial, -1, -1, 10, 7);
    for (const double r : {0.3, 2.0}) {
      CHECK(kernels::max_disk_count(g, mask, pts, r) == oracle::max_disk_count(g, mask, pts, r));
    }
  }
  CHECK(kernels::max_disk_count(g, mask, std::vector<Vec2>{}, 2.0) == 0);
}

TEST_CASE("leave-one-out likelihood equals the direct double sum") {
  std::mt19937_64 rng(7);
  const auto pts = oracle::uniform_points(rng, 60, 0, 0, 10, 10);
  for (const double h : {0.5, 1.5, 4.0}) {
    double expected = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      double s = 0.0;
      for (std::size_t m = 0; m < pts.size(); ++m) {
        if (m != k) s += std::exp(-distance_sq(pts[k], pts[m]) / (2 * h * h));
      }
      expected += std::log(s / ((pts.size() - 1) * 2 * std::numbers::pi * h * h));
    }
    CHECK(kernels::loo_log_likelihood(pts, h) == doctest::Approx(expected).epsilon(1e-12));
  }
  // An isolated anchor makes the density underflow.
  const std::vector<Vec2> far{{0, 0}, {0.1, 0}, {1000, 0}};
  CHECK(std::isinf(kernels::loo_log_likelihood(far, 0.1)));
}
