#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "weedsim/error.hpp"
#include "weedsim/harness.hpp"
#include "weedsim/pointproc.hpp"

using namespace weedsim;

namespace {

// Integral of lambda over the field by an independent midpoint sum.
double grid_integral(const IntensityModel& m, const Field& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (f.inside_mask()[g.index(i, j)]) s += eval_intensity(m, g.center(i, j));
    }
  }
  return s * g.step * g.step;
}

const Field& small_field() {
  static const Field f({{0, 0}, {40, 0}, {40, 20}, {0, 20}}, 0.1);
  return f;
}

}  // namespace

TEST_CASE("homogeneous normalization is n_ref over the field area") {
  const Field f = default_field();
  const auto m = normalize(IntensityModel::homogeneous(1.0, 2313), f);
  REQUIRE(m.alpha());
  CHECK(*m.alpha() == doctest::Approx(2313.0 / 8256.0).epsilon(1e-12));
  CHECK(eval_intensity(m.with_intensity_factor(2.0), {3, 3}) == doctest::Approx(2.0 * 2313.0 / 8256.0));
}

TEST_CASE("unnormalized models refuse evaluation and sampling") {
  const auto m = IntensityModel::homogeneous(1.0, 2313);
  CHECK_THROWS_AS(eval_intensity(m, {0, 0}), Error);
  CHECK_THROWS_AS(sample_poisson(m, small_field(), 1), Error);
  try {
    eval_intensity(m, {0, 0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNormalized);
  }
}

TEST_CASE("every model integrates to factor * n_ref over the field") {
  const Field& f = small_field();
  std::mt19937_64 rng(8);
  const auto anchors = oracle::uniform_points(rng, 50, 1, 1, 39, 19);
  for (const auto kind : {ModelKind::Hom, ModelKind::Cen, ModelKind::Sin, ModelKind::Cal}) {
    const auto raw = make_default_model(kind, f, 1.5, 500, anchors, 1.2);
    const auto m = normalize(raw, f);
    CHECK(grid_integral(m, f) == doctest::Approx(750.0).epsilon(1e-9));
    CHECK(m.base_grid_max() > 0.0);
  }
}

TEST_CASE("model parameters follow the defaults") {
  const Field f = default_field();
  const auto cen = make_default_model(ModelKind::Cen, f, 1.0);
  CHECK(cen.mean().x == doctest::Approx(64.0));
  CHECK(cen.mean().y == doctest::Approx(32.25));
  CHECK(cen.covariance().xx == 218.8);
  CHECK(cen.covariance().xy == 324.1);
  CHECK(cen.covariance().yy == 549.4);
  const auto sin = make_default_model(ModelKind::Sin, f, 1.0);
  CHECK(sin.wavelength() == 28.3);
  CHECK(std::abs(sin.wave_normal().x) == doctest::Approx(1.0));  // long side of the 128 x 64.5 field
  // base = sin(2 pi <u, x> / 28.3) + 2 stays within [1, 3].
  CHECK(sin.base({28.3 / 4, 0}) == doctest::Approx(3.0));
  CHECK(sin.base({3 * 28.3 / 4, 0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_default_model(ModelKind::Cal, f, 1.0), Error);
}

TEST_CASE("Cal base is a Gaussian kernel sum") {
  const std::vector<Vec2> anchors{{10, 10}, {12, 10}, {30, 5}};
  const auto m = IntensityModel::calibrated(anchors, 1.5, 1.0, 100);
  const Vec2 x{11, 10.5};
  double expected = 0.0;
  for (const Vec2 a : anchors) expected += std::exp(-distance_sq(x, a) / (2 * 1.5 * 1.5));
  CHECK(m.base(x) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(m.base({100, 100}) == 0.0);  // beyond the 8 h truncation
}

TEST_CASE("bandwidth gamma matches mean 1.5 and sd 1.1") {
  const auto g = bandwidth_gamma();
  CHECK(g.shape * g.scale == doctest::Approx(1.5));
  CHECK(std::sqrt(g.shape) * g.scale == doctest::Approx(1.1));
  const auto a = bandwidth_candidates(42);
  CHECK(a.size() == 50);
  CHECK(a == bandwidth_candidates(42));
  for (const double h : a) CHECK(h > 0.0);
}

TEST_CASE("bandwidth selection picks the leave-one-out argmax") {
  const Field& f = small_field();
  const auto anchors = standin_anchors(f, 300, 9);
  const auto sel = select_bandwidth(PointPattern{anchors}, f, 17, 20);
  REQUIRE(sel.candidates.size() == 20);
  double best = -std::numeric_limits<double>::infinity();
  double best_h = 0.0;
  for (const double h : sel.candidates) {
    const double ll = kernels::loo_log_likelihood(anchors, h, kernels::Exec::serial);
    if (ll > best || (ll == best && h < best_h)) {
      best = ll;
      best_h = h;
    }
  }
  CHECK(sel.bandwidth == best_h);
  CHECK_THROWS_AS(select_bandwidth(PointPattern{{{1, 1}, {2, 2}}}, f, 1), Error);
}

TEST_CASE("Poisson sampling is deterministic and stays in the field") {
  const Field& f = small_field();
  for (const auto kind : {ModelKind::Hom, ModelKind::Cen, ModelKind::Sin}) {
    const auto m = normalize(make_default_model(kind, f, 1.0, 400), f);
    const auto a = sample_poisson(m, f, 99);
    const auto b = sample_poisson(m, f, 99);
    CHECK(a.points == b.points);
    CHECK(a.role == PatternRole::ground_truth);
    for (const Vec2 p : a.points) CHECK(contains(f, p));
    CHECK(std::abs(static_cast<double>(a.size()) - 400.0) < 5 * std::sqrt(400.0));
  }
}

TEST_CASE("Poisson counts have unit dispersion; Hom x is uniform") {
  const Field& f = small_field();
  const auto hom = normalize(make_default_model(ModelKind::Hom, f, 1.0, 400), f);
  const int seeds = 200;
  double sum = 0.0, sq = 0.0;
  std::vector<double> xs;
  for (int s = 0; s < seeds; ++s) {
    const auto p = sample_poisson(hom, f, 5000 + static_cast<std::uint64_t>(s));
    const double n = static_cast<double>(p.size());
    sum += n;
    sq += n * n;
    if (s < 20) {
      for (const Vec2 v : p.points) xs.push_back(v.x);
    }
  }
  const double mean = sum / seeds;
  const double var = (sq - seeds * mean * mean) / (seeds - 1);
  CHECK(var / mean >= 0.8);
  CHECK(var / mean <= 1.2);

  // One-sample KS against U(0, 40), pooled over 20 seeds; 1.628 / sqrt(n)
  // is the asymptotic critical value at alpha = 0.01.
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double c = xs[k] / 40.0;
    d = std::max({d, c - static_cast<double>(k) / n, static_cast<double>(k + 1) / n - c});
  }
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("Cen concentrates mass inside its 2-sigma ellipse") {
  // Large enough that the ellipse is not clipped; coarse grid keeps it fast.
  const Field f({{-150, -150}, {150, -150}, {150, 150}, {-150, 150}}, 0.25);
  const Covariance2 cov{218.8, 324.1, 549.4};
  const auto m = normalize(IntensityModel::centered({0, 0}, cov, 1.0, 2313), f);
  const auto s = sample_poisson(m, f, 5);
  std::size_t inside = 0;
  for (const Vec2 p : s.points) {
    const double q = (cov.yy * p.x * p.x - 2 * cov.xy * p.x * p.y + cov.xx * p.y * p.y) / cov.det();
    if (q <= 4.0) ++inside;
  }
  const double frac = static_cast<double>(inside) / static_cast<double>(s.size());
  CHECK(frac >= 0.82);
  CHECK(frac <= 0.93);
}

TEST_CASE("pattern validation") {
  const Field& f = small_field();
  CHECK_NOTHROW(validate_pattern(PointPattern{{{1, 1}, {2, 2}}}, f));
  CHECK_THROWS_AS(validate_pattern(PointPattern{{{1, 1}, {1, 1}}}, f), Error);
  CHECK_THROWS_AS(validate_pattern(PointPattern{{{-1, 1}}}, f), Error);
  CHECK(parse_model_kind("Sin") == ModelKind::Sin);
  CHECK_THROWS_AS(parse_model_kind("Foo"), Error);
}
