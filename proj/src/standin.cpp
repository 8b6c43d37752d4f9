#include <cmath>
#include <numbers>

#include "weedsim/harness.hpp"
#include "weedsim/rng.hpp"

namespace weedsim {

// Thomas-like cluster pattern: ~85% of the points scatter (sd 3 m) around 35
// uniformly placed parents, the rest are uniform background. Box-Muller on
// uniform01 keeps the pattern identical across standard libraries.
std::vector<Vec2> standin_anchors(const Field& field, std::size_t count, std::uint64_t seed) {
  constexpr int kParents = 35;
  constexpr double kSpread = 3.0;
  constexpr double kBackground = 0.15;

  Rng rng(seed);
  const BoundingBox& box = field.bbox();
  auto uniform_in_field = [&] {
    while (true) {
      const Vec2 p{box.min.x + uniform01(rng) * box.width(), box.min.y + uniform01(rng) * box.height()};
      if (contains(field, p)) return p;
    }
  };
  std::vector<Vec2> parents;
  for (int k = 0; k < kParents; ++k) parents.push_back(uniform_in_field());

  const auto background = static_cast<std::size_t>(std::lround(kBackground * static_cast<double>(count)));
  std::vector<Vec2> out;
  out.reserve(count);
  while (out.size() < count - background) {
    const Vec2 parent = parents[static_cast<std::size_t>(uniform01(rng) * kParents)];
    const double r = kSpread * std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    const Vec2 p{parent.x + r * std::cos(a), parent.y + r * std::sin(a)};
    if (contains(field, p)) out.push_back(p);
  }
  while (out.size() < count) out.push_back(uniform_in_field());
  return out;
}

}  // namespace weedsim
