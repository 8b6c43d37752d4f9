#include "weedsim/observe.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "weedsim/error.hpp"
#include "weedsim/rng.hpp"

namespace weedsim {

namespace {

ThinningSpec checked(double p, ThinningLabel label) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "retain probability must lie in (0, 1]");
  return {p, label};
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index becomes the root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ThinningSpec ThinningSpec::obs1(const ReferenceCounts& counts) {
  return checked(static_cast<double>(counts.observed_early) / counts.ground_truth, ThinningLabel::obs1);
}

ThinningSpec ThinningSpec::obs2(const ReferenceCounts& counts) {
  return checked(static_cast<double>(counts.observed_late) / counts.ground_truth, ThinningLabel::obs2);
}

ThinningSpec ThinningSpec::custom(double p) { return checked(p, ThinningLabel::custom); }

PointPattern thin(const PointPattern& pattern, const ThinningSpec& spec, std::uint64_t seed) {
  checked(spec.retain_probability, spec.label);
  PointPattern out;
  out.role = PatternRole::observed;
  out.points.reserve(static_cast<std::size_t>(std::ceil(pattern.size() * spec.retain_probability)) + 16);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (spec.retain_probability >= 1.0 || hashed_uniform(seed, i) < spec.retain_probability) {
      out.points.push_back(pattern.points[i]);
    }
  }
  return out;
}

PointPattern merge_close(const PointPattern& pattern, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "merge radius must be positive");
  const auto& pts = pattern.points;
  const std::size_t n = pts.size();
  PointPattern out;
  out.role = pattern.role;
  if (n == 0) return out;

  // Hash grid with cell = radius: close pairs are in adjacent cells.
  auto key = [radius](Vec2 p) {
    const auto i = static_cast<std::int64_t>(std::floor(p.x / radius));
    const auto j = static_cast<std::int64_t>(std::floor(p.y / radius));
    return std::pair{i, j};
  };
  auto pack = [](std::int64_t i, std::int64_t j) {
    return static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(j);
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  buckets.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [i, j] = key(pts[k]);
    buckets[pack(i, j)].push_back(k);
  }

  DisjointSets sets(n);
  const double r2 = radius * radius;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [i, j] = key(pts[k]);
    for (std::int64_t dj = -1; dj <= 1; ++dj) {
      for (std::int64_t di = -1; di <= 1; ++di) {
        const auto it = buckets.find(pack(i + di, j + dj));
        if (it == buckets.end()) continue;
        for (std::size_t m : it->second) {
          if (m > k && distance_sq(pts[k], pts[m]) < r2) sets.unite(k, m);
        }
      }
    }
  }

  // Roots are the smallest index in each component, so iterating k in order
  // emits components by first member.
  std::vector<std::size_t> slot(n, n);
  std::vector<Vec2> sums;
  std::vector<std::size_t> counts;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t root = sets.find(k);
    if (slot[root] == n) {
      slot[root] = sums.size();
      sums.push_back({0.0, 0.0});
      counts.push_back(0);
    }
    sums[slot[root]] = sums[slot[root]] + pts[k];
    ++counts[slot[root]];
  }
  out.points.reserve(sums.size());
  for (std::size_t c = 0; c < sums.size(); ++c) {
    const double inv = static_cast<double>(counts[c]);
    out.points.push_back({sums[c].x / inv, sums[c].y / inv});
  }
  return out;
}

}  // namespace weedsim
