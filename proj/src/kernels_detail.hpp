#pragma once

// Per-row bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "weedsim/geometry.hpp"
#include "weedsim/kernels.hpp"

namespace weedsim::kernels::detail {

inline void inside_row(std::span<const Vec2> ring, const Grid& grid, int j, std::uint8_t* row) {
  const double y = grid.center_y(j);
  for (int i = 0; i < grid.nx; ++i) {
    row[i] = polygon_contains(ring, {grid.center_x(i), y}) ? 1 : 0;
  }
}

struct RowReduction {
  double sum = 0.0;
  double max = 0.0;
  std::size_t cells = 0;
};

inline RowReduction reduce_row(const Grid& grid, std::span<const std::uint8_t> mask,
                               const CellFunction& f, int j) {
  RowReduction out;
  const double y = grid.center_y(j);
  const std::size_t base = grid.index(0, j);
  for (int i = 0; i < grid.nx; ++i) {
    if (!mask[base + static_cast<std::size_t>(i)]) continue;
    const double v = f({grid.center_x(i), y});
    out.sum += v;
    out.max = std::max(out.max, v);
    ++out.cells;
  }
  return out;
}

inline CellReduction fold_rows(std::span<const RowReduction> rows) {
  CellReduction out;
  for (const auto& r : rows) {
    out.sum += r.sum;
    out.max = std::max(out.max, r.max);
    out.cells += r.cells;
  }
  return out;
}

// Points sorted by y so that each row scans only nearby candidates.
inline std::vector<Vec2> sorted_by_y(std::span<const Vec2> points) {
  std::vector<Vec2> out(points.begin(), points.end());
  std::sort(out.begin(), out.end(), [](Vec2 a, Vec2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); });
  return out;
}

// Max disk count along row j; `counts` is scratch of size grid.nx.
inline std::size_t disk_count_row(const Grid& grid, std::span<const std::uint8_t> mask,
                                  std::span<const Vec2> sorted, double radius, int j,
                                  std::vector<int>& counts) {
  const double yc = grid.center_y(j);
  const double r2 = radius * radius;
  const double margin = radius + grid.step;
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), yc - margin,
                             [](Vec2 p, double v) { return p.y < v; });
  auto hi = std::upper_bound(sorted.begin(), sorted.end(), yc + margin,
                             [](double v, Vec2 p) { return v < p.y; });
  if (lo == hi) return 0;
  std::fill(counts.begin(), counts.end(), 0);
  for (auto it = lo; it != hi; ++it) {
    const Vec2 p = *it;
    const double dy = p.y - yc;
    const double rem = r2 - dy * dy;
    if (rem < -1e-12) continue;
    const double half = std::sqrt(std::max(rem, 0.0));
    int i0 = static_cast<int>(std::floor((p.x - half - grid.origin.x) / grid.step - 0.5)) - 1;
    int i1 = static_cast<int>(std::ceil((p.x + half - grid.origin.x) / grid.step - 0.5)) + 1;
    i0 = std::max(i0, 0);
    i1 = std::min(i1, grid.nx - 1);
    for (int i = i0; i <= i1; ++i) {
      if (distance_sq(p, grid.center(i, j)) <= r2) ++counts[static_cast<std::size_t>(i)];
    }
  }
  std::size_t best = 0;
  const std::size_t base = grid.index(0, j);
  for (int i = 0; i < grid.nx; ++i) {
    if (mask[base + static_cast<std::size_t>(i)]) {
      best = std::max(best, static_cast<std::size_t>(counts[static_cast<std::size_t>(i)]));
    }
  }
  return best;
}

// log of the leave-one-out Gaussian KDE density at anchor k.
inline double loo_log_density(std::span<const Vec2> anchors, double bandwidth, std::size_t k) {
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  const Vec2 a = anchors[k];
  double sum = 0.0;
  for (std::size_t m = 0; m < anchors.size(); ++m) {
    if (m == k) continue;
    const double e = distance_sq(a, anchors[m]) * inv;
    if (e < 745.0) sum += std::exp(-e);
  }
  if (sum <= 0.0) return -std::numeric_limits<double>::infinity();
  const double norm = static_cast<double>(anchors.size() - 1) * 2.0 * std::numbers::pi * bandwidth * bandwidth;
  return std::log(sum / norm);
}

inline double fold_log_terms(std::span<const double> terms) {
  double total = 0.0;
  for (double t : terms) {
    if (std::isinf(t)) return -std::numeric_limits<double>::infinity();
    total += t;
  }
  return total;
}

}  // namespace weedsim::kernels::detail
