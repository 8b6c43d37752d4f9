#include "weedsim/strategy.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "weedsim/error.hpp"

namespace weedsim {

PointPattern action_threshold(const PointPattern& observed, double threshold) {
  PointPattern out;
  out.role = PatternRole::targeted;
  if (std::isinf(threshold)) {
    out.points = observed.points;
    return out;
  }
  if (!(threshold > 0.0)) throw Error(ErrorKind::InvalidArgument, "action threshold must be positive");
  const auto& pts = observed.points;
  const std::size_t n = pts.size();
  if (n < 2) return out;

  const BoundingBox box = bounding_box(pts);
  // Bucket side = threshold, so any neighbour within it is in the 3x3 block.
  const double cell = std::max(threshold, std::max(box.width(), box.height()) / 4096.0);
  const int nx = static_cast<int>(box.width() / cell) + 1;
  const int ny = static_cast<int>(box.height() / cell) + 1;
  auto cell_of = [&](Vec2 p) {
    return std::pair{std::min(static_cast<int>((p.x - box.min.x) / cell), nx - 1),
                     std::min(static_cast<int>((p.y - box.min.y) / cell), ny - 1)};
  };
  std::vector<std::size_t> start(static_cast<std::size_t>(nx) * ny + 1, 0);
  for (const Vec2 p : pts) {
    const auto [i, j] = cell_of(p);
    ++start[static_cast<std::size_t>(j) * nx + i + 1];
  }
  for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
  std::vector<std::size_t> order(n);
  {
    auto fill = start;
    for (std::size_t k = 0; k < n; ++k) {
      const auto [i, j] = cell_of(pts[k]);
      order[fill[static_cast<std::size_t>(j) * nx + i]++] = k;
    }
  }

  const double t2 = threshold * threshold;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [ci, cj] = cell_of(pts[k]);
    bool keep = false;
    for (int j = std::max(cj - 1, 0); j <= std::min(cj + 1, ny - 1) && !keep; ++j) {
      for (int i = std::max(ci - 1, 0); i <= std::min(ci + 1, nx - 1) && !keep; ++i) {
        const std::size_t b = static_cast<std::size_t>(j) * nx + i;
        for (std::size_t s = start[b]; s < start[b + 1]; ++s) {
          const std::size_t m = order[s];
          if (m != k && distance_sq(pts[k], pts[m]) <= t2) {
            keep = true;
            break;
          }
        }
      }
    }
    if (keep) out.points.push_back(pts[k]);
  }
  return out;
}

void TractorConfig::validate() const {
  if (!(meander_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "meander width must be positive");
  if (sections < 1) throw Error(ErrorKind::InvalidArgument, "section count must be at least 1");
  if (treatment_length && !(*treatment_length > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "treatment length must be positive");
  }
}

double polyline_length(std::span<const Vec2> route) {
  double total = 0.0;
  for (std::size_t k = 1; k < route.size(); ++k) total += distance(route[k - 1], route[k]);
  return total;
}

std::vector<std::size_t> nearest_neighbor_tour(std::span<const Vec2> nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::size_t> tour;
  if (n == 0) return tour;
  tour.reserve(n);
  std::vector<bool> used(n, false);
  std::size_t current = 0;
  used[0] = true;
  tour.push_back(0);
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (used[k]) continue;
      const double d = distance_sq(nodes[current], nodes[k]);
      if (d < best_d) {  // strict: ties keep the lower index
        best_d = d;
        best = k;
      }
    }
    used[best] = true;
    tour.push_back(best);
    current = best;
  }
  return tour;
}

double tour_length(std::span<const Vec2> nodes, std::span<const std::size_t> tour) {
  double total = 0.0;
  for (std::size_t k = 0; k < tour.size(); ++k) {
    total += distance(nodes[tour[k]], nodes[tour[(k + 1) % tour.size()]]);
  }
  return total;
}

void two_opt(std::span<const Vec2> nodes, std::vector<std::size_t>& tour) {
  const std::size_t n = tour.size();
  if (n < 4) return;
  constexpr double kMinGain = 1e-10;
  auto d = [&](std::size_t a, std::size_t b) { return distance(nodes[tour[a]], nodes[tour[b]]); };
  bool improved = true;
  while (improved) {
    improved = false;
    // Edge (i, i+1) against edge (j, j+1 mod n); reversing tour[i+1..j]
    // never moves position 0.
    for (std::size_t i = 0; i + 2 < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        const std::size_t jn = (j + 1) % n;
        if (jn == i) continue;
        const double delta = d(i, j) + d(i + 1, jn) - d(i, i + 1) - d(j, jn);
        if (delta < -kMinGain) {
          std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i + 1),
                       tour.begin() + static_cast<std::ptrdiff_t>(j + 1));
          improved = true;
        }
      }
    }
  }
}

bool or_opt(std::span<const Vec2> nodes, std::vector<std::size_t>& tour) {
  const std::size_t n = tour.size();
  if (n < 4) return false;
  constexpr double kMinGain = 1e-10;
  constexpr std::size_t kNeighbors = 10;
  auto d = [&](std::size_t a, std::size_t b) { return distance(nodes[a], nodes[b]); };

  // Insertion points are restricted to edges next to the nearest neighbours
  // of the segment ends.
  const std::size_t kn = std::min(kNeighbors, n - 1);
  std::vector<std::size_t> near(n * kn);
  std::vector<std::size_t> order(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[a], order[n - 1]);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kn), order.end() - 1,
                      [&](std::size_t x, std::size_t y) {
                        const double dx = d(a, x), dy = d(a, y);
                        return dx < dy || (dx == dy && x < y);
                      });
    std::copy_n(order.begin(), kn, near.begin() + static_cast<std::ptrdiff_t>(a * kn));
  }

  std::vector<std::size_t> pos(n);
  auto reindex = [&] {
    for (std::size_t k = 0; k < n; ++k) pos[tour[k]] = k;
  };
  reindex();

  bool any = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t len = 1; len <= 3; ++len) {
      for (std::size_t s = 1; s + len <= n; ++s) {
        const std::size_t first = tour[s], last = tour[s + len - 1];
        const std::size_t prev = tour[s - 1], next = tour[(s + len) % n];
        if (next == prev) continue;
        const double removed = d(prev, first) + d(last, next) - d(prev, next);
        double best = -kMinGain;
        std::size_t best_k = n;
        bool best_reverse = false;
        for (const std::size_t end : {first, last}) {
          for (std::size_t m = 0; m < kn; ++m) {
            const std::size_t c = pos[near[end * kn + m]];
            // Edges (c-1, c) and (c, c+1), kept outside the segment and its joints.
            for (const std::size_t k : {(c + n - 1) % n, c}) {
              if (k + 1 >= s && k < s + len) continue;
              const std::size_t a = tour[k], b = tour[(k + 1) % n];
              const double forward = d(a, first) + d(last, b) - d(a, b) - removed;
              const double backward = d(a, last) + d(first, b) - d(a, b) - removed;
              if (forward < best) {
                best = forward;
                best_k = k;
                best_reverse = false;
              }
              if (backward < best) {
                best = backward;
                best_k = k;
                best_reverse = true;
              }
            }
          }
        }
        if (best_k == n) continue;
        const std::size_t a = tour[best_k];
        std::vector<std::size_t> segment(tour.begin() + static_cast<std::ptrdiff_t>(s),
                                         tour.begin() + static_cast<std::ptrdiff_t>(s + len));
        if (best_reverse) std::reverse(segment.begin(), segment.end());
        tour.erase(tour.begin() + static_cast<std::ptrdiff_t>(s), tour.begin() + static_cast<std::ptrdiff_t>(s + len));
        const auto at = std::find(tour.begin(), tour.end(), a) + 1;
        tour.insert(at, segment.begin(), segment.end());
        reindex();
        improved = any = true;
      }
    }
  }
  return any;
}

void improve_tour(std::span<const Vec2> nodes, std::vector<std::size_t>& tour) {
  do {
    two_opt(nodes, tour);
  } while (or_opt(nodes, tour));
}

namespace {

void require_start(const Field& field, Vec2 start) {
  if (!contains(field, start)) throw Error(ErrorKind::InvalidStart, "start point lies outside the field");
}

}  // namespace

TreatmentPlan plan_robot(const PointPattern& targeted, const RobotConfig& cfg, const Field& field, Vec2 start) {
  if (!(cfg.treatment_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "treatment radius must be positive");
  require_start(field, start);
  TreatmentPlan plan;
  plan.targeted = targeted;
  plan.targeted.role = PatternRole::targeted;
  if (targeted.empty()) {
    plan.route = {start};
    plan.treated_region = RasterRegion(field.grid());
    return plan;
  }

  std::vector<Vec2> nodes;
  nodes.reserve(targeted.size() + 1);
  nodes.push_back(start);
  nodes.insert(nodes.end(), targeted.points.begin(), targeted.points.end());
  auto tour = nearest_neighbor_tour(nodes);
  improve_tour(nodes, tour);

  plan.route.reserve(nodes.size() + 1);
  for (std::size_t k : tour) plan.route.push_back(nodes[k]);
  plan.route.push_back(start);
  plan.driving_distance = polyline_length(plan.route);
  plan.treated_region = rasterize_disks(field, targeted.points, cfg.treatment_radius);
  // The cell holding each target counts as treated even when its center
  // falls outside the disk or the field.
  mark_cells(plan.treated_region, targeted.points);
  return plan;
}

}  // namespace weedsim
