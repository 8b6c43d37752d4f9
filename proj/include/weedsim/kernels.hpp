#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version and
// an OpenMP version; both produce bit-identical results for any thread count
// because per-row partial results are folded serially in row order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "weedsim/geometry.hpp"

namespace weedsim::kernels {

enum class Exec { serial, parallel };

struct CellReduction {
  double sum = 0.0;  // sum of f over cells with mask set
  double max = 0.0;  // max of f over those cells (0 if none)
  std::size_t cells = 0;
};

using CellFunction = std::function<double(Vec2)>;

namespace serial {
std::vector<std::uint8_t> inside_mask(std::span<const Vec2> ring, const Grid& grid);
CellReduction reduce_cells(const Grid& grid, std::span<const std::uint8_t> mask, const CellFunction& f);
std::size_t max_disk_count(const Grid& grid, std::span<const std::uint8_t> mask,
                           std::span<const Vec2> points, double radius);
double loo_log_likelihood(std::span<const Vec2> anchors, double bandwidth);
}  // namespace serial

namespace parallel {
std::vector<std::uint8_t> inside_mask(std::span<const Vec2> ring, const Grid& grid);
CellReduction reduce_cells(const Grid& grid, std::span<const std::uint8_t> mask, const CellFunction& f);
std::size_t max_disk_count(const Grid& grid, std::span<const std::uint8_t> mask,
                           std::span<const Vec2> points, double radius);
double loo_log_likelihood(std::span<const Vec2> anchors, double bandwidth);
}  // namespace parallel

// Mask of grid cells whose center is inside the closed polygon.
inline std::vector<std::uint8_t> inside_mask(std::span<const Vec2> ring, const Grid& grid,
                                             Exec exec = Exec::parallel) {
  return exec == Exec::serial ? serial::inside_mask(ring, grid) : parallel::inside_mask(ring, grid);
}

// Midpoint-rule sum and maximum of f over the masked cell centers.
inline CellReduction reduce_cells(const Grid& grid, std::span<const std::uint8_t> mask,
                                  const CellFunction& f, Exec exec = Exec::parallel) {
  return exec == Exec::serial ? serial::reduce_cells(grid, mask, f)
                              : parallel::reduce_cells(grid, mask, f);
}

// max over masked cell centers x of #{p : |p - x| <= radius}.
inline std::size_t max_disk_count(const Grid& grid, std::span<const std::uint8_t> mask,
                                  std::span<const Vec2> points, double radius,
                                  Exec exec = Exec::parallel) {
  return exec == Exec::serial ? serial::max_disk_count(grid, mask, points, radius)
                              : parallel::max_disk_count(grid, mask, points, radius);
}

// Leave-one-out log-likelihood of the anchors under a Gaussian kernel density
// estimate with the given bandwidth; -infinity if any leave-one-out density
// underflows to zero.
inline double loo_log_likelihood(std::span<const Vec2> anchors, double bandwidth,
                                 Exec exec = Exec::parallel) {
  return exec == Exec::serial ? serial::loo_log_likelihood(anchors, bandwidth)
                              : parallel::loo_log_likelihood(anchors, bandwidth);
}

}  // namespace weedsim::kernels
