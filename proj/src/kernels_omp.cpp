#include <omp.h>

#include "kernels_detail.hpp"

namespace weedsim::kernels::parallel {

std::vector<std::uint8_t> inside_mask(std::span<const Vec2> ring, const Grid& grid) {
  std::vector<std::uint8_t> mask(grid.cell_count());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < grid.ny; ++j) detail::inside_row(ring, grid, j, mask.data() + grid.index(0, j));
  return mask;
}

CellReduction reduce_cells(const Grid& grid, std::span<const std::uint8_t> mask, const CellFunction& f) {
  std::vector<detail::RowReduction> rows(static_cast<std::size_t>(grid.ny));
#pragma omp parallel for schedule(dynamic, 16)
  for (int j = 0; j < grid.ny; ++j) rows[static_cast<std::size_t>(j)] = detail::reduce_row(grid, mask, f, j);
  return detail::fold_rows(rows);
}

std::size_t max_disk_count(const Grid& grid, std::span<const std::uint8_t> mask,
                           std::span<const Vec2> points, double radius) {
  if (points.empty()) return 0;
  const auto sorted = detail::sorted_by_y(points);
  std::vector<std::size_t> row_best(static_cast<std::size_t>(grid.ny), 0);
#pragma omp parallel
  {
    std::vector<int> counts(static_cast<std::size_t>(grid.nx));
#pragma omp for schedule(dynamic, 16)
    for (int j = 0; j < grid.ny; ++j) {
      row_best[static_cast<std::size_t>(j)] = detail::disk_count_row(grid, mask, sorted, radius, j, counts);
    }
  }
  std::size_t best = 0;
  for (auto b : row_best) best = std::max(best, b);
  return best;
}

double loo_log_likelihood(std::span<const Vec2> anchors, double bandwidth) {
  std::vector<double> terms(anchors.size());
  const auto n = static_cast<std::ptrdiff_t>(anchors.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    terms[static_cast<std::size_t>(k)] = detail::loo_log_density(anchors, bandwidth, static_cast<std::size_t>(k));
  }
  return detail::fold_log_terms(terms);
}

}  // namespace weedsim::kernels::parallel
