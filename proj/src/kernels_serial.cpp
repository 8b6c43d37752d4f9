#include "kernels_detail.hpp"

namespace weedsim::kernels::serial {

std::vector<std::uint8_t> inside_mask(std::span<const Vec2> ring, const Grid& grid) {
  std::vector<std::uint8_t> mask(grid.cell_count());
  for (int j = 0; j < grid.ny; ++j) detail::inside_row(ring, grid, j, mask.data() + grid.index(0, j));
  return mask;
}

CellReduction reduce_cells(const Grid& grid, std::span<const std::uint8_t> mask, const CellFunction& f) {
  std::vector<detail::RowReduction> rows(static_cast<std::size_t>(grid.ny));
  for (int j = 0; j < grid.ny; ++j) rows[static_cast<std::size_t>(j)] = detail::reduce_row(grid, mask, f, j);
  return detail::fold_rows(rows);
}

std::size_t max_disk_count(const Grid& grid, std::span<const std::uint8_t> mask,
                           std::span<const Vec2> points, double radius) {
  if (points.empty()) return 0;
  const auto sorted = detail::sorted_by_y(points);
  std::vector<int> counts(static_cast<std::size_t>(grid.nx));
  std::size_t best = 0;
  for (int j = 0; j < grid.ny; ++j) {
    best = std::max(best, detail::disk_count_row(grid, mask, sorted, radius, j, counts));
  }
  return best;
}

double loo_log_likelihood(std::span<const Vec2> anchors, double bandwidth) {
  std::vector<double> terms(anchors.size());
  for (std::size_t k = 0; k < anchors.size(); ++k) terms[k] = detail::loo_log_density(anchors, bandwidth, k);
  return detail::fold_log_terms(terms);
}

}  // namespace weedsim::kernels::serial
