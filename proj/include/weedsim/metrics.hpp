#pragma once

#include <cstddef>
#include <optional>

#include "weedsim/geometry.hpp"
#include "weedsim/kernels.hpp"
#include "weedsim/pointproc.hpp"
#include "weedsim/strategy.hpp"

namespace weedsim {

// Performance measures of one treatment; all are minimized by a good
// treatment. Undefined values (no ground truth, nothing treated) are nullopt.
struct MetricsRecord {
  double d_d = 0.0;              // driving distance, m
  std::optional<double> f_r;     // fraction of ground-truth weeds left untreated
  std::optional<double> rho2;    // max untreated weeds per m^2 in a 2 m disk
  double A_t = 0.0;              // treated area / field area
  std::optional<double> A_eff;   // treated area per treated weed, m^2
  std::size_t n_ground_truth = 0;
  std::size_t n_observed = 0;
  std::size_t n_targeted = 0;
  std::size_t n_treated = 0;
};

// Ground-truth locations whose raster cell is set in the region.
PointPattern treated_weeds(const PointPattern& ground_truth, const RasterRegion& region);
PointPattern treated_weeds(const PointPattern& ground_truth, const TreatmentPlan& plan);

// rho2 from the untreated locations: max count within `radius` of any field
// grid node, divided by the disk area.
double max_remaining_density(const Field& field, std::span<const Vec2> untreated,
                             double radius = defaults::kDensityDiskRadius,
                             kernels::Exec exec = kernels::Exec::parallel);

// n_observed is not known to the plan and is left 0 for the caller to fill.
MetricsRecord compute_metrics(const PointPattern& ground_truth, const TreatmentPlan& plan, const Field& field,
                              kernels::Exec exec = kernels::Exec::parallel);

}  // namespace weedsim
