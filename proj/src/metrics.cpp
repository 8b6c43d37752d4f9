#include "weedsim/metrics.hpp"

#include <numbers>

namespace weedsim {

PointPattern treated_weeds(const PointPattern& ground_truth, const RasterRegion& region) {
  PointPattern out;
  out.role = PatternRole::treated;
  for (const Vec2 p : ground_truth.points) {
    if (region.covers(p)) out.points.push_back(p);
  }
  return out;
}

PointPattern treated_weeds(const PointPattern& ground_truth, const TreatmentPlan& plan) {
  return treated_weeds(ground_truth, plan.treated_region);
}

double max_remaining_density(const Field& field, std::span<const Vec2> untreated, double radius,
                             kernels::Exec exec) {
  const std::size_t best = kernels::max_disk_count(field.grid(), field.inside_mask(), untreated, radius, exec);
  return static_cast<double>(best) / (std::numbers::pi * radius * radius);
}

MetricsRecord compute_metrics(const PointPattern& ground_truth, const TreatmentPlan& plan, const Field& field,
                              kernels::Exec exec) {
  MetricsRecord m;
  m.d_d = plan.driving_distance;
  m.n_ground_truth = ground_truth.size();
  m.n_targeted = plan.targeted.size();

  std::vector<Vec2> untreated;
  untreated.reserve(ground_truth.size());
  for (const Vec2 p : ground_truth.points) {
    if (plan.treated_region.covers(p)) {
      ++m.n_treated;
    } else {
      untreated.push_back(p);
    }
  }

  const double treated_area = plan.treated_region.mask().empty() ? 0.0 : plan.treated_region.area();
  m.A_t = treated_area / field.area();
  if (m.n_ground_truth > 0) {
    m.f_r = static_cast<double>(m.n_ground_truth - m.n_treated) / static_cast<double>(m.n_ground_truth);
    m.rho2 = max_remaining_density(field, untreated, defaults::kDensityDiskRadius, exec);
  }
  if (m.n_treated > 0) m.A_eff = treated_area / static_cast<double>(m.n_treated);
  return m;
}

}  // namespace weedsim
