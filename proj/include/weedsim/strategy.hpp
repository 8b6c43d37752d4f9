#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "weedsim/defaults.hpp"
#include "weedsim/geometry.hpp"
#include "weedsim/pointproc.hpp"

namespace weedsim {

// Keeps observed locations whose nearest neighbour lies within `threshold`
// (inclusive). An infinite threshold keeps everything.
PointPattern action_threshold(const PointPattern& observed, double threshold);

struct RobotConfig {
  double treatment_radius = 0.2;
};

struct TractorConfig {
  double meander_width = defaults::kMeanderWidth;
  int sections = 10;
  std::optional<double> treatment_length;  // defaults to meander_width / sections

  double section_width() const { return meander_width / sections; }
  double effective_treatment_length() const { return treatment_length.value_or(section_width()); }
  void validate() const;
};

struct Swath {
  Vec2 start;  // in driving order
  Vec2 end;
  double offset = 0.0;  // cross-track coordinate of the line
};

// Geometry the tractor plan was built from; kept for inspection and tests.
struct TractorLayout {
  Vec2 direction;  // u_d, the driving direction of the swath lines
  Vec2 across;     // perp(direction)
  std::vector<Swath> swaths;  // in driving order, nearest to x0 first
  std::vector<std::size_t> target_swath;  // swath index for each target
  std::vector<std::size_t> target_section;  // section strip index for each target
  std::vector<OrientedBox> sections;  // one treatment rectangle per target
  Polygon infested_hull;
  bool fallback = false;  // degenerate target set
};

struct TreatmentPlan {
  std::vector<Vec2> route;  // starts and ends at x0
  double driving_distance = 0.0;
  RasterRegion treated_region;
  PointPattern targeted;
  std::optional<TractorLayout> tractor;
};

double polyline_length(std::span<const Vec2> route);

// Closed tour helpers, exposed for tests. Tours are index orders over
// `nodes`, starting with node 0.
std::vector<std::size_t> nearest_neighbor_tour(std::span<const Vec2> nodes);
// First-improvement 2-opt until no improving move remains; node 0 stays first.
void two_opt(std::span<const Vec2> nodes, std::vector<std::size_t>& tour);
// Or-opt: moves runs of 1 to 3 nodes, possibly reversed, to a better edge.
// Returns whether the tour changed.
bool or_opt(std::span<const Vec2> nodes, std::vector<std::size_t>& tour);
// 2-opt and Or-opt alternated until neither improves; the robot's tour.
void improve_tour(std::span<const Vec2> nodes, std::vector<std::size_t>& tour);
double tour_length(std::span<const Vec2> nodes, std::span<const std::size_t> tour);

TreatmentPlan plan_robot(const PointPattern& targeted, const RobotConfig& cfg, const Field& field, Vec2 start);
TreatmentPlan plan_tractor(const PointPattern& targeted, const TractorConfig& cfg, const Field& field, Vec2 start);

}  // namespace weedsim
