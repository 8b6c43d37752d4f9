#include <algorithm>
#include <cmath>
#include <limits>

#include "weedsim/error.hpp"
#include "weedsim/strategy.hpp"

namespace weedsim {

namespace {

// Coordinates in the driving frame: t along u_d, c across.
struct Frame {
  Vec2 along;
  Vec2 across;
  double t(Vec2 p) const { return dot(p, along); }
  double c(Vec2 p) const { return dot(p, across); }
  Vec2 point(double t_, double c_) const { return t_ * along + c_ * across; }
};

struct Interval {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool empty() const { return lo > hi; }
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Clips the ring (in frame coordinates, x = t, y = c) to keep c >= bound
// (keep_above) or c <= bound.
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& ring, double bound, bool keep_above) {
  std::vector<Vec2> out;
  const std::size_t n = ring.size();
  if (n == 0) return out;
  auto inside = [&](Vec2 p) { return keep_above ? p.y >= bound : p.y <= bound; };
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 a = ring[k];
    const Vec2 b = ring[(k + 1) % n];
    const bool ia = inside(a);
    const bool ib = inside(b);
    if (ia) out.push_back(a);
    if (ia != ib) {
      const double s = (bound - a.y) / (b.y - a.y);
      out.push_back({a.x + s * (b.x - a.x), bound});
    }
  }
  return out;
}

// Along-track extent of the hull inside the band lo <= c <= hi.
Interval band_extent(const std::vector<Vec2>& hull_tc, double lo, double hi) {
  Interval out;
  if (hull_tc.size() == 1) {
    if (hull_tc[0].y >= lo && hull_tc[0].y <= hi) out.include(hull_tc[0].x);
    return out;
  }
  const auto clipped = clip_half_plane(clip_half_plane(hull_tc, lo, true), hi, false);
  for (const Vec2 p : clipped) out.include(p.x);
  return out;
}

Vec2 field_long_axis(const Field& field) {
  const BoundingBox& b = field.bbox();
  return b.width() >= b.height() ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
}

struct Line {
  double offset;
  Interval extent;  // swath segment, margins included
};

struct Meander {
  std::vector<Vec2> route;
  std::vector<Swath> swaths;
  double length = 0.0;
};

// Route x0 -> swath 0 -> ... -> swath K-1 -> x0 with orthogonal connectors.
// `first_direction` is +1 if the first swath is driven along +u_d.
Meander build_meander(const Frame& f, const std::vector<Line>& lines, Vec2 start, int first_direction) {
  Meander m;
  m.route.push_back(start);
  int dir = first_direction;
  double t_cur = dir > 0 ? lines.front().extent.lo : lines.front().extent.hi;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const Vec2 begin = f.point(t_cur, line.offset);
    double t_next;
    if (k + 1 < lines.size()) {
      const Line& next = lines[k + 1];
      t_next = dir > 0 ? std::max(line.extent.hi, next.extent.hi) : std::min(line.extent.lo, next.extent.lo);
    } else {
      t_next = dir > 0 ? line.extent.hi : line.extent.lo;
    }
    const Vec2 end = f.point(t_next, line.offset);
    m.route.push_back(begin);
    m.route.push_back(end);
    m.swaths.push_back({begin, end, line.offset});
    t_cur = t_next;
    dir = -dir;
  }
  m.route.push_back(start);
  // Drop zero-length steps (connector endpoints coincide with swath ends).
  m.route.erase(std::unique(m.route.begin(), m.route.end()), m.route.end());
  m.length = polyline_length(m.route);
  return m;
}

}  // namespace

TreatmentPlan plan_tractor(const PointPattern& targeted, const TractorConfig& cfg, const Field& field, Vec2 start) {
  cfg.validate();
  if (!contains(field, start)) throw Error(ErrorKind::InvalidStart, "start point lies outside the field");
  TreatmentPlan plan;
  plan.targeted = targeted;
  plan.targeted.role = PatternRole::targeted;
  if (targeted.empty()) {
    plan.route = {start};
    plan.treated_region = RasterRegion(field.grid());
    return plan;
  }
  const auto& pts = targeted.points;
  const double w = cfg.meander_width;

  TractorLayout layout;
  const Hull hull = convex_hull(pts);
  layout.infested_hull = hull.vertices;
  Vec2 u;
  if (!hull.degenerate) {
    u = min_bounding_box(hull.vertices).axis;
  } else if (hull.vertices.size() == 1) {
    u = field_long_axis(field);
    layout.fallback = true;
  } else {
    const Vec2 d = hull.vertices[1] - hull.vertices[0];
    u = (1.0 / norm(d)) * d;
    layout.fallback = true;
  }
  const Frame f{u, perp(u)};
  layout.direction = f.along;
  layout.across = f.across;

  std::vector<Vec2> hull_tc;
  hull_tc.reserve(hull.vertices.size());
  Interval cross;
  Interval along;
  for (const Vec2 p : hull.vertices) {
    hull_tc.push_back({f.t(p), f.c(p)});
    cross.include(f.c(p));
    along.include(f.t(p));
  }

  // Lines are counted from the side of the hull farthest from x0; the
  // farthest one runs w/2 inside the extreme target.
  const double c0 = f.c(start);
  const bool far_is_high = (cross.hi - c0) >= (c0 - cross.lo);
  const int count = std::max(1, static_cast<int>(std::ceil((cross.hi - cross.lo) / w - 1e-12)));
  auto offset_from_far = [&](int k) {
    return far_is_high ? cross.hi - 0.5 * w - k * w : cross.lo + 0.5 * w + k * w;
  };

  // Driving order: nearest line to x0 first.
  std::vector<Line> lines;
  lines.reserve(static_cast<std::size_t>(count));
  for (int k = count - 1; k >= 0; --k) {
    const double offset = offset_from_far(k);
    Interval ext = band_extent(hull_tc, offset - 0.5 * w, offset + 0.5 * w);
    if (ext.empty()) ext = along;
    lines.push_back({offset, {ext.lo - 0.5 * w, ext.hi + 0.5 * w}});
  }

  Meander forward = build_meander(f, lines, start, +1);
  Meander backward = build_meander(f, lines, start, -1);
  Meander& best = backward.length < forward.length ? backward : forward;
  plan.route = std::move(best.route);
  plan.driving_distance = best.length;
  layout.swaths = std::move(best.swaths);

  // Sections: each swath's width is split into equal strips from its low-c
  // side; a boundary weed goes to the lower strip.
  const double strip = cfg.section_width();
  const double length = cfg.effective_treatment_length();
  layout.target_swath.reserve(pts.size());
  layout.target_section.reserve(pts.size());
  layout.sections.reserve(pts.size());
  for (const Vec2 p : pts) {
    const double c = f.c(p);
    const double from_far = far_is_high ? (cross.hi - c) / w : (c - cross.lo) / w;
    const int k = std::clamp(static_cast<int>(std::floor(from_far)), 0, count - 1);
    const double band_lo = offset_from_far(k) - 0.5 * w;
    const int s = std::clamp(static_cast<int>(std::ceil((c - band_lo) / strip)) - 1, 0, cfg.sections - 1);
    const Vec2 center = f.point(f.t(p), band_lo + (s + 0.5) * strip);
    layout.target_swath.push_back(static_cast<std::size_t>(count - 1 - k));
    layout.target_section.push_back(static_cast<std::size_t>(s));
    layout.sections.push_back(OrientedBox::from_sides(center, f.along, 0.5 * length, 0.5 * strip));
  }

  plan.treated_region = rasterize_rects(field, layout.sections);
  mark_cells(plan.treated_region, pts);
  plan.tractor = std::move(layout);
  return plan;
}

}  // namespace weedsim
