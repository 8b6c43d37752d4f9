#include "weedsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "weedsim/error.hpp"
#include "weedsim/kernels.hpp"

namespace weedsim {

BoundingBox bounding_box(std::span<const Vec2> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyPattern, "bounding box of no points");
  BoundingBox box{points.front(), points.front()};
  for (Vec2 p : points) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

double signed_area(std::span<const Vec2> ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t k = 0; k < n; ++k) twice += cross(ring[k], ring[(k + 1) % n]);
  return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  double cx = 0.0;
  double cy = 0.0;
  double twice = 0.0;
  // Shift to the first vertex for conditioning.
  const Vec2 o = ring.front();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 a = ring[k] - o;
    const Vec2 b = ring[(k + 1) % n] - o;
    const double c = cross(a, b);
    twice += c;
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  }
  return {o.x + cx / (3.0 * twice), o.y + cy / (3.0 * twice)};
}

namespace {

bool on_segment(Vec2 a, Vec2 b, Vec2 p, double tolerance) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance_sq(a + t * ab, p) <= tolerance * tolerance;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = sign(orient(a, b, c));
  const int o2 = sign(orient(a, b, d));
  const int o3 = sign(orient(c, d, a));
  const int o4 = sign(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c, 0.0)) return true;
  if (o2 == 0 && on_segment(a, b, d, 0.0)) return true;
  if (o3 == 0 && on_segment(c, d, a, 0.0)) return true;
  if (o4 == 0 && on_segment(c, d, b, 0.0)) return true;
  return false;
}

}  // namespace

bool is_simple(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (ring[i] == ring[(i + 1) % n]) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool polygon_contains(std::span<const Vec2> ring, Vec2 p) {
  constexpr double kBoundaryTolerance = 1e-12;
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t k = 0, prev = n - 1; k < n; prev = k++) {
    const Vec2 a = ring[prev];
    const Vec2 b = ring[k];
    if (on_segment(a, b, p, kBoundaryTolerance)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

Grid Grid::covering(const BoundingBox& box, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
  Grid g;
  g.origin = box.min;
  g.step = step;
  g.nx = std::max(1, static_cast<int>(std::ceil(box.width() / step - 1e-9)));
  g.ny = std::max(1, static_cast<int>(std::ceil(box.height() / step - 1e-9)));
  return g;
}

std::optional<std::array<int, 2>> Grid::cell_of(Vec2 p) const {
  const double fx = std::floor((p.x - origin.x) / step);
  const double fy = std::floor((p.y - origin.y) / step);
  if (fx < -1.0 || fy < -1.0 || fx > nx || fy > ny) return std::nullopt;
  const int i = std::clamp(static_cast<int>(fx), 0, nx - 1);
  const int j = std::clamp(static_cast<int>(fy), 0, ny - 1);
  return std::array<int, 2>{i, j};
}

Field::Field(Polygon boundary, double grid_step) : boundary_(std::move(boundary)) {
  if (boundary_.size() >= 2 && boundary_.front() == boundary_.back()) boundary_.pop_back();
  if (boundary_.size() < 3) throw Error(ErrorKind::InvalidField, "field boundary needs at least 3 vertices");
  if (!(grid_step > 0.0)) throw Error(ErrorKind::InvalidField, "grid step must be positive");
  double a = signed_area(boundary_);
  if (a < 0.0) {
    std::reverse(boundary_.begin(), boundary_.end());
    a = -a;
  }
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidField, "field boundary has zero area");
  if (!is_simple(boundary_)) throw Error(ErrorKind::InvalidField, "field boundary self-intersects");
  area_ = a;
  bbox_ = bounding_box(boundary_);
  grid_ = Grid::covering(bbox_, grid_step);
  centroid_ = polygon_centroid(boundary_);
  inside_ = kernels::inside_mask(boundary_, grid_);
  inside_count_ = static_cast<std::size_t>(std::count(inside_.begin(), inside_.end(), std::uint8_t{1}));
}

Vec2 Field::lower_left_vertex() const {
  return *std::min_element(boundary_.begin(), boundary_.end(), lex_less);
}

Field default_field() { return Field({{0.0, 0.0}, {128.0, 0.0}, {128.0, 64.5}, {0.0, 64.5}}); }

bool contains(const Field& field, Vec2 p) { return polygon_contains(field.boundary(), p); }

Hull convex_hull(std::span<const Vec2> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyPattern, "convex hull of an empty pattern");
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return {pts, true};

  // Andrew's monotone chain; collinear points are dropped.
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2 p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2 p = pts[i];
    while (k >= lower && orient(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {
    // All collinear: report the two extreme points.
    return {{pts.front(), pts.back()}, true};
  }
  return {hull, false};
}

OrientedBox OrientedBox::from_sides(Vec2 center, Vec2 direction, double half_along, double half_across) {
  OrientedBox box;
  box.center = center;
  if (half_along >= half_across) {
    box.axis = direction;
    box.half_long = half_along;
    box.half_short = half_across;
  } else {
    box.axis = perp(direction);
    box.half_long = half_across;
    box.half_short = half_along;
  }
  return box;
}

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 u = half_long * axis;
  const Vec2 v = half_short * perp(axis);
  return {center - u - v, center + u - v, center + u + v, center - u + v};
}

bool OrientedBox::contains(Vec2 p, double tolerance) const {
  const Vec2 d = p - center;
  return std::abs(dot(d, axis)) <= half_long + tolerance && std::abs(dot(d, perp(axis))) <= half_short + tolerance;
}

namespace {

// Sign-canonical direction: x > 0, or x == 0 and y > 0.
Vec2 canonical_axis(Vec2 a) {
  if (a.x < 0.0 || (a.x == 0.0 && a.y < 0.0)) return {-a.x, -a.y};
  return a;
}

double axis_angle(Vec2 a) { return std::abs(std::atan2(a.y, a.x)); }

}  // namespace

OrientedBox min_bounding_box(std::span<const Vec2> points) {
  if (points.empty()) throw Error(ErrorKind::DegenerateGeometry, "bounding box of an empty pattern");
  const Hull hull = convex_hull(points);
  if (hull.degenerate) {
    throw Error(ErrorKind::DegenerateGeometry, "points are coincident or collinear; box has zero width");
  }
  const auto& v = hull.vertices;
  const std::size_t n = v.size();
  constexpr double kTie = 1e-12;

  OrientedBox best;
  double best_area = std::numeric_limits<double>::infinity();
  double best_angle = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 e = v[(k + 1) % n] - v[k];
    const Vec2 d = (1.0 / norm(e)) * e;
    const Vec2 q = perp(d);
    double a0 = std::numeric_limits<double>::infinity(), a1 = -a0, b0 = a0, b1 = -a0;
    for (const Vec2 p : v) {
      const double s = dot(p, d);
      const double t = dot(p, q);
      a0 = std::min(a0, s);
      a1 = std::max(a1, s);
      b0 = std::min(b0, t);
      b1 = std::max(b1, t);
    }
    const double along = a1 - a0;
    const double across = b1 - b0;
    const double area = along * across;
    const Vec2 center = 0.5 * (a0 + a1) * d + 0.5 * (b0 + b1) * q;

    OrientedBox box = OrientedBox::from_sides(center, d, 0.5 * along, 0.5 * across);
    box.axis = canonical_axis(box.axis);
    if (std::abs(along - across) <= kTie * std::max(along, across)) {
      // Square: either side is the long one; take the smaller angle.
      const Vec2 alt = canonical_axis(q);
      const Vec2 main = canonical_axis(d);
      box.axis = axis_angle(alt) < axis_angle(main) ? alt : main;
    }
    const double angle = axis_angle(box.axis);
    const bool better = area < best_area * (1.0 - kTie);
    const bool tie = !better && area <= best_area * (1.0 + kTie);
    if (better || (tie && angle < best_angle)) {
      best = box;
      best_area = area;
      best_angle = angle;
    }
  }
  return best;
}

RasterRegion::RasterRegion(const Grid& grid) : grid_(grid), mask_(grid.cell_count(), 0) {}

RasterRegion::RasterRegion(const Grid& grid, std::vector<std::uint8_t> mask) : grid_(grid), mask_(std::move(mask)) {
  if (mask_.size() != grid_.cell_count()) throw Error(ErrorKind::GridMismatch, "mask size does not match grid");
}

bool RasterRegion::covers(Vec2 p) const {
  const auto cell = grid_.cell_of(p);
  return cell && at((*cell)[0], (*cell)[1]);
}

std::size_t RasterRegion::count() const {
  return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](std::uint8_t m) { return m != 0; }));
}

namespace {

struct CellRange {
  int i0, i1, j0, j1;
};

CellRange cell_range(const Grid& g, Vec2 lo, Vec2 hi) {
  CellRange r;
  r.i0 = std::max(0, static_cast<int>(std::floor((lo.x - g.origin.x) / g.step - 0.5)) - 1);
  r.i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((hi.x - g.origin.x) / g.step - 0.5)) + 1);
  r.j0 = std::max(0, static_cast<int>(std::floor((lo.y - g.origin.y) / g.step - 0.5)) - 1);
  r.j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((hi.y - g.origin.y) / g.step - 0.5)) + 1);
  return r;
}

}  // namespace

RasterRegion rasterize_disks(const Field& field, std::span<const Vec2> centers, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "disk radius must be positive");
  const Grid& g = field.grid();
  const auto& inside = field.inside_mask();
  RasterRegion region(g);
  auto& mask = region.mask();
  const double r2 = radius * radius;
  for (const Vec2 c : centers) {
    const CellRange r = cell_range(g, {c.x - radius, c.y - radius}, {c.x + radius, c.y + radius});
    for (int j = r.j0; j <= r.j1; ++j) {
      for (int i = r.i0; i <= r.i1; ++i) {
        const std::size_t idx = g.index(i, j);
        if (inside[idx] && distance_sq(c, g.center(i, j)) <= r2) mask[idx] = 1;
      }
    }
  }
  return region;
}

RasterRegion rasterize_rects(const Field& field, std::span<const OrientedBox> rects) {
  const Grid& g = field.grid();
  const auto& inside = field.inside_mask();
  RasterRegion region(g);
  auto& mask = region.mask();
  for (const OrientedBox& box : rects) {
    if (!(box.half_long > 0.0 && box.half_short > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "rectangle half-lengths must be positive");
    }
    const auto corners = box.corners();
    const BoundingBox bb = bounding_box(corners);
    const CellRange r = cell_range(g, bb.min, bb.max);
    const Vec2 across = perp(box.axis);
    for (int j = r.j0; j <= r.j1; ++j) {
      for (int i = r.i0; i <= r.i1; ++i) {
        const std::size_t idx = g.index(i, j);
        if (!inside[idx]) continue;
        // Half-open in both directions so that abutting boxes do not double-cover.
        const Vec2 d = g.center(i, j) - box.center;
        const double s = dot(d, box.axis);
        const double t = dot(d, across);
        if (s >= -box.half_long && s < box.half_long && t >= -box.half_short && t < box.half_short) mask[idx] = 1;
      }
    }
  }
  return region;
}

RasterRegion region_union(const RasterRegion& a, const RasterRegion& b) {
  if (!a.grid().same_layout(b.grid())) throw Error(ErrorKind::GridMismatch, "regions use different grids");
  std::vector<std::uint8_t> out(a.mask().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (a.mask()[k] | b.mask()[k]) ? 1 : 0;
  return RasterRegion(a.grid(), std::move(out));
}

void mark_cells(RasterRegion& region, std::span<const Vec2> points) {
  for (const Vec2 p : points) {
    if (const auto cell = region.grid().cell_of(p)) region.mask()[region.grid().index((*cell)[0], (*cell)[1])] = 1;
  }
}

}  // namespace weedsim
