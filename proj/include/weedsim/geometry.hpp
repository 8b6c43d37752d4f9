#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace weedsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
// Signed area * 2 of (o, a, b); > 0 for a left turn.
constexpr double orient(Vec2 o, Vec2 a, Vec2 b) { return cross(a - o, b - o); }
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
constexpr double distance_sq(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}
// Lexicographic (x, then y).
constexpr bool lex_less(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

using Polygon = std::vector<Vec2>;

struct BoundingBox {
  Vec2 min;
  Vec2 max;
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
};

BoundingBox bounding_box(std::span<const Vec2> points);

// Shoelace; positive for counterclockwise rings.
double signed_area(std::span<const Vec2> ring);
Vec2 polygon_centroid(std::span<const Vec2> ring);
bool is_simple(std::span<const Vec2> ring);

// Closed even-odd containment: points on an edge count as inside.
bool polygon_contains(std::span<const Vec2> ring, Vec2 p);

// Square grid of cells over a bounding box; cell (i, j) has its center at
// origin + ((i + 0.5) step, (j + 0.5) step).
struct Grid {
  Vec2 origin;
  double step = 0.05;
  int nx = 0;
  int ny = 0;

  static Grid covering(const BoundingBox& box, double step);

  std::size_t cell_count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  double center_x(int i) const { return origin.x + (i + 0.5) * step; }
  double center_y(int j) const { return origin.y + (j + 0.5) * step; }
  Vec2 center(int i, int j) const { return {center_x(i), center_y(j)}; }
  // Cell containing p, clamped onto the grid; nullopt if p is farther than
  // one step outside the grid extent.
  std::optional<std::array<int, 2>> cell_of(Vec2 p) const;
  bool same_layout(const Grid& other) const {
    return origin == other.origin && step == other.step && nx == other.nx && ny == other.ny;
  }
};

// The sampling window: a simple counterclockwise polygon plus the evaluation
// grid (default 5 cm) and a cached mask of grid cells whose center lies in it.
class Field {
 public:
  explicit Field(Polygon boundary, double grid_step = 0.05);

  const Polygon& boundary() const { return boundary_; }
  double area() const { return area_; }
  double grid_step() const { return grid_.step; }
  const Grid& grid() const { return grid_; }
  const BoundingBox& bbox() const { return bbox_; }
  // 1 where the cell center is inside the field.
  const std::vector<std::uint8_t>& inside_mask() const { return inside_; }
  std::size_t inside_cell_count() const { return inside_count_; }
  Vec2 centroid() const { return centroid_; }
  // Lowest point on the left: the vertex minimizing (x, then y).
  Vec2 lower_left_vertex() const;

 private:
  Polygon boundary_;
  double area_ = 0.0;
  BoundingBox bbox_;
  Grid grid_;
  Vec2 centroid_;
  std::vector<std::uint8_t> inside_;
  std::size_t inside_count_ = 0;
};

Field default_field();

bool contains(const Field& field, Vec2 p);

struct Hull {
  Polygon vertices;  // counterclockwise, starting at the lexicographically smallest vertex
  bool degenerate = false;  // point or segment
};

Hull convex_hull(std::span<const Vec2> points);

struct OrientedBox {
  Vec2 center;
  Vec2 axis{1.0, 0.0};  // direction of the long side
  double half_long = 0.0;
  double half_short = 0.0;

  // Builds a box from an arbitrary side direction, swapping axes so that
  // `axis` is the long side.
  static OrientedBox from_sides(Vec2 center, Vec2 direction, double half_along, double half_across);

  double area() const { return 4.0 * half_long * half_short; }
  std::array<Vec2, 4> corners() const;
  bool contains(Vec2 p, double tolerance = 1e-9) const;
};

// Minimum-area enclosing rectangle (rotating calipers over hull edges).
OrientedBox min_bounding_box(std::span<const Vec2> points);

class RasterRegion {
 public:
  RasterRegion() = default;
  explicit RasterRegion(const Grid& grid);
  RasterRegion(const Grid& grid, std::vector<std::uint8_t> mask);

  const Grid& grid() const { return grid_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::vector<std::uint8_t>& mask() { return mask_; }
  bool at(int i, int j) const { return mask_[grid_.index(i, j)] != 0; }
  // True if the cell containing p is set.
  bool covers(Vec2 p) const;
  std::size_t count() const;
  double area() const { return static_cast<double>(count()) * grid_.step * grid_.step; }

 private:
  Grid grid_;
  std::vector<std::uint8_t> mask_;
};

RasterRegion rasterize_disks(const Field& field, std::span<const Vec2> centers, double radius);
RasterRegion rasterize_rects(const Field& field, std::span<const OrientedBox> rects);
RasterRegion region_union(const RasterRegion& a, const RasterRegion& b);
// Sets the cell containing each point (no field clipping).
void mark_cells(RasterRegion& region, std::span<const Vec2> points);

}  // namespace weedsim
