#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weedsim/defaults.hpp"
#include "weedsim/geometry.hpp"

namespace weedsim {

// Point files: one "x y" pair per line (whitespace or comma separated, meters).
// Blank lines and lines starting with '#' are skipped. Malformed lines raise
// IngestError carrying the 1-based line number.
std::vector<Vec2> parse_points(std::istream& in, const std::string& source);
std::vector<Vec2> read_points(const std::filesystem::path& path);
void write_points(std::ostream& out, std::span<const Vec2> points);
void write_points(const std::filesystem::path& path, std::span<const Vec2> points);

// A field file lists the polygon vertices in the point-file format.
Field read_field(const std::filesystem::path& path, double grid_step = defaults::kGridStep);

// Region files: "# weedsim raster v1" header, then "origin x y", "step s",
// "dims nx ny", then one line per grid row (j = 0 first) holding run lengths
// that alternate unset/set, starting with an unset run (possibly 0).
void write_region(std::ostream& out, const RasterRegion& region);
void write_region(const std::filesystem::path& path, const RasterRegion& region);
RasterRegion parse_region(std::istream& in, const std::string& source);
RasterRegion read_region(const std::filesystem::path& path);

// Shortest text that parses back to the same double; "inf" for infinity.
std::string format_number(double value);
// Empty string for an undefined value.
std::string format_number(std::optional<double> value);
double parse_number(std::string_view text);
// Empty field parses as undefined.
std::optional<double> parse_optional_number(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of the named column; throws IngestError if absent.
  std::size_t column(std::string_view name) const;
};

// Minimal CSV: no quoting, which none of the emitted files need.
CsvTable read_csv(const std::filesystem::path& path);
void write_csv_row(std::ostream& out, std::span<const std::string> cells);

}  // namespace weedsim
