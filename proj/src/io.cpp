#include "weedsim/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "weedsim/error.hpp"

namespace weedsim {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  return out;
}

bool parse_double(std::string_view text, double& value) {
  text = trim(text);
  if (text.empty()) return false;
  if (text == "inf" || text == "+inf" || text == "Inf") {
    value = std::numeric_limits<double>::infinity();
    return true;
  }
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (k < line.size()) {
    while (k < line.size() && is_sep(line[k])) ++k;
    const std::size_t begin = k;
    while (k < line.size() && !is_sep(line[k])) ++k;
    if (k > begin) out.push_back(line.substr(begin, k - begin));
  }
  return out;
}

}  // namespace

std::string_view trim(std::string_view text) {
  const auto ws = " \t\r\n";
  const auto b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = text.find_last_not_of(ws);
  return text.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<Vec2> parse_points(std::istream& in, const std::string& source) {
  std::vector<Vec2> points;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto parts = tokens(body);
    if (parts.size() != 2) throw IngestError(source, number, "expected two coordinates");
    Vec2 p;
    if (!parse_double(parts[0], p.x) || !parse_double(parts[1], p.y) || !std::isfinite(p.x) ||
        !std::isfinite(p.y)) {
      throw IngestError(source, number, "coordinates must be finite numbers");
    }
    points.push_back(p);
  }
  return points;
}

std::vector<Vec2> read_points(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_points(in, path.string());
}

void write_points(std::ostream& out, std::span<const Vec2> points) {
  for (const Vec2 p : points) out << format_number(p.x) << ' ' << format_number(p.y) << '\n';
}

void write_points(const std::filesystem::path& path, std::span<const Vec2> points) {
  auto out = open_output(path);
  write_points(out, points);
}

Field read_field(const std::filesystem::path& path, double grid_step) {
  auto vertices = read_points(path);
  if (vertices.size() < 3) throw IngestError(path.string(), 0, "a field needs at least three vertices");
  return Field(std::move(vertices), grid_step);
}

void write_region(std::ostream& out, const RasterRegion& region) {
  const Grid& g = region.grid();
  out << "# weedsim raster v1\n";
  out << "origin " << format_number(g.origin.x) << ' ' << format_number(g.origin.y) << '\n';
  out << "step " << format_number(g.step) << '\n';
  out << "dims " << g.nx << ' ' << g.ny << '\n';
  for (int j = 0; j < g.ny; ++j) {
    bool state = false;
    int run = 0;
    bool first = true;
    for (int i = 0; i < g.nx; ++i) {
      if (region.at(i, j) != state) {
        out << (first ? "" : " ") << run;
        first = false;
        state = !state;
        run = 0;
      }
      ++run;
    }
    out << (first ? "" : " ") << run << '\n';
  }
}

void write_region(const std::filesystem::path& path, const RasterRegion& region) {
  auto out = open_output(path);
  write_region(out, region);
}

RasterRegion parse_region(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t number = 0;
  auto next = [&]() -> std::string_view {
    if (!std::getline(in, line)) throw IngestError(source, number + 1, "unexpected end of file");
    ++number;
    return trim(line);
  };
  if (next() != "# weedsim raster v1") throw IngestError(source, number, "missing raster header");

  Grid g;
  auto keyed = [&](std::string_view key, std::size_t count) {
    const auto parts = tokens(next());
    if (parts.size() != count + 1 || parts[0] != key) {
      throw IngestError(source, number, "expected '" + std::string(key) + "'");
    }
    std::vector<double> values;
    for (std::size_t k = 1; k < parts.size(); ++k) {
      double v;
      if (!parse_double(parts[k], v) || !std::isfinite(v)) throw IngestError(source, number, "bad number");
      values.push_back(v);
    }
    return values;
  };
  const auto origin = keyed("origin", 2);
  g.origin = {origin[0], origin[1]};
  g.step = keyed("step", 1)[0];
  const auto dims = keyed("dims", 2);
  if (!(g.step > 0.0) || dims[0] < 1 || dims[1] < 1 || dims[0] != std::floor(dims[0]) ||
      dims[1] != std::floor(dims[1])) {
    throw IngestError(source, number, "invalid grid layout");
  }
  g.nx = static_cast<int>(dims[0]);
  g.ny = static_cast<int>(dims[1]);

  RasterRegion region(g);
  for (int j = 0; j < g.ny; ++j) {
    const auto parts = tokens(next());
    int i = 0;
    bool state = false;
    for (const auto part : parts) {
      int run = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), run);
      if (ec != std::errc() || ptr != part.data() + part.size() || run < 0 || i + run > g.nx) {
        throw IngestError(source, number, "bad run length");
      }
      if (state) {
        for (int k = i; k < i + run; ++k) region.mask()[g.index(k, j)] = 1;
      }
      i += run;
      state = !state;
    }
    if (i != g.nx) throw IngestError(source, number, "row runs do not sum to the grid width");
  }
  return region;
}

RasterRegion read_region(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_region(in, path.string());
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_number(std::optional<double> value) { return value ? format_number(*value) : std::string(); }

double parse_number(std::string_view text) {
  double v;
  if (!parse_double(text, v)) throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(text) + "'");
  return v;
}

std::optional<double> parse_optional_number(std::string_view text) {
  if (trim(text).empty()) return std::nullopt;
  return parse_number(text);
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw IngestError("csv", 1, "no column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) throw IngestError(path.string(), number, "wrong number of cells");
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw IngestError(path.string(), 0, "empty csv file");
  return table;
}

void write_csv_row(std::ostream& out, std::span<const std::string> cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out << ',';
    out << cells[k];
  }
  out << '\n';
}

}  // namespace weedsim
