#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "weedsim/config.hpp"
#include "weedsim/error.hpp"
#include "weedsim/io.hpp"

using namespace weedsim;

TEST_CASE("points round-trip exactly") {
  std::mt19937_64 rng(1);
  const auto pts = oracle::uniform_points(rng, 100, -1e3, -1e3, 1e3, 1e3);
  std::stringstream ss;
  write_points(ss, pts);
  CHECK(parse_points(ss, "mem") == pts);
}

TEST_CASE("point parsing accepts comments, commas and blank lines") {
  std::istringstream in("# header\n\n1 2\n3.5,4\n  5\t6  \n");
  CHECK(parse_points(in, "mem") == std::vector<Vec2>{{1, 2}, {3.5, 4}, {5, 6}});
}

TEST_CASE("malformed point files report the line") {
  std::istringstream in("1 2\n3 x\n");
  try {
    parse_points(in, "pts.txt");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(e.line() == 2);
    CHECK(e.source() == "pts.txt");
    CHECK(e.kind() == ErrorKind::IngestError);
  }
  std::istringstream three("1 2 3\n");
  CHECK_THROWS_AS(parse_points(three, "m"), IngestError);
  std::istringstream inf("1 inf\n");
  CHECK_THROWS_AS(parse_points(inf, "m"), IngestError);
}

TEST_CASE("region files round-trip") {
  const Field f({{0, 0}, {3, 0}, {3, 2}, {0, 2}});
  const std::vector<Vec2> c{{1, 1}, {2.9, 0.1}};
  const RasterRegion r = rasterize_disks(f, c, 0.4);
  std::stringstream ss;
  write_region(ss, r);
  const RasterRegion back = parse_region(ss, "mem");
  CHECK(back.grid().same_layout(r.grid()));
  CHECK(back.mask() == r.mask());

  std::istringstream bad("# weedsim raster v1\norigin 0 0\nstep 1\ndims 2 1\n1 5\n");
  CHECK_THROWS_AS(parse_region(bad, "m"), IngestError);
}

TEST_CASE("number formatting is shortest round-trip") {
  for (const double v : {0.1, 1.0 / 3.0, 2313.0, 1e-300, -7.25}) CHECK(parse_number(format_number(v)) == v);
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::optional<double>{}) == "");
  CHECK_FALSE(parse_optional_number(""));
  CHECK(format_number(2.5) == "2.5");
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("config files") {
  std::istringstream in(
      "base_seed = 5  # comment\n"
      "[grid]\n"
      "model = Hom, Cen\n"
      "tool = robot:0.2\n"
      "[other]\n"
      "model = Sin\n");
  const auto cfg = parse_config(in, "c.cfg");
  CHECK(cfg.global.get("base_seed") == "5");
  REQUIRE(cfg.sections.size() == 2);
  CHECK(cfg.sections[0].name == "grid");
  CHECK(split_list(*cfg.sections[0].get("model")) == std::vector<std::string>{"Hom", "Cen"});
  CHECK(cfg.sections[1].line == 5);

  std::istringstream dup("[a]\nx = 1\nx = 2\n");
  try {
    parse_config(dup, "d.cfg");
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream noeq("[a]\njunk\n");
  CHECK_THROWS_AS(parse_config(noeq, "m"), IngestError);
}
