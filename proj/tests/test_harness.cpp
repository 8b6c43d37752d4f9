#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "weedsim/error.hpp"
#include "weedsim/harness.hpp"
#include "weedsim/io.hpp"

using namespace weedsim;
namespace fs = std::filesystem;

namespace {

ScenarioRunner& runner() {
  static ScenarioRunner r(Environment::standard(), 1234);
  return r;
}

ScenarioConfig hom(int reps = 3) {
  ScenarioConfig c;
  c.model = ModelKind::Hom;
  c.replications = reps;
  c.base_seed = 1234;
  c.tool = ToolSpec::robot(0.2);
  return c;
}

RunResult record(const std::string& id, double d_d, std::optional<double> a_eff = 1.0) {
  RunResult r;
  r.scenario_id = id;
  r.metrics.d_d = d_d;
  r.metrics.f_r = 0.5;
  r.metrics.rho2 = 0.1;
  r.metrics.A_t = 0.01;
  r.metrics.A_eff = a_eff;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("weedsim_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scenario ids and tools") {
  ScenarioConfig c = hom();
  c.action_threshold = 2.5;
  CHECK(c.id() == "Hom_x1_obs1_la2.5_robot0.2");
  c.model = ModelKind::Cal;
  c.intensity_factor = 0.5;
  c.action_threshold = defaults::kUnlimited;
  c.tool = ToolSpec::tractor(10);
  CHECK(c.id() == "Cal_x0.5_obs1_lainf_tractor10");
  c.model.reset();
  c.intensity_factor = 1.0;
  CHECK(c.model_label() == "Exp");

  CHECK(parse_tool("robot:1.25").treatment_radius == 1.25);
  const ToolSpec t = parse_tool("tractor:5:3:0.5");
  CHECK(t.sections == 5);
  CHECK(t.meander_width == 3.0);
  CHECK(*t.treatment_length == 0.5);
  CHECK(t.label() == "tractor5w3l0.5");
  CHECK_THROWS_AS(parse_tool("plane:1"), Error);
  CHECK_THROWS_AS(parse_tool("robot:-1"), Error);
  CHECK_THROWS_AS(parse_tool("tractor:0"), Error);
}

TEST_CASE("aggregate statistics") {
  const std::vector<RunResult> same(10, record("a", 7.0));
  const Aggregate s = aggregate(same);
  CHECK(s.measures.at("d_d").mean == 7.0);
  CHECK(s.measures.at("d_d").sd == 0.0);

  const std::vector<RunResult> two{record("a", 100), record("a", 200)};
  const Aggregate t = aggregate(two);
  CHECK(t.measures.at("d_d").mean == 150.0);
  CHECK(t.measures.at("d_d").sd == doctest::Approx(70.7107).epsilon(1e-5));

  const std::vector<RunResult> mixed{record("a", 1), record("b", 2)};
  try {
    aggregate(mixed);
    FAIL("expected AggregationMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AggregationMismatch);
  }

  // Undefined A_eff is left out of the mean and counted.
  const std::vector<RunResult> partly{record("a", 1, 2.0), record("a", 1, std::nullopt), record("a", 1, 4.0)};
  const Aggregate p = aggregate(partly);
  CHECK(p.measures.at("A_eff").mean == 3.0);
  CHECK(p.measures.at("A_eff").defined == 2);
  const std::vector<RunResult> none{record("a", 1, std::nullopt)};
  CHECK(std::isnan(aggregate(none).measures.at("A_eff").mean));
}

TEST_CASE("aggregate mean equals a naive sum") {
  std::vector<RunResult> batch;
  for (int k = 0; k < 37; ++k) batch.push_back(record("a", std::sqrt(k + 0.5) * 1e3));
  double naive = 0.0;
  for (const auto& r : batch) naive += r.metrics.d_d;
  naive /= static_cast<double>(batch.size());
  CHECK(std::abs(aggregate(batch).measures.at("d_d").mean - naive) <= 1e-12 * naive);
}

TEST_CASE("run_scenario: counts, observation size, determinism") {
  const ScenarioConfig c = hom(10);
  const auto runs = runner().run(c);
  REQUIRE(runs.size() == 10);
  double observed = 0.0;
  for (const auto& r : runs) {
    const auto& m = r.metrics;
    CHECK(m.n_ground_truth >= m.n_observed);
    CHECK(m.n_observed >= m.n_targeted);
    CHECK(m.n_ground_truth >= m.n_treated);
    CHECK(m.n_treated >= m.n_targeted);
    CHECK(r.seed == replication_seed(c, r.replication));
    observed += static_cast<double>(m.n_observed);
  }
  // n_O ~ Poisson(550) per replication.
  CHECK(std::abs(observed / 10.0 - 550.0) <= 3.0 * std::sqrt(550.0 / 10.0));

  ScenarioConfig once = hom(1);
  const auto a = runner().run(once);
  ScenarioRunner fresh(Environment::standard(), 1234);
  const auto b = fresh.run(once);
  CHECK(runs_row(a[0]) == runs_row(b[0]));
}

TEST_CASE("no observation keeps every weed visible") {
  ScenarioConfig c = hom(2);
  c.observation = Observation::none;
  for (const auto& r : runner().run(c)) CHECK(r.metrics.n_observed == r.metrics.n_ground_truth);
}

TEST_CASE("common ground truth across tools of a dataset") {
  ScenarioConfig robot = hom(1), tractor = hom(1);
  tractor.tool = ToolSpec::tractor(10);
  CHECK(runner().ground_truth(robot, 0).points == runner().ground_truth(tractor, 0).points);
  CHECK(replication_seed(robot, 0) != replication_seed(robot, 1));
}

TEST_CASE("sweep writes one row per scenario and round-trips") {
  std::vector<ScenarioConfig> grid;
  for (const double x : {0.5, 1.0, 2.0}) {
    ScenarioConfig c = hom(2);
    c.intensity_factor = x;
    grid.push_back(c);
  }
  ScenarioConfig tractor = hom(2);
  tractor.tool = ToolSpec::tractor(10);
  grid.push_back(tractor);

  const SweepResult serial = run_sweep(runner(), grid, 1);
  const SweepResult parallel = run_sweep(runner(), grid, 2);
  REQUIRE(serial.rows.size() == 4);
  CHECK(serial.failures.empty());

  // Mean ground-truth count grows with the intensity factor.
  std::map<double, double> n_gt;
  for (std::size_t k = 0; k < serial.rows.size(); ++k) {
    if (serial.scenarios[k].tool.kind == ToolSpec::Kind::robot) {
      n_gt[serial.scenarios[k].intensity_factor] = serial.rows[k].measures.at("n_ground_truth").mean;
    }
  }
  CHECK(n_gt[0.5] < n_gt[1.0]);
  CHECK(n_gt[1.0] < n_gt[2.0]);

  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  write_sweep(serial, {a, {{"d_d", "A_eff"}}, 1234, 1, 0.0});
  write_sweep(parallel, {b, {{"d_d", "A_eff"}}, 1234, 2, 0.0});
  for (const char* name : {"results.csv", "runs.csv", "failures.csv", "frontier_Hom_x1_obs1_d_d_A_eff.csv",
                           "fig_intensity_factor.csv"}) {
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name);
  }
  const CsvTable results = read_csv(a / "results.csv");
  CHECK(results.header == results_header());
  CHECK(results.rows.size() == 4);

  // Re-aggregating the per-replication file reproduces every results row.
  const auto runs = read_runs(a / "runs.csv");
  std::map<std::string, std::vector<RunResult>> by_id;
  for (const auto& r : runs) by_id[r.scenario_id].push_back(r);
  for (std::size_t k = 0; k < serial.scenarios.size(); ++k) {
    const auto& cfg = serial.scenarios[k];
    CHECK(results_row(cfg, aggregate(by_id.at(cfg.id()))) == results.rows[k]);
  }
}

TEST_CASE("a failing scenario does not stop the sweep") {
  ScenarioConfig exp = hom(1);
  exp.model.reset();  // no experimental data loaded
  const SweepResult r = run_sweep(runner(), {hom(1), exp}, 1);
  CHECK(r.rows.size() == 1);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].scenario_id == exp.id());
  CHECK(r.failures[0].kind == "InvalidConfig");
}

TEST_CASE("single-cell grid gives exactly one data row") {
  const SweepResult r = run_sweep(runner(), {hom(1)}, 1);
  const fs::path dir = scratch("single");
  write_sweep(r, {dir, {}, 1234, 1, 0.0});
  CHECK(read_csv(dir / "results.csv").rows.size() == 1);
}

TEST_CASE("config expansion") {
  std::istringstream in(
      "base_seed = 99\n"
      "replications = 4\n"
      "pairs = d_d:A_eff, A_t:rho2\n"
      "[fig5]\n"
      "model = Hom, Cen\n"
      "action_threshold = 2.5, 5, inf\n"
      "tool = robot:0.2, tractor:10\n"
      "[dates]\n"
      "model = Sin\n"
      "observation = obs1, obs2\n"
      "tool = robot:0.2\n"
      "replications = 2\n");
  const SweepPlan plan = sweep_plan(parse_config(in, "c"));
  CHECK(plan.base_seed == 99);
  CHECK(plan.scenarios.size() == 12 + 2);
  CHECK(plan.pairs.size() == 2);
  CHECK(plan.scenarios.front().replications == 4);
  CHECK(plan.scenarios.back().replications == 2);
  CHECK(plan.scenarios.back().base_seed == 99);

  auto expect_invalid = [](const std::string& text) {
    std::istringstream s(text);
    try {
      sweep_plan(parse_config(s, "c"));
      FAIL("expected InvalidConfig: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidConfig);
    }
  };
  expect_invalid("[a]\nmodel = Hom\n");                        // no tool
  expect_invalid("[a]\nmodel = Hom\ntool = robot:0.2\ncolor = red\n");
  expect_invalid("[a]\nmodel = Exp\ntool = robot:0.2\n");      // no exp_points
  expect_invalid("[a]\nmodel = Hom\ntool = robot:0.2\nintensity_factor = -1\n");
  expect_invalid("[a]\nmodel = Hom\ntool = robot:0.2\nobservation = obs3\n");
  expect_invalid("speed = 3\n[a]\nmodel = Hom\ntool = robot:0.2\n");
  expect_invalid("base_seed = 1\n");
}

TEST_CASE("built-in suite grid") {
  const auto grid = paper_suite_grid(1, 10, false);
  CHECK(grid.size() == 96);
  std::size_t fig5 = 0;
  for (const auto& c : grid) {
    if (c.observation == Observation::obs1 && c.intensity_factor == 1.0) ++fig5;
  }
  CHECK(fig5 == 4 * 3 * 6);
  const auto with_exp = paper_suite_grid(1, 10, true);
  std::size_t fig5_exp = 0;
  for (const auto& c : with_exp) {
    if (c.observation == Observation::obs1 && c.intensity_factor == 1.0) ++fig5_exp;
  }
  CHECK(fig5_exp == 90);
  CHECK(paper_suite_pairs().size() == 3);
}

TEST_CASE("measure pairs") {
  CHECK(parse_measure_pair("d_d,A_eff") == MeasurePair{"d_d", "A_eff"});
  CHECK(parse_measure_pair("A_t:rho2") == MeasurePair{"A_t", "rho2"});
  CHECK_THROWS_AS(parse_measure_pair("d_d,speed"), Error);
}
