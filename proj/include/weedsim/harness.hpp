#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weedsim/config.hpp"
#include "weedsim/kernels.hpp"
#include "weedsim/metrics.hpp"
#include "weedsim/observe.hpp"
#include "weedsim/pareto.hpp"
#include "weedsim/pointproc.hpp"
#include "weedsim/strategy.hpp"

namespace weedsim {

inline constexpr std::uint64_t kDefaultBaseSeed = 20190903;

enum class Observation { obs1, obs2, none };
std::string_view to_string(Observation obs);
Observation parse_observation(std::string_view text);

struct ToolSpec {
  enum class Kind { robot, tractor };
  Kind kind = Kind::robot;
  double treatment_radius = 0.2;
  int sections = 10;
  double meander_width = defaults::kMeanderWidth;
  std::optional<double> treatment_length;

  static ToolSpec robot(double treatment_radius);
  static ToolSpec tractor(int sections, double meander_width = defaults::kMeanderWidth,
                          std::optional<double> treatment_length = std::nullopt);

  std::string name() const;   // "robot" | "tractor"
  std::string param() const;  // r_t for the robot, n_s for the tractor
  std::string label() const;  // e.g. "robot0.2", "tractor10"
};

// "robot:<r_t>" or "tractor:<n_s>[:<w_m>[:<l_d>]]"
ToolSpec parse_tool(std::string_view text);

struct ScenarioConfig {
  std::optional<ModelKind> model;  // nullopt: the ingested experimental pattern
  double intensity_factor = 1.0;
  Observation observation = Observation::obs1;
  double action_threshold = defaults::kUnlimited;
  ToolSpec tool;
  int replications = defaults::kReplications;
  std::uint64_t base_seed = kDefaultBaseSeed;
  ReferenceCounts counts;

  std::string model_label() const;  // "Cal", "Hom", "Cen", "Sin" or "Exp"
  // e.g. "Hom_x1_obs1_la2.5_robot0.2"
  std::string id() const;
  // Ground-truth dataset identity: scenarios sharing it see the same sampled
  // patterns in replication k.
  std::string dataset_key() const;
  void validate() const;
};

struct RunResult {
  std::string scenario_id;
  int replication = 0;
  std::uint64_t seed = 0;
  MetricsRecord metrics;
  double seconds = 0.0;  // wall clock; kept out of the deterministic outputs
};

// Measure names used by aggregation, frontiers and CLI pairs.
inline constexpr std::string_view kMeasureNames[] = {"d_d", "f_r", "rho2", "A_t", "A_eff"};
std::optional<double> measure_value(const MetricsRecord& m, std::string_view name);

struct MeasureSummary {
  double mean = 0.0;  // NaN when defined == 0
  double sd = 0.0;    // sample sd; NaN when defined < 2
  std::size_t defined = 0;
};

struct Aggregate {
  std::string scenario_id;
  std::size_t replications = 0;
  std::map<std::string, MeasureSummary, std::less<>> measures;  // kMeasureNames plus count means

  StrategyOutcome outcome(std::string strategy_id) const;
};

// Means over the replications where a measure is defined, summed in
// replication order. Mixed scenario ids raise AggregationMismatch.
Aggregate aggregate(std::span<const RunResult> results);

// Everything a scenario needs besides its config.
struct Environment {
  Field field = default_field();
  std::vector<Vec2> anchors;                // data the Cal model is built from
  std::optional<PointPattern> experimental;  // ground truth of the "Exp" dataset
  Vec2 start;                               // x0

  // Default field, stand-in anchors and x0 at the lower-left vertex.
  static Environment standard();
};

// Deterministic synthetic clustered pattern used as Cal anchors when no
// experimental data is supplied.
std::vector<Vec2> standin_anchors(const Field& field, std::size_t count = defaults::kReferenceCount,
                                  std::uint64_t seed = 0x5eed5eed);

// seed_k = derive_seed(derive_seed(base_seed, hash(dataset_key)), k).
std::uint64_t replication_seed(const ScenarioConfig& cfg, int k);

class ScenarioRunner {
 public:
  ScenarioRunner(Environment env, std::uint64_t base_seed = kDefaultBaseSeed,
                 kernels::Exec exec = kernels::Exec::parallel);

  const Environment& environment() const { return env_; }
  kernels::Exec exec() const { return exec_; }

  // Normalized model at intensity factor 1; built once and shared.
  const IntensityModel& model(ModelKind kind);
  const BandwidthSelection& cal_bandwidth();

  // Builds every model the scenarios need. Call before running in parallel.
  void prepare(std::span<const ScenarioConfig> scenarios);

  PointPattern ground_truth(const ScenarioConfig& cfg, int k);
  RunResult run_replication(const ScenarioConfig& cfg, int k, kernels::Exec exec);
  std::vector<RunResult> run(const ScenarioConfig& cfg);

 private:
  Environment env_;
  std::uint64_t base_seed_;
  kernels::Exec exec_;
  std::mutex mutex_;
  std::map<ModelKind, std::unique_ptr<IntensityModel>> models_;
  std::unique_ptr<BandwidthSelection> bandwidth_;
  std::map<std::pair<std::string, int>, std::shared_ptr<const PointPattern>> samples_;
};

struct ScenarioFailure {
  std::string scenario_id;
  std::string kind;
  std::string message;
};

struct SweepResult {
  std::vector<ScenarioConfig> scenarios;  // sorted by id, duplicates removed
  std::vector<RunResult> runs;            // sorted by (scenario_id, replication)
  std::vector<Aggregate> rows;            // successful scenarios, sorted by id
  std::vector<ScenarioFailure> failures;
};

// Runs every (scenario, replication) pair; threads == 1 runs serially.
// A failing scenario is recorded and the rest still run.
SweepResult run_sweep(ScenarioRunner& runner, std::vector<ScenarioConfig> grid, int threads = 0);

using MeasurePair = std::pair<std::string, std::string>;
MeasurePair parse_measure_pair(std::string_view text);  // "m1,m2" or "m1:m2"

std::vector<std::string> results_header();
std::vector<std::string> results_row(const ScenarioConfig& cfg, const Aggregate& agg);
std::vector<std::string> runs_header();
std::vector<std::string> runs_row(const RunResult& r);
std::vector<RunResult> read_runs(const std::filesystem::path& path);

struct SweepOutput {
  std::filesystem::path dir;
  std::vector<MeasurePair> pairs;
  std::uint64_t base_seed = kDefaultBaseSeed;
  int threads = 0;
  double wall_seconds = 0.0;
};

// results.csv, runs.csv, failures.csv, frontier and figure CSVs (all
// deterministic), plus timing.csv and metadata.txt.
void write_sweep(const SweepResult& result, const SweepOutput& out);

// The built-in grid: every tool at every action threshold on the early
// observation at lambda* = 1, plus the observation-date and intensity-factor
// variations for robot r_t = 0.2 and tractor n_s = 10.
std::vector<ScenarioConfig> paper_suite_grid(std::uint64_t base_seed, int replications, bool include_experimental);
std::vector<MeasurePair> paper_suite_pairs();

struct SweepPlan {
  std::vector<ScenarioConfig> scenarios;
  std::uint64_t base_seed = kDefaultBaseSeed;
  std::optional<std::filesystem::path> field;
  std::optional<std::filesystem::path> anchors;
  std::optional<std::filesystem::path> experimental;
  std::vector<MeasurePair> pairs;
};

// Each section lists comma-separated values per key; the section expands to
// the Cartesian product. Relative paths resolve against `base_dir`.
SweepPlan sweep_plan(const ConfigFile& file, const std::filesystem::path& base_dir = {});

// Environment from optional field / anchor / experimental-point files.
// Experimental points are merged (5 cm) and, when no anchors are given,
// also serve as the Cal anchors.
Environment load_environment(const std::optional<std::filesystem::path>& field,
                             const std::optional<std::filesystem::path>& anchors,
                             const std::optional<std::filesystem::path>& experimental);

}  // namespace weedsim
