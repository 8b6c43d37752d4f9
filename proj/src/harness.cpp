#include "weedsim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>

#include <omp.h>

#include "weedsim/error.hpp"
#include "weedsim/io.hpp"
#include "weedsim/rng.hpp"

namespace weedsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string number_or_empty(double v) { return std::isnan(v) ? std::string() : format_number(v); }

std::string threshold_text(double la) { return std::isinf(la) ? "inf" : format_number(la); }

bool is_default_counts(const ReferenceCounts& c) {
  const ReferenceCounts d;
  return c.ground_truth == d.ground_truth && c.observed_early == d.observed_early &&
         c.observed_late == d.observed_late;
}

std::uint64_t parse_u64(std::string_view text, const std::string& what) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidConfig, what + ": not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view text, const std::string& what) {
  const auto v = parse_u64(text, what);
  if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw Error(ErrorKind::InvalidConfig, what + ": out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

std::string_view to_string(Observation obs) {
  switch (obs) {
    case Observation::obs1: return "obs1";
    case Observation::obs2: return "obs2";
    case Observation::none: return "none";
  }
  return "?";
}

Observation parse_observation(std::string_view text) {
  if (text == "obs1") return Observation::obs1;
  if (text == "obs2") return Observation::obs2;
  if (text == "none") return Observation::none;
  throw Error(ErrorKind::InvalidConfig, "unknown observation '" + std::string(text) + "'");
}

ToolSpec ToolSpec::robot(double treatment_radius) {
  ToolSpec t;
  t.kind = Kind::robot;
  t.treatment_radius = treatment_radius;
  return t;
}

ToolSpec ToolSpec::tractor(int sections, double meander_width, std::optional<double> treatment_length) {
  ToolSpec t;
  t.kind = Kind::tractor;
  t.sections = sections;
  t.meander_width = meander_width;
  t.treatment_length = treatment_length;
  return t;
}

std::string ToolSpec::name() const { return kind == Kind::robot ? "robot" : "tractor"; }

std::string ToolSpec::param() const {
  return kind == Kind::robot ? format_number(treatment_radius) : std::to_string(sections);
}

std::string ToolSpec::label() const {
  std::string s = name() + param();
  if (kind == Kind::tractor) {
    if (meander_width != defaults::kMeanderWidth) s += "w" + format_number(meander_width);
    if (treatment_length) s += "l" + format_number(*treatment_length);
  }
  return s;
}

ToolSpec parse_tool(std::string_view text) {
  const auto parts = split(trim(text), ':');
  try {
    if (parts[0] == "robot" && parts.size() == 2) {
      const double r = parse_number(parts[1]);
      if (!(r > 0.0) || std::isinf(r)) throw Error(ErrorKind::InvalidConfig, "treatment radius must be positive");
      return ToolSpec::robot(r);
    }
    if (parts[0] == "tractor" && parts.size() >= 2 && parts.size() <= 4) {
      const int n = parse_int(parts[1], "section count");
      const double w = parts.size() >= 3 ? parse_number(parts[2]) : defaults::kMeanderWidth;
      std::optional<double> l;
      if (parts.size() == 4) l = parse_number(parts[3]);
      ToolSpec t = ToolSpec::tractor(n, w, l);
      TractorConfig{t.meander_width, t.sections, t.treatment_length}.validate();
      return t;
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidConfig, "tool '" + std::string(text) + "': " + e.what());
  }
  throw Error(ErrorKind::InvalidConfig,
              "tool must be robot:<r_t> or tractor:<n_s>[:<w_m>[:<l_d>]], got '" + std::string(text) + "'");
}

std::string ScenarioConfig::model_label() const { return model ? std::string(to_string(*model)) : "Exp"; }

std::string ScenarioConfig::id() const {
  return model_label() + "_x" + format_number(intensity_factor) + "_" + std::string(to_string(observation)) +
         "_la" + threshold_text(action_threshold) + "_" + tool.label();
}

std::string ScenarioConfig::dataset_key() const {
  std::string key = model_label();
  if (model) key += "_x" + format_number(intensity_factor);
  if (!is_default_counts(counts)) key += "_n" + std::to_string(counts.ground_truth);
  return key;
}

void ScenarioConfig::validate() const {
  if (replications < 1) throw Error(ErrorKind::InvalidConfig, "replications must be at least 1");
  if (!(intensity_factor > 0.0) || std::isinf(intensity_factor)) {
    throw Error(ErrorKind::InvalidConfig, "intensity factor must be positive");
  }
  if (!model && intensity_factor != 1.0) {
    throw Error(ErrorKind::InvalidConfig, "the experimental dataset has no intensity factor other than 1");
  }
  if (!(action_threshold > 0.0)) throw Error(ErrorKind::InvalidConfig, "action threshold must be positive");
  if (counts.ground_truth < 1 || counts.observed_early < 1 || counts.observed_late < 1 ||
      counts.observed_early > counts.ground_truth || counts.observed_late > counts.ground_truth) {
    throw Error(ErrorKind::InvalidConfig, "reference counts must satisfy 1 <= n1, n2 <= n_ref");
  }
  if (tool.kind == ToolSpec::Kind::robot) {
    if (!(tool.treatment_radius > 0.0)) throw Error(ErrorKind::InvalidConfig, "treatment radius must be positive");
  } else {
    TractorConfig{tool.meander_width, tool.sections, tool.treatment_length}.validate();
  }
}

std::optional<double> measure_value(const MetricsRecord& m, std::string_view name) {
  if (name == "d_d") return m.d_d;
  if (name == "f_r") return m.f_r;
  if (name == "rho2") return m.rho2;
  if (name == "A_t") return m.A_t;
  if (name == "A_eff") return m.A_eff;
  if (name == "n_ground_truth") return static_cast<double>(m.n_ground_truth);
  if (name == "n_observed") return static_cast<double>(m.n_observed);
  if (name == "n_targeted") return static_cast<double>(m.n_targeted);
  if (name == "n_treated") return static_cast<double>(m.n_treated);
  throw Error(ErrorKind::MissingMeasure, "unknown measure '" + std::string(name) + "'");
}

StrategyOutcome Aggregate::outcome(std::string strategy_id) const {
  StrategyOutcome o{std::move(strategy_id), {}};
  for (const auto& [name, s] : measures) o.measures.emplace(name, s.mean);
  return o;
}

Aggregate aggregate(std::span<const RunResult> results) {
  if (results.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to aggregate");
  Aggregate agg;
  agg.scenario_id = results.front().scenario_id;
  agg.replications = results.size();
  for (const RunResult& r : results) {
    if (r.scenario_id != agg.scenario_id) {
      throw Error(ErrorKind::AggregationMismatch,
                  "cannot aggregate '" + r.scenario_id + "' with '" + agg.scenario_id + "'");
    }
  }
  std::vector<std::string_view> names(std::begin(kMeasureNames), std::end(kMeasureNames));
  for (std::string_view extra : {"n_ground_truth", "n_observed", "n_targeted", "n_treated"}) names.push_back(extra);
  for (const std::string_view name : names) {
    MeasureSummary s;
    double sum = 0.0;
    for (const RunResult& r : results) {
      if (const auto v = measure_value(r.metrics, name)) {
        sum += *v;
        ++s.defined;
      }
    }
    s.mean = s.defined ? sum / static_cast<double>(s.defined) : kNaN;
    if (s.defined >= 2) {
      double sq = 0.0;
      for (const RunResult& r : results) {
        if (const auto v = measure_value(r.metrics, name)) sq += (*v - s.mean) * (*v - s.mean);
      }
      s.sd = std::sqrt(sq / static_cast<double>(s.defined - 1));
    } else {
      s.sd = kNaN;
    }
    agg.measures.emplace(std::string(name), s);
  }
  return agg;
}

Environment Environment::standard() {
  Environment env;
  env.anchors = standin_anchors(env.field);
  env.start = env.field.lower_left_vertex();
  return env;
}

std::uint64_t replication_seed(const ScenarioConfig& cfg, int k) {
  return derive_seed(derive_seed(cfg.base_seed, hash_string(cfg.dataset_key())), static_cast<std::uint64_t>(k));
}

ScenarioRunner::ScenarioRunner(Environment env, std::uint64_t base_seed, kernels::Exec exec)
    : env_(std::move(env)), base_seed_(base_seed), exec_(exec) {}

const BandwidthSelection& ScenarioRunner::cal_bandwidth() {
  std::lock_guard lock(mutex_);
  if (!bandwidth_) {
    PointPattern anchors{env_.anchors, PatternRole::ground_truth};
    bandwidth_ = std::make_unique<BandwidthSelection>(select_bandwidth(
        anchors, env_.field, derive_seed(base_seed_, hash_string("cal-bandwidth")),
        defaults::kBandwidthCandidates, exec_));
  }
  return *bandwidth_;
}

const IntensityModel& ScenarioRunner::model(ModelKind kind) {
  const double h = kind == ModelKind::Cal ? cal_bandwidth().bandwidth : 0.0;
  std::lock_guard lock(mutex_);
  auto& slot = models_[kind];
  if (!slot) {
    const IntensityModel raw = make_default_model(kind, env_.field, 1.0, defaults::kReferenceCount, env_.anchors, h);
    slot = std::make_unique<IntensityModel>(normalize(raw, env_.field, exec_));
  }
  return *slot;
}

void ScenarioRunner::prepare(std::span<const ScenarioConfig> scenarios) {
  // A model that cannot be built (or missing experimental data) fails the
  // affected scenarios individually when they run.
  for (const ScenarioConfig& cfg : scenarios) {
    if (!cfg.model) continue;
    try {
      model(*cfg.model);
    } catch (const Error&) {
    }
  }
}

PointPattern ScenarioRunner::ground_truth(const ScenarioConfig& cfg, int k) {
  if (!cfg.model) {
    if (!env_.experimental) throw Error(ErrorKind::InvalidConfig, "no experimental points loaded");
    return *env_.experimental;
  }
  const std::uint64_t seed = replication_seed(cfg, k);
  const auto key = std::make_pair(cfg.dataset_key() + "/" + std::to_string(cfg.base_seed), k);
  {
    std::lock_guard lock(mutex_);
    if (const auto it = samples_.find(key); it != samples_.end() && it->second) return *it->second;
  }
  // The model's reference count is the default; a custom n_ref rescales the factor.
  const IntensityModel& base = model(*cfg.model);
  const double factor = cfg.intensity_factor * cfg.counts.ground_truth / base.reference_count();
  auto sample = std::make_shared<const PointPattern>(
      sample_poisson(base.with_intensity_factor(factor), env_.field, derive_seed(seed, 1)));
  std::lock_guard lock(mutex_);
  samples_.emplace(key, sample);
  return *sample;
}

RunResult ScenarioRunner::run_replication(const ScenarioConfig& cfg, int k, kernels::Exec exec) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  r.scenario_id = cfg.id();
  r.replication = k;
  r.seed = replication_seed(cfg, k);

  const PointPattern truth = ground_truth(cfg, k);
  PointPattern observed;
  switch (cfg.observation) {
    case Observation::none:
      observed = truth;
      observed.role = PatternRole::observed;
      break;
    case Observation::obs1: observed = thin(truth, ThinningSpec::obs1(cfg.counts), derive_seed(r.seed, 2)); break;
    case Observation::obs2: observed = thin(truth, ThinningSpec::obs2(cfg.counts), derive_seed(r.seed, 2)); break;
  }
  const PointPattern targets = action_threshold(observed, cfg.action_threshold);
  const TreatmentPlan plan =
      cfg.tool.kind == ToolSpec::Kind::robot
          ? plan_robot(targets, RobotConfig{cfg.tool.treatment_radius}, env_.field, env_.start)
          : plan_tractor(targets, TractorConfig{cfg.tool.meander_width, cfg.tool.sections, cfg.tool.treatment_length},
                         env_.field, env_.start);
  r.metrics = compute_metrics(truth, plan, env_.field, exec);
  r.metrics.n_observed = observed.size();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<RunResult> ScenarioRunner::run(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<RunResult> out;
  for (int k = 0; k < cfg.replications; ++k) out.push_back(run_replication(cfg, k, exec_));
  return out;
}

SweepResult run_sweep(ScenarioRunner& runner, std::vector<ScenarioConfig> grid, int threads) {
  if (grid.empty()) throw Error(ErrorKind::InvalidConfig, "empty scenario grid");
  SweepResult result;
  std::stable_sort(grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a.id() < b.id(); });
  grid.erase(std::unique(grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a.id() == b.id(); }),
             grid.end());
  for (const auto& cfg : grid) cfg.validate();
  runner.prepare(grid);

  struct Task {
    std::size_t scenario;
    int k;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    for (int k = 0; k < grid[s].replications; ++k) tasks.push_back({s, k});
  }
  std::vector<std::optional<RunResult>> done(tasks.size());
  std::vector<std::optional<ScenarioFailure>> failed(tasks.size());
  auto execute = [&](std::size_t t, kernels::Exec exec) {
    const ScenarioConfig& cfg = grid[tasks[t].scenario];
    try {
      done[t] = runner.run_replication(cfg, tasks[t].k, exec);
    } catch (const Error& e) {
      failed[t] = ScenarioFailure{cfg.id(), std::string(to_string(e.kind())), e.what()};
    } catch (const std::exception& e) {
      failed[t] = ScenarioFailure{cfg.id(), "InternalError", e.what()};
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
  if (threads == 1) {
    for (std::ptrdiff_t t = 0; t < n; ++t) execute(static_cast<std::size_t>(t), kernels::Exec::serial);
  } else {
    const int team = threads > 0 ? threads : omp_get_max_threads();
    // Replications run side by side; the kernels inside each stay serial.
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::ptrdiff_t t = 0; t < n; ++t) execute(static_cast<std::size_t>(t), kernels::Exec::serial);
  }

  std::size_t t = 0;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    std::vector<RunResult> runs;
    std::optional<ScenarioFailure> failure;
    for (int k = 0; k < grid[s].replications; ++k, ++t) {
      if (failed[t] && !failure) failure = failed[t];
      if (done[t]) runs.push_back(std::move(*done[t]));
    }
    if (failure) {
      result.failures.push_back(std::move(*failure));
      continue;
    }
    result.rows.push_back(aggregate(runs));
    std::move(runs.begin(), runs.end(), std::back_inserter(result.runs));
  }
  result.scenarios = std::move(grid);
  return result;
}

MeasurePair parse_measure_pair(std::string_view text) {
  const char sep = text.find(':') != std::string_view::npos ? ':' : ',';
  const auto parts = split(text, sep);
  if (parts.size() != 2) throw Error(ErrorKind::InvalidConfig, "measure pair must be 'm1,m2'");
  MeasurePair pair{std::string(trim(parts[0])), std::string(trim(parts[1]))};
  for (const auto* m : {&pair.first, &pair.second}) {
    if (std::find(std::begin(kMeasureNames), std::end(kMeasureNames), *m) == std::end(kMeasureNames)) {
      throw Error(ErrorKind::InvalidConfig, "unknown measure '" + *m + "' (use d_d, f_r, rho2, A_t, A_eff)");
    }
  }
  return pair;
}

std::vector<std::string> results_header() {
  return {"scenario_id",   "model",       "intensity_factor", "observation",      "action_threshold_m",
          "tool",          "tool_param",  "replications",     "mean_d_d_m",       "sd_d_d_m",
          "mean_f_r",      "sd_f_r",      "mean_rho2_per_m2", "sd_rho2_per_m2",   "mean_A_t",
          "sd_A_t",        "mean_A_eff_m2", "sd_A_eff_m2",    "A_eff_defined_count"};
}

std::vector<std::string> results_row(const ScenarioConfig& cfg, const Aggregate& agg) {
  std::vector<std::string> row{agg.scenario_id,
                               cfg.model_label(),
                               format_number(cfg.intensity_factor),
                               std::string(to_string(cfg.observation)),
                               threshold_text(cfg.action_threshold),
                               cfg.tool.name(),
                               cfg.tool.param(),
                               std::to_string(agg.replications)};
  for (const std::string_view name : kMeasureNames) {
    const MeasureSummary& s = agg.measures.find(name)->second;
    row.push_back(number_or_empty(s.mean));
    row.push_back(number_or_empty(s.sd));
  }
  row.push_back(std::to_string(agg.measures.find("A_eff")->second.defined));
  return row;
}

std::vector<std::string> runs_header() {
  return {"scenario_id", "replication",    "seed",       "d_d_m",      "f_r",       "rho2_per_m2",
          "A_t",         "A_eff_m2",       "n_ground_truth", "n_observed", "n_targeted", "n_treated"};
}

std::vector<std::string> runs_row(const RunResult& r) {
  const MetricsRecord& m = r.metrics;
  return {r.scenario_id,
          std::to_string(r.replication),
          std::to_string(r.seed),
          format_number(m.d_d),
          format_number(m.f_r),
          format_number(m.rho2),
          format_number(m.A_t),
          format_number(m.A_eff),
          std::to_string(m.n_ground_truth),
          std::to_string(m.n_observed),
          std::to_string(m.n_targeted),
          std::to_string(m.n_treated)};
}

std::vector<RunResult> read_runs(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.header != runs_header()) throw IngestError(path.string(), 1, "unexpected runs header");
  std::vector<RunResult> out;
  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    try {
      RunResult r;
      r.scenario_id = row[0];
      r.replication = parse_int(row[1], "replication");
      r.seed = parse_u64(row[2], "seed");
      r.metrics.d_d = parse_number(row[3]);
      r.metrics.f_r = parse_optional_number(row[4]);
      r.metrics.rho2 = parse_optional_number(row[5]);
      r.metrics.A_t = parse_number(row[6]);
      r.metrics.A_eff = parse_optional_number(row[7]);
      r.metrics.n_ground_truth = parse_u64(row[8], "count");
      r.metrics.n_observed = parse_u64(row[9], "count");
      r.metrics.n_targeted = parse_u64(row[10], "count");
      r.metrics.n_treated = parse_u64(row[11], "count");
      out.push_back(std::move(r));
    } catch (const IngestError&) {
      throw;
    } catch (const Error& e) {
      throw IngestError(path.string(), line, e.what());
    }
  }
  return out;
}

namespace {

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  return out;
}

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

struct Row {
  const ScenarioConfig* cfg;
  const Aggregate* agg;
};

void write_frontiers(const std::vector<Row>& rows, const SweepOutput& out) {
  // One panel per dataset: model, intensity factor and observation date.
  std::map<std::string, std::vector<Row>> panels;
  for (const Row& r : rows) {
    const auto& c = *r.cfg;
    panels[c.model_label() + "_x" + format_number(c.intensity_factor) + "_" + std::string(to_string(c.observation))]
        .push_back(r);
  }
  for (const auto& [m1, m2] : out.pairs) {
    for (const auto& [panel, members] : panels) {
      std::vector<StrategyOutcome> outcomes;
      for (const Row& r : members) {
        outcomes.push_back(r.agg->outcome(r.cfg->tool.label() + "_la" + threshold_text(r.cfg->action_threshold)));
      }
      const ParetoFront front = pareto_front(outcomes, m1, m2);
      for (const auto& w : front.warnings) std::cerr << "frontier " << panel << ": " << w << '\n';
      std::vector<std::string> flag(outcomes.size(), "0");
      for (const auto k : front.optimal) flag[k] = "1";
      for (const auto k : front.excluded) flag[k] = "excluded";

      const std::string stem = "frontier_" + panel + "_" + m1 + "_" + m2;
      auto csv = create(out.dir / (stem + ".csv"));
      csv << "strategy_id,m1,m2,optimal\n";
      for (std::size_t k = 0; k < outcomes.size(); ++k) {
        csv << outcomes[k].strategy_id << ',' << number_or_empty(outcomes[k].measures.find(m1)->second) << ','
            << number_or_empty(outcomes[k].measures.find(m2)->second) << ',' << flag[k] << '\n';
      }
      auto line = create(out.dir / (stem + "_line.csv"));
      line << "m1,m2\n";
      for (const Vec2 p : front.staircase) line << format_number(p.x) << ',' << format_number(p.y) << '\n';
    }
  }
}

// Rows grouped by every scenario parameter except the swept one; groups in
// which the swept parameter takes at least two values are written.
template <class Key, class X>
void write_figure(const std::vector<Row>& rows, const std::filesystem::path& path, Key group_key, X x_of) {
  std::map<std::string, std::vector<Row>> groups;
  for (const Row& r : rows) groups[group_key(*r.cfg)].push_back(r);
  auto csv = create(path);
  csv << "model,intensity_factor,observation,action_threshold_m,tool,tool_param,"
         "mean_d_d_m,mean_f_r,mean_rho2_per_m2,mean_A_t,mean_A_eff_m2\n";
  for (auto& [key, members] : groups) {
    std::set<double> xs;
    for (const Row& r : members) xs.insert(x_of(*r.cfg));
    if (xs.size() < 2) continue;
    std::stable_sort(members.begin(), members.end(),
                     [&](const Row& a, const Row& b) { return x_of(*a.cfg) < x_of(*b.cfg); });
    for (const Row& r : members) {
      const auto& c = *r.cfg;
      csv << c.model_label() << ',' << format_number(c.intensity_factor) << ',' << to_string(c.observation) << ','
          << threshold_text(c.action_threshold) << ',' << c.tool.name() << ',' << c.tool.param();
      for (const std::string_view name : kMeasureNames) csv << ',' << number_or_empty(r.agg->measures.find(name)->second.mean);
      csv << '\n';
    }
  }
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

void write_sweep(const SweepResult& result, const SweepOutput& out) {
  std::filesystem::create_directories(out.dir);
  std::map<std::string, const ScenarioConfig*> by_id;
  for (const auto& cfg : result.scenarios) by_id[cfg.id()] = &cfg;

  std::vector<Row> rows;
  {
    auto csv = create(out.dir / "results.csv");
    write_csv_row(csv, results_header());
    for (const Aggregate& agg : result.rows) {
      const ScenarioConfig& cfg = *by_id.at(agg.scenario_id);
      write_csv_row(csv, results_row(cfg, agg));
      rows.push_back({&cfg, &agg});
    }
  }
  {
    auto csv = create(out.dir / "runs.csv");
    write_csv_row(csv, runs_header());
    for (const RunResult& r : result.runs) write_csv_row(csv, runs_row(r));
  }
  {
    auto csv = create(out.dir / "failures.csv");
    csv << "scenario_id,kind,message\n";
    for (const auto& f : result.failures) csv << f.scenario_id << ',' << f.kind << ',' << sanitize(f.message) << '\n';
  }
  write_frontiers(rows, out);

  auto key_without = [](const ScenarioConfig& c, int skip) {
    std::string key = c.model_label() + "|" + c.tool.label();
    if (skip != 0) key += "|" + format_number(c.intensity_factor);
    if (skip != 1) key += "|" + std::string(to_string(c.observation));
    if (skip != 2) key += "|" + threshold_text(c.action_threshold);
    return key;
  };
  write_figure(
      rows, out.dir / "fig_action_threshold.csv", [&](const ScenarioConfig& c) { return key_without(c, 2); },
      [](const ScenarioConfig& c) { return c.action_threshold; });
  write_figure(
      rows, out.dir / "fig_observation_date.csv", [&](const ScenarioConfig& c) { return key_without(c, 1); },
      [](const ScenarioConfig& c) { return static_cast<double>(c.observation); });
  write_figure(
      rows, out.dir / "fig_intensity_factor.csv", [&](const ScenarioConfig& c) { return key_without(c, 0); },
      [](const ScenarioConfig& c) { return c.intensity_factor; });

  {
    auto csv = create(out.dir / "timing.csv");
    csv << "scenario_id,replication,seconds\n";
    for (const RunResult& r : result.runs) {
      csv << r.scenario_id << ',' << r.replication << ',' << format_number(r.seconds) << '\n';
    }
  }
  auto meta = create(out.dir / "metadata.txt");
  meta << "written = " << timestamp() << '\n'
       << "base_seed = " << out.base_seed << '\n'
       << "threads = " << (out.threads == 1 ? 1 : (out.threads > 0 ? out.threads : omp_get_max_threads())) << '\n'
       << "scenarios = " << result.scenarios.size() << '\n'
       << "runs = " << result.runs.size() << '\n'
       << "failures = " << result.failures.size() << '\n'
       << "wall_seconds = " << format_number(out.wall_seconds) << '\n';
}

std::vector<ScenarioConfig> paper_suite_grid(std::uint64_t base_seed, int replications, bool include_experimental) {
  std::vector<std::optional<ModelKind>> datasets{ModelKind::Cal, ModelKind::Hom, ModelKind::Cen, ModelKind::Sin};
  if (include_experimental) datasets.insert(datasets.begin(), std::nullopt);

  std::vector<ToolSpec> tools;
  for (const double r : defaults::kTreatmentRadii) tools.push_back(ToolSpec::robot(r));
  for (const int n : defaults::kSectionCounts) tools.push_back(ToolSpec::tractor(n));
  const std::vector<ToolSpec> reference_tools{ToolSpec::robot(0.2), ToolSpec::tractor(10)};

  std::vector<ScenarioConfig> grid;
  auto add = [&](std::optional<ModelKind> model, double factor, Observation obs, double la, const ToolSpec& tool) {
    ScenarioConfig c;
    c.model = model;
    c.intensity_factor = factor;
    c.observation = obs;
    c.action_threshold = la;
    c.tool = tool;
    c.replications = replications;
    c.base_seed = base_seed;
    grid.push_back(c);
  };
  for (const auto& model : datasets) {
    for (const double la : defaults::kActionThresholds) {
      for (const auto& tool : tools) add(model, 1.0, Observation::obs1, la, tool);
    }
    for (const auto& tool : reference_tools) add(model, 1.0, Observation::obs2, defaults::kUnlimited, tool);
    if (!model) continue;
    for (const double factor : defaults::kIntensityFactors) {
      for (const auto& tool : reference_tools) add(model, factor, Observation::obs1, defaults::kUnlimited, tool);
    }
  }
  std::sort(grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a.id() < b.id(); });
  grid.erase(std::unique(grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a.id() == b.id(); }),
             grid.end());
  return grid;
}

std::vector<MeasurePair> paper_suite_pairs() { return {{"d_d", "A_eff"}, {"f_r", "A_eff"}, {"A_t", "rho2"}}; }

SweepPlan sweep_plan(const ConfigFile& file, const std::filesystem::path& base_dir) {
  SweepPlan plan;
  int default_reps = defaults::kReplications;
  ReferenceCounts counts;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  for (const auto& [key, value] : file.global.entries) {
    if (key == "base_seed") plan.base_seed = parse_u64(value, key);
    else if (key == "field") plan.field = resolve(value);
    else if (key == "anchors") plan.anchors = resolve(value);
    else if (key == "exp_points") plan.experimental = resolve(value);
    else if (key == "pairs") {
      for (const auto& item : split_list(value)) plan.pairs.push_back(parse_measure_pair(item));
    } else if (key == "replications") default_reps = parse_int(value, key);
    else if (key == "reference_count") counts.ground_truth = parse_int(value, key);
    else if (key == "observed_early_count") counts.observed_early = parse_int(value, key);
    else if (key == "observed_late_count") counts.observed_late = parse_int(value, key);
    else throw Error(ErrorKind::InvalidConfig, "unknown global key '" + key + "'");
  }
  if (file.sections.empty()) throw Error(ErrorKind::InvalidConfig, "config defines no scenario sections");

  for (const ConfigSection& section : file.sections) {
    const std::string where = "section [" + section.name + "] (line " + std::to_string(section.line) + ")";
    for (const auto& [key, value] : section.entries) {
      static const std::set<std::string> known{"model",       "intensity_factor", "observation",
                                               "action_threshold", "tool",        "replications"};
      if (!known.count(key)) throw Error(ErrorKind::InvalidConfig, where + ": unknown key '" + key + "'");
    }
    auto list = [&](std::string_view key, std::string fallback) {
      auto items = split_list(section.get(key).value_or(fallback));
      if (items.empty()) throw Error(ErrorKind::InvalidConfig, where + ": empty list for '" + std::string(key) + "'");
      return items;
    };
    if (!section.get("model") || !section.get("tool")) {
      throw Error(ErrorKind::InvalidConfig, where + ": 'model' and 'tool' are required");
    }
    const int reps = section.get("replications") ? parse_int(*section.get("replications"), "replications")
                                                 : default_reps;
    try {
      for (const auto& model : list("model", "")) {
        for (const auto& factor : list("intensity_factor", "1")) {
          for (const auto& obs : list("observation", "obs1")) {
            for (const auto& la : list("action_threshold", "inf")) {
              for (const auto& tool : list("tool", "")) {
                ScenarioConfig c;
                if (model != "Exp") c.model = parse_model_kind(model);
                c.intensity_factor = parse_number(factor);
                c.observation = parse_observation(obs);
                c.action_threshold = parse_number(la);
                c.tool = parse_tool(tool);
                c.replications = reps;
                c.base_seed = plan.base_seed;
                c.counts = counts;
                c.validate();
                if (!c.model && !plan.experimental) {
                  throw Error(ErrorKind::InvalidConfig, "model Exp needs 'exp_points' in the global section");
                }
                plan.scenarios.push_back(c);
              }
            }
          }
        }
      }
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig, where + ": " + e.what());
    }
  }
  return plan;
}

Environment load_environment(const std::optional<std::filesystem::path>& field,
                             const std::optional<std::filesystem::path>& anchors,
                             const std::optional<std::filesystem::path>& experimental) {
  Environment env;
  if (field) env.field = read_field(*field);
  env.start = env.field.lower_left_vertex();
  auto inside = [&](const std::vector<Vec2>& pts, const std::filesystem::path& source) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (!contains(env.field, pts[k])) {
        throw IngestError(source.string(), 0, "point " + std::to_string(k + 1) + " lies outside the field");
      }
    }
  };
  if (experimental) {
    const auto pts = read_points(*experimental);
    inside(pts, *experimental);
    PointPattern merged = merge_close(PointPattern{pts, PatternRole::ground_truth});
    merged.role = PatternRole::ground_truth;
    env.experimental = std::move(merged);
  }
  if (anchors) {
    env.anchors = read_points(*anchors);
    inside(env.anchors, *anchors);
  } else if (env.experimental) {
    env.anchors = env.experimental->points;
  } else {
    env.anchors = standin_anchors(env.field);
  }
  return env;
}

}  // namespace weedsim
