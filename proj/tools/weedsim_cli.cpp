#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "weedsim/error.hpp"
#include "weedsim/harness.hpp"
#include "weedsim/io.hpp"
#include "weedsim/rng.hpp"

namespace fs = std::filesystem;
using namespace weedsim;

namespace {

struct Common {
  std::optional<fs::path> field;
  std::optional<fs::path> anchors;
  std::optional<fs::path> exp_points;
  std::uint64_t seed = kDefaultBaseSeed;
  int threads = 0;
};

kernels::Exec apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
  return threads == 1 ? kernels::Exec::serial : kernels::Exec::parallel;
}

double parse_threshold(const std::string& text) {
  const double v = parse_number(text);
  if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "action threshold must be positive");
  return v;
}

void print_metrics(std::ostream& out, const MetricsRecord& m) {
  out << "d_d_m = " << format_number(m.d_d) << '\n'
      << "f_r = " << format_number(m.f_r) << '\n'
      << "rho2_per_m2 = " << format_number(m.rho2) << '\n'
      << "A_t = " << format_number(m.A_t) << '\n'
      << "A_eff_m2 = " << format_number(m.A_eff) << '\n'
      << "n_ground_truth = " << m.n_ground_truth << '\n'
      << "n_observed = " << m.n_observed << '\n'
      << "n_targeted = " << m.n_targeted << '\n'
      << "n_treated = " << m.n_treated << '\n';
}

void report_sweep(const SweepResult& result, const fs::path& dir) {
  std::cout << "scenarios: " << result.scenarios.size() << ", runs: " << result.runs.size()
            << ", failures: " << result.failures.size() << '\n'
            << "results written to " << (dir / "results.csv").string() << '\n';
  for (const auto& f : result.failures) std::cerr << "failed " << f.scenario_id << ": " << f.message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weedsim: Monte Carlo evaluation of site-specific weed treatment strategies"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--field", common.field, "Field polygon file (one 'x y' vertex per line)");
    sub->add_option("--anchors", common.anchors, "Points the Cal model is built from");
    sub->add_option("--exp-points", common.exp_points, "Experimental ground-truth points (dataset Exp)");
    sub->add_option("--seed", common.seed, "Base seed (u64)");
    sub->add_option("--threads", common.threads, "Thread count; 1 runs the serial reference path");
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a ground-truth pattern to a points file");
  add_common(gen);
  std::string gen_model = "Hom";
  double gen_factor = 1.0;
  std::string gen_obs = "none";
  fs::path gen_out;
  std::optional<fs::path> gen_observed_out;
  gen->add_option("--model", gen_model, "Cal, Hom, Cen or Sin")->capture_default_str();
  gen->add_option("--intensity-factor", gen_factor, "lambda*")->capture_default_str();
  gen->add_option("--observation", gen_obs, "obs1, obs2 or none (thinning for --observed-out)")->capture_default_str();
  gen->add_option("--out", gen_out, "Output points file")->required();
  gen->add_option("--observed-out", gen_observed_out, "Also write the observed subset here");

  // treat
  auto* treat = app.add_subcommand("treat", "Plan a treatment for a points file");
  add_common(treat);
  fs::path treat_points;
  std::optional<fs::path> treat_truth;
  std::string treat_tool = "robot:0.2";
  std::string treat_la = "inf";
  fs::path treat_out;
  treat->add_option("--points", treat_points, "Observed locations to treat")->required();
  treat->add_option("--ground-truth", treat_truth, "Ground truth for the metrics (default: --points)");
  treat->add_option("--tool", treat_tool, "robot:<r_t> or tractor:<n_s>[:<w_m>[:<l_d>]]")->capture_default_str();
  treat->add_option("--action-threshold", treat_la, "Action threshold in m, or inf")->capture_default_str();
  treat->add_option("--out", treat_out, "Output directory for route.txt, region.txt, targets.txt")->required();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Compute the performance measures of a stored plan");
  add_common(eval);
  fs::path eval_truth, eval_route, eval_region;
  std::optional<fs::path> eval_targets;
  eval->add_option("--ground-truth", eval_truth, "Ground-truth points file")->required();
  eval->add_option("--route", eval_route, "Route file written by treat")->required();
  eval->add_option("--region", eval_region, "Region file written by treat")->required();
  eval->add_option("--targets", eval_targets, "Targeted points (for n_targeted)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a scenario grid from a config file");
  add_common(sweep);
  fs::path sweep_config;
  fs::path sweep_out = "results";
  std::optional<int> sweep_reps;
  std::vector<std::string> sweep_pairs;
  sweep->add_option("--config", sweep_config, "Config file")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->capture_default_str();
  sweep->add_option("--reps", sweep_reps, "Override the replication count");
  sweep->add_option("--pair", sweep_pairs, "Measure pair m1,m2 for frontiers (repeatable)");

  // paper-suite
  auto* suite = app.add_subcommand("paper-suite", "Run the built-in scenario grid");
  add_common(suite);
  fs::path suite_out = "paper-suite";
  int suite_reps = defaults::kReplications;
  std::vector<std::string> suite_pairs;
  suite->add_option("--out", suite_out, "Output directory")->capture_default_str();
  suite->add_option("--reps", suite_reps, "Replications per scenario")->capture_default_str();
  suite->add_option("--pair", suite_pairs, "Measure pair m1,m2 (default: d_d,A_eff f_r,A_eff A_t,rho2)");

  CLI11_PARSE(app, argc, argv);

  try {
    const kernels::Exec exec = apply_threads(common.threads);

    if (gen->parsed()) {
      Environment env = load_environment(common.field, common.anchors, common.exp_points);
      ScenarioConfig cfg;
      cfg.model = parse_model_kind(gen_model);
      cfg.intensity_factor = gen_factor;
      cfg.observation = parse_observation(gen_obs);
      cfg.base_seed = common.seed;
      cfg.replications = 1;
      cfg.validate();
      ScenarioRunner runner(std::move(env), common.seed, exec);
      const PointPattern truth = runner.ground_truth(cfg, 0);
      write_points(gen_out, truth.points);
      std::cout << "wrote " << truth.size() << " points to " << gen_out.string() << '\n';
      if (gen_observed_out) {
        const std::uint64_t thin_seed = derive_seed(replication_seed(cfg, 0), 2);
        PointPattern observed = truth;
        if (cfg.observation == Observation::obs1) observed = thin(truth, ThinningSpec::obs1(), thin_seed);
        if (cfg.observation == Observation::obs2) observed = thin(truth, ThinningSpec::obs2(), thin_seed);
        write_points(*gen_observed_out, observed.points);
        std::cout << "wrote " << observed.size() << " observed points to " << gen_observed_out->string() << '\n';
      }
      return 0;
    }

    if (treat->parsed()) {
      const Environment env = load_environment(common.field, std::nullopt, std::nullopt);
      PointPattern observed{read_points(treat_points), PatternRole::observed};
      validate_pattern(observed, env.field);
      const PointPattern truth{treat_truth ? read_points(*treat_truth) : observed.points, PatternRole::ground_truth};
      const ToolSpec tool = parse_tool(treat_tool);
      const PointPattern targets = action_threshold(observed, parse_threshold(treat_la));
      const TreatmentPlan plan =
          tool.kind == ToolSpec::Kind::robot
              ? plan_robot(targets, RobotConfig{tool.treatment_radius}, env.field, env.start)
              : plan_tractor(targets, TractorConfig{tool.meander_width, tool.sections, tool.treatment_length},
                             env.field, env.start);
      fs::create_directories(treat_out);
      write_points(treat_out / "route.txt", plan.route);
      write_region(treat_out / "region.txt", plan.treated_region);
      write_points(treat_out / "targets.txt", targets.points);
      MetricsRecord m = compute_metrics(truth, plan, env.field, exec);
      m.n_observed = observed.size();
      print_metrics(std::cout, m);
      return 0;
    }

    if (eval->parsed()) {
      const Environment env = load_environment(common.field, std::nullopt, std::nullopt);
      const PointPattern truth{read_points(eval_truth), PatternRole::ground_truth};
      TreatmentPlan plan;
      plan.route = read_points(eval_route);
      plan.driving_distance = polyline_length(plan.route);
      plan.treated_region = read_region(eval_region);
      if (!plan.treated_region.grid().same_layout(env.field.grid())) {
        throw Error(ErrorKind::GridMismatch, "region grid does not match the field grid");
      }
      if (eval_targets) plan.targeted = PointPattern{read_points(*eval_targets), PatternRole::targeted};
      print_metrics(std::cout, compute_metrics(truth, plan, env.field, exec));
      return 0;
    }

    if (sweep->parsed()) {
      const auto t0 = std::chrono::steady_clock::now();
      SweepPlan plan = sweep_plan(read_config(sweep_config), sweep_config.parent_path());
      if (sweep->count("--seed")) {
        plan.base_seed = common.seed;
        for (auto& c : plan.scenarios) c.base_seed = common.seed;
      }
      if (sweep_reps) {
        for (auto& c : plan.scenarios) c.replications = *sweep_reps;
      }
      for (const auto& p : sweep_pairs) plan.pairs.push_back(parse_measure_pair(p));
      Environment env = load_environment(common.field ? common.field : plan.field,
                                         common.anchors ? common.anchors : plan.anchors,
                                         common.exp_points ? common.exp_points : plan.experimental);
      ScenarioRunner runner(std::move(env), plan.base_seed, exec);
      const SweepResult result = run_sweep(runner, plan.scenarios, common.threads);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_sweep(result, {sweep_out, plan.pairs, plan.base_seed, common.threads, wall});
      report_sweep(result, sweep_out);
      return result.failures.empty() ? 0 : 3;
    }

    if (suite->parsed()) {
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<MeasurePair> pairs;
      for (const auto& p : suite_pairs) pairs.push_back(parse_measure_pair(p));
      if (pairs.empty()) pairs = paper_suite_pairs();
      Environment env = load_environment(common.field, common.anchors, common.exp_points);
      const bool with_exp = env.experimental.has_value();
      ScenarioRunner runner(std::move(env), common.seed, exec);
      const SweepResult result =
          run_sweep(runner, paper_suite_grid(common.seed, suite_reps, with_exp), common.threads);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_sweep(result, {suite_out, pairs, common.seed, common.threads, wall});
      report_sweep(result, suite_out);
      return result.failures.empty() ? 0 : 3;
    }
  } catch (const IngestError& e) {
    std::cerr << "error [IngestError] " << e.source() << ':' << e.line() << ": " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
