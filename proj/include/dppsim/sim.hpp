#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dppsim/queues.hpp"
#include "dppsim/scheduler.hpp"
#include "dppsim/topology.hpp"

namespace dppsim {

// Scenario configuration for episodes and sweeps. Scalar fields drive a
// single episode; the grid fields span the sweep cells. Parsed from a plain
// `key = value` file (comma-separated lists for grids).
struct ScenarioConfig {
  // network
  int n_min = 20;
  int n_max = 50;
  double commodity_fraction = 0.2;
  double link_radius = 0.3;
  // channel
  double noise = 0.01;
  double P_max = 1.0;
  double static_power = 0.1;  // P0
  double kappa_max = 20.0;
  // traffic
  double lambda0 = 0.25;
  std::vector<double> lambda_grid = {0.1, 0.25, 0.5, 0.75, 0.95};
  // control
  std::vector<std::string> backlogs = {"bp"};
  double sp_weight = 1.0;
  double bound = 10.0;
  std::string allocator = "pressure";
  int gradient_steps = 10;
  double gradient_step_size = 0.0;
  std::vector<std::string> schedulers = {"maxweight"};
  std::vector<double> eta_grid = {0.5, 1.0};
  std::vector<double> v_grid = {0.0, 1.0, 10.0, 100.0};
  std::string penalty = "none";
  int sinkhorn_max_iters = 500;
  double sinkhorn_tol = 1e-6;
  // episode
  int t_max = 100;
  double sigma = 0.0;  // mobility noise
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double episode_time_budget_s = 60.0;

  ControlConfig control(const std::string& backlog, const std::string& scheduler,
                        double eta, double V) const;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

struct EpisodeResult {
  EpisodeMetrics metrics;
  double queue_ratio = 0.0;
  double mean_penalty = 0.0;
  double slope = 0.0;  // trailing-half stability slope
  double runtime_s = 0.0;
};

// Called once per slot with the raw control decision and the realized
// transfers; used for schedule traces and debugging.
using StepObserver =
    std::function<void(int step, const DppStepResult&, const CommodityTensor& realized)>;

// Runs one deterministic episode: generate network (or use the fixture),
// then per slot control -> realize -> arrivals -> queue update, with
// conservation checked every step. Mobility, when enabled, perturbs the
// positions after each slot and recomputes links and gains.
EpisodeResult run_episode(const ScenarioConfig& config, std::uint64_t seed,
                          const ControlConfig& control,
                          const Topology* fixture = nullptr,
                          const StepObserver& observer = {});

struct SeedRow {
  std::string scenario_id;
  std::string backlog;
  std::string scheduler;
  std::string allocator;
  double lambda0 = 0.0;
  double V = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double queue_ratio = 0.0;
  double mean_penalty = 0.0;
  double slope = 0.0;
  double runtime_s = 0.0;
  std::string status = "ok";
};

struct AggregateRow {
  std::string scenario_id;
  std::string backlog;
  std::string scheduler;
  std::string allocator;
  double lambda0 = 0.0;
  double V = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
  double queue_ratio_mean = 0.0;
  double queue_ratio_stderr = 0.0;
  double penalty_mean = 0.0;
  double penalty_stderr = 0.0;
  double slope_mean = 0.0;
  int n_seeds = 0;
};

struct SweepResult {
  std::vector<SeedRow> rows;
  std::vector<AggregateRow> aggregates;
};

// Cartesian product of the grid cells times the seeds, evaluated with the
// requested parallelism. Output ordering and contents are independent of the
// parallelism degree; failed episodes are recorded per row and skipped in
// the aggregates.
SweepResult run_sweep(const ScenarioConfig& config, int parallelism = 1);

// Evaluates fixed controller settings (tuned at train_rate) across test
// rates; throws on an empty test grid.
SweepResult ood_experiment(const ScenarioConfig& config, double train_rate,
                           const std::vector<double>& test_rates, int parallelism = 1);

// Sweeps the mobility noise level.
SweepResult mobility_experiment(const ScenarioConfig& config,
                                const std::vector<double>& sigma_grid,
                                int parallelism = 1);

// Writes <out_dir>/sweep.csv (aggregate schema), <out_dir>/seeds.csv and one
// SVG line chart per metric. An empty result produces a header-only CSV and
// no SVG.
std::vector<std::string> emit_outputs(const SweepResult& result, const std::string& out_dir);

std::string aggregate_csv(const SweepResult& result);
std::string seed_csv(const SweepResult& result);
std::vector<AggregateRow> parse_aggregate_csv(const std::string& text);

// Canonical number formatting used by all emitted files (round-trip exact).
std::string format_double(double v);

}  // namespace dppsim
