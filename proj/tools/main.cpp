// Command-line front end: single episodes, parameter sweeps, the
// out-of-distribution and mobility experiments, and the oracle verification
// suites.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dppsim/fixtures.hpp"
#include "dppsim/lp_oracle.hpp"
#include "dppsim/sim.hpp"

using namespace dppsim;

namespace {

ScenarioConfig config_from(const std::string& path) {
  if (path.empty()) return ScenarioConfig{};
  return load_config(path);
}

std::vector<std::uint64_t> parse_seed_csv(const std::string& arg) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(arg);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
  }
  return seeds;
}

std::vector<double> parse_double_csv(const std::string& arg) {
  std::vector<double> out;
  std::stringstream in(arg);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

void write_episode_csv(const EpisodeMetrics& metrics, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step,total_queue,arrivals,delivered,penalty\n";
  for (int t = 0; t < metrics.horizon(); ++t)
    out << t << "," << format_double(metrics.queue_total[t]) << ","
        << format_double(metrics.arrivals[t]) << "," << format_double(metrics.delivered[t])
        << "," << format_double(metrics.penalty[t]) << "\n";
}

int run_verify(std::uint64_t seed, int equiv_instances, int optprop_instances,
               int agreement_instances, int gap_instances) {
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    all_ok = all_ok && ok;
  };

  {
    Rng rng(seed);
    int failures = 0;
    for (int k = 0; k < equiv_instances; ++k)
      if (!verify_threshold_equivalence(random_schedule_lp(rng))) ++failures;
    report("threshold_equiv", failures == 0,
           std::to_string(equiv_instances - failures) + "/" +
               std::to_string(equiv_instances) +
               " thresholded transport optima match the LP");
  }
  {
    Rng rng(seed + 1);
    int failures = 0;
    for (int k = 0; k < optprop_instances; ++k) {
      const ScheduleLP lp = random_schedule_lp(rng);
      if (!verify_schedule_optimality(solve_schedule_lp(lp).schedule, lp)) ++failures;
    }
    report("optimality_props", failures == 0,
           std::to_string(optprop_instances - failures) + "/" + std::to_string(optprop_instances) +
               " oracle solutions satisfy both optimality properties");
  }
  {
    Rng rng(seed + 2);
    double worst = 0.0;
    int compared = 0;
    for (int k = 0; k < agreement_instances; ++k) {
      const ScheduleLP lp = random_schedule_lp(rng);
      const SinkhornProblem p = build_ot_problem(lp.weights, lp.queues, lp.capacities, 1.0);
      if (p.empty()) continue;
      const SinkhornResult sparse = sparse_sinkhorn(p, {1.0, 25, 0.0});
      const auto dense = dense_entropic_reference<long double>(p, 25, 0.0);
      worst = std::max(worst,
                       (sparse.plan - cells_from_dense(dense.plan, p)).cwiseAbs().maxCoeff());
      ++compared;
    }
    report("sparse_dense", worst <= 1e-8,
           "max entrywise gap " + format_double(worst) + " over " + std::to_string(compared) +
               " instances after equal iteration counts");
  }
  {
    Rng rng(seed + 3);
    int within = 0, compared = 0;
    for (int k = 0; k < gap_instances; ++k) {
      const ScheduleLP lp = random_schedule_lp(rng);
      if (lp.capacities.maxCoeff() <= 0.0) continue;
      const SinkhornProblem p = build_ot_problem(lp.weights, lp.queues, lp.capacities, 100.0);
      const SinkhornResult r = sparse_sinkhorn(p, {100.0, 250000, 1e-8});
      const Matrix mu = threshold_schedule(r.plan, p, 0, lp.weights);
      const double objective = (lp.weights.array() * mu.array()).sum();
      const double optimum = solve_schedule_lp(lp).objective;
      ++compared;
      if (objective >= optimum - 0.05 * optimum - 1e-9) ++within;
    }
    report("sinkhorn_gap", within == compared,
           std::to_string(within) + "/" + std::to_string(compared) +
               " schedules within 5% of the LP optimum at eta=100");
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift-plus-penalty routing simulator with optimal-transport link scheduling"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", seeds_arg, fixture_path;
  int parallelism = 1;
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* cmd, bool with_parallelism) {
    cmd->add_option("--config", config_path, "scenario config file (key = value lines)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seeds", seeds_arg, "comma-separated seed list override");
    if (with_parallelism)
      cmd->add_option("--parallelism", parallelism, "worker threads for episodes");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run a single episode and dump metrics");
  add_common(simulate, false);
  simulate->add_option("--seed", seed, "episode seed");
  simulate->add_option("--network", fixture_path, "JSON network fixture to reuse");
  std::string dump_network, trace_path;
  simulate->add_option("--dump-network", dump_network, "write the generated network JSON here");
  simulate->add_option("--trace", trace_path,
                       "write a per-step schedule trace (step, commodity, from, to, weight, mu)");

  CLI::App* sweep = app.add_subcommand("sweep", "run the configured parameter grid");
  add_common(sweep, true);

  CLI::App* ood = app.add_subcommand("ood", "evaluate fixed settings across test rates");
  add_common(ood, true);
  double train_rate = 0.25;
  std::string test_rates_arg = "0.25,0.5,0.75,0.95";
  ood->add_option("--train-rate", train_rate, "rate the settings are tuned at");
  ood->add_option("--test-rates", test_rates_arg, "comma-separated evaluation rates");

  CLI::App* mobility = app.add_subcommand("mobility", "sweep the position noise level");
  add_common(mobility, true);
  std::string sigma_arg = "0,0.01,0.05";
  mobility->add_option("--sigmas", sigma_arg, "comma-separated mobility noise levels");

  CLI::App* verify = app.add_subcommand("verify", "run the oracle verification suites");
  int equiv_instances = 1000, optprop_instances = 500, agreement_instances = 50,
      gap_instances = 200;
  verify->add_option("--seed", seed, "base seed for the random instances");
  verify->add_option("--equivalence", equiv_instances, "instance count for the threshold-equivalence check");
  verify->add_option("--optimality", optprop_instances, "instance count for the optimality-property check");
  verify->add_option("--agreement", agreement_instances, "instances for sparse/dense agreement");
  verify->add_option("--gap", gap_instances, "instances for the eta=100 LP-gap check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(verify))
      return run_verify(seed, equiv_instances, optprop_instances, agreement_instances,
                        gap_instances);

    ScenarioConfig cfg = config_from(config_path);
    if (!seeds_arg.empty()) cfg.seeds = parse_seed_csv(seeds_arg);

    if (app.got_subcommand(simulate)) {
      const ControlConfig control = cfg.control(cfg.backlogs.front(), cfg.schedulers.front(),
                                                cfg.eta_grid.front(), cfg.v_grid.front());
      Topology fixture;
      const Topology* fixture_ptr = nullptr;
      if (!fixture_path.empty()) {
        std::ifstream in(fixture_path);
        if (!in) throw std::runtime_error("cannot open network fixture " + fixture_path);
        std::stringstream buf;
        buf << in.rdbuf();
        fixture = topology_from_json(buf.str()).first;
        fixture_ptr = &fixture;
      }
      std::ofstream trace;
      StepObserver observer;
      if (!trace_path.empty()) {
        const auto parent = std::filesystem::path(trace_path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        trace.open(trace_path, std::ios::binary);
        if (!trace) throw std::runtime_error("cannot write trace file " + trace_path);
        trace << "step,commodity,from,to,weight,mu\n";
        observer = [&trace](int step, const DppStepResult& decision,
                            const CommodityTensor& realized) {
          for (int c = 0; c < static_cast<int>(realized.size()); ++c)
            for (int i = 0; i < realized[c].rows(); ++i)
              for (int j = 0; j < realized[c].cols(); ++j)
                if (realized[c](i, j) > 0.0)
                  trace << step << "," << c << "," << i << "," << j << ","
                        << format_double(decision.weights[c](i, j)) << ","
                        << format_double(realized[c](i, j)) << "\n";
        };
      }
      const EpisodeResult res = run_episode(cfg, seed, control, fixture_ptr, observer);
      std::filesystem::create_directories(out_dir);
      write_episode_csv(res.metrics, out_dir + "/episode.csv");
      if (!dump_network.empty()) {
        Rng rng(seed);
        const Topology topo = generate_geometric_network(cfg.n_min, cfg.n_max,
                                                         cfg.commodity_fraction,
                                                         cfg.link_radius, rng);
        std::ofstream out(dump_network, std::ios::binary);
        out << topology_to_json(topo, channel_gains(topo, cfg.noise));
      }
      std::cout << "queue_ratio=" << format_double(res.queue_ratio)
                << " mean_penalty=" << format_double(res.mean_penalty)
                << " slope=" << format_double(res.slope)
                << " runtime_s=" << format_double(res.runtime_s) << "\n";
      return 0;
    }

    SweepResult result;
    if (app.got_subcommand(sweep)) {
      result = run_sweep(cfg, parallelism);
    } else if (app.got_subcommand(ood)) {
      result = ood_experiment(cfg, train_rate, parse_double_csv(test_rates_arg), parallelism);
    } else if (app.got_subcommand(mobility)) {
      result = mobility_experiment(cfg, parse_double_csv(sigma_arg), parallelism);
    }
    const auto files = emit_outputs(result, out_dir);
    for (const std::string& f : files) std::cout << "wrote " << f << "\n";
    int failures = 0;
    for (const SeedRow& row : result.rows)
      if (row.status != "ok") ++failures;
    if (failures > 0)
      std::cerr << failures << " episode(s) failed; see the status column in seeds.csv\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
