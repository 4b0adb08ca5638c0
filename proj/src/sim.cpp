#include "dppsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dppsim {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const std::string& tok : split(s, ','))
    if (!tok.empty()) out.push_back(std::stoull(tok));
  return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
  std::vector<std::string> out;
  for (const std::string& tok : split(s, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n_min") cfg.n_min = std::stoi(value);
    else if (key == "n_max") cfg.n_max = std::stoi(value);
    else if (key == "commodity_fraction") cfg.commodity_fraction = std::stod(value);
    else if (key == "link_radius") cfg.link_radius = std::stod(value);
    else if (key == "noise") cfg.noise = std::stod(value);
    else if (key == "p_max") cfg.P_max = std::stod(value);
    else if (key == "static_power") cfg.static_power = std::stod(value);
    else if (key == "kappa_max") cfg.kappa_max = std::stod(value);
    else if (key == "lambda0") {
      cfg.lambda_grid = parse_double_list(value);
      if (cfg.lambda_grid.empty()) throw std::invalid_argument("lambda0: empty list");
      cfg.lambda0 = cfg.lambda_grid.front();
    } else if (key == "backlog") cfg.backlogs = parse_name_list(value);
    else if (key == "sp_weight") cfg.sp_weight = std::stod(value);
    else if (key == "bound_b") cfg.bound = std::stod(value);
    else if (key == "allocator") cfg.allocator = value;
    else if (key == "gradient_steps") cfg.gradient_steps = std::stoi(value);
    else if (key == "gradient_step_size") cfg.gradient_step_size = std::stod(value);
    else if (key == "scheduler") cfg.schedulers = parse_name_list(value);
    else if (key == "eta") cfg.eta_grid = parse_double_list(value);
    else if (key == "v") cfg.v_grid = parse_double_list(value);
    else if (key == "penalty") cfg.penalty = value;
    else if (key == "sinkhorn_max_iters") cfg.sinkhorn_max_iters = std::stoi(value);
    else if (key == "sinkhorn_tol") cfg.sinkhorn_tol = std::stod(value);
    else if (key == "t_max") cfg.t_max = std::stoi(value);
    else if (key == "sigma") cfg.sigma = std::stod(value);
    else if (key == "seeds") cfg.seeds = parse_seed_list(value);
    else if (key == "episode_time_budget_s") cfg.episode_time_budget_s = std::stod(value);
    else throw std::invalid_argument("unknown config key: " + key);
  }
  if (cfg.t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (cfg.seeds.empty()) throw std::invalid_argument("seeds must be non-empty");
  if (cfg.eta_grid.empty() || cfg.v_grid.empty() || cfg.lambda_grid.empty() ||
      cfg.backlogs.empty() || cfg.schedulers.empty())
    throw std::invalid_argument("grids must be non-empty");
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ControlConfig ScenarioConfig::control(const std::string& backlog, const std::string& scheduler,
                                      double eta, double V) const {
  ControlConfig cc;
  cc.backlog = backlog_kind_from_name(backlog);
  cc.sp_weight = sp_weight;
  cc.bound = bound;
  cc.allocator.kind = allocator_kind_from_name(this->allocator);
  cc.allocator.steps = gradient_steps;
  cc.allocator.step_size = gradient_step_size;
  cc.allocator.penalty_weight = V;
  cc.allocator.penalty = PenaltySpec{penalty_kind_from_name(penalty), static_power};
  cc.scheduler = scheduler_kind_from_name(scheduler);
  cc.sinkhorn = SinkhornConfig{eta, sinkhorn_max_iters, sinkhorn_tol};
  cc.penalty = cc.allocator.penalty;
  cc.P_max = P_max;
  cc.kappa_max = kappa_max;
  return cc;
}

EpisodeResult run_episode(const ScenarioConfig& config, std::uint64_t seed,
                          const ControlConfig& control, const Topology* fixture,
                          const StepObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  Rng net_rng(seed);
  Rng arrival_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Rng mobility_rng(seed ^ 0xda942042e4dd58b5ULL);

  Topology topo = fixture ? *fixture
                          : generate_geometric_network(config.n_min, config.n_max,
                                                       config.commodity_fraction,
                                                       config.link_radius, net_rng);
  ChannelState channel = channel_gains(topo, config.noise);
  DppController controller(topo, control);

  Matrix Q = Matrix::Zero(topo.n, topo.commodity_count());
  const ArrivalSpec arrivals{config.lambda0};

  EpisodeResult result;
  EpisodeMetrics& metrics = result.metrics;
  metrics.queue_total.reserve(config.t_max);
  metrics.arrivals.reserve(config.t_max);
  metrics.delivered.reserve(config.t_max);
  metrics.penalty.reserve(config.t_max);

  double prev_total = 0.0;
  for (int t = 0; t < config.t_max; ++t) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > config.episode_time_budget_s)
      throw std::runtime_error("step " + std::to_string(t) + ": episode time budget exceeded");
    try {
      const DppStepResult decision = controller.step(Q, topo, channel);
      const CommodityTensor realized = realize_schedule(Q, decision.schedule);
      if (observer) observer(t, decision, realized);
      const Matrix A = sample_arrivals(arrivals, topo, arrival_rng);
      const StepOutcome outcome = step_queues(Q, realized, A, topo);

      const double total = outcome.queues.sum();
      const double arrived = A.sum();
      if (std::abs(total - prev_total - arrived + outcome.delivered) > 1e-9)
        throw std::runtime_error("conservation violated");

      metrics.queue_total.push_back(total);
      metrics.arrivals.push_back(arrived);
      metrics.delivered.push_back(outcome.delivered);
      metrics.penalty.push_back(decision.penalty_value);

      Q = outcome.queues;
      prev_total = total;

      if (config.sigma > 0.0) {
        topo = perturb_positions(topo, config.sigma, mobility_rng);
        channel = channel_gains(topo, config.noise);
        controller.on_topology_change(topo);
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("step " + std::to_string(t) + ": " + e.what());
    }
  }

  result.queue_ratio = queue_ratio(metrics);
  double penalty_sum = 0.0;
  for (double p : metrics.penalty) penalty_sum += p;
  result.mean_penalty = penalty_sum / config.t_max;
  result.slope = stability_slope(metrics, std::max(2, config.t_max / 2));
  result.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

struct Cell {
  std::string backlog;
  std::string scheduler;
  double lambda0 = 0.0;
  double V = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
};

std::string cell_id(const ScenarioConfig& cfg, const Cell& cell) {
  return cell.backlog + "-" + cell.scheduler + "-" + cfg.allocator + "-lam" +
         format_double(cell.lambda0) + "-V" + format_double(cell.V) + "-eta" +
         format_double(cell.eta) + "-sig" + format_double(cell.sigma);
}

SweepResult run_cells(const ScenarioConfig& config, const std::vector<Cell>& cells,
                      int parallelism) {
  struct Task {
    int cell_index;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci)
    for (std::uint64_t seed : config.seeds) tasks.push_back({ci, seed});

  std::vector<SeedRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) break;
      const Task& task = tasks[k];
      const Cell& cell = cells[static_cast<std::size_t>(task.cell_index)];
      SeedRow& row = rows[k];
      row.scenario_id = cell_id(config, cell);
      row.backlog = cell.backlog;
      row.scheduler = cell.scheduler;
      row.allocator = config.allocator;
      row.lambda0 = cell.lambda0;
      row.V = cell.V;
      row.eta = cell.eta;
      row.sigma = cell.sigma;
      row.seed = task.seed;
      try {
        ScenarioConfig episode_cfg = config;
        episode_cfg.lambda0 = cell.lambda0;
        episode_cfg.sigma = cell.sigma;
        const ControlConfig control =
            config.control(cell.backlog, cell.scheduler, cell.eta, cell.V);
        const EpisodeResult res = run_episode(episode_cfg, task.seed, control);
        row.queue_ratio = res.queue_ratio;
        row.mean_penalty = res.mean_penalty;
        row.slope = res.slope;
        row.runtime_s = res.runtime_s;
      } catch (const std::exception& e) {
        row.status = e.what();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(parallelism, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  result.rows = std::move(rows);

  // Deterministic reduction in task order, one aggregate per cell.
  for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
    const Cell& cell = cells[static_cast<std::size_t>(ci)];
    std::vector<const SeedRow*> ok;
    for (const SeedRow& row : result.rows)
      if (row.scenario_id == cell_id(config, cell) && row.status == "ok") ok.push_back(&row);
    AggregateRow agg;
    agg.scenario_id = cell_id(config, cell);
    agg.backlog = cell.backlog;
    agg.scheduler = cell.scheduler;
    agg.allocator = config.allocator;
    agg.lambda0 = cell.lambda0;
    agg.V = cell.V;
    agg.eta = cell.eta;
    agg.sigma = cell.sigma;
    agg.n_seeds = static_cast<int>(ok.size());
    if (!ok.empty()) {
      double qr = 0.0, pen = 0.0, slope = 0.0;
      for (const SeedRow* row : ok) {
        qr += row->queue_ratio;
        pen += row->mean_penalty;
        slope += row->slope;
      }
      const double n = static_cast<double>(ok.size());
      agg.queue_ratio_mean = qr / n;
      agg.penalty_mean = pen / n;
      agg.slope_mean = slope / n;
      if (ok.size() > 1) {
        double qvar = 0.0, pvar = 0.0;
        for (const SeedRow* row : ok) {
          qvar += (row->queue_ratio - agg.queue_ratio_mean) * (row->queue_ratio - agg.queue_ratio_mean);
          pvar += (row->mean_penalty - agg.penalty_mean) * (row->mean_penalty - agg.penalty_mean);
        }
        agg.queue_ratio_stderr = std::sqrt(qvar / (n - 1.0)) / std::sqrt(n);
        agg.penalty_stderr = std::sqrt(pvar / (n - 1.0)) / std::sqrt(n);
      }
    }
    result.aggregates.push_back(std::move(agg));
  }
  return result;
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& config, int parallelism) {
  std::vector<Cell> cells;
  for (const std::string& backlog : config.backlogs)
    for (const std::string& scheduler : config.schedulers)
      for (double lambda0 : config.lambda_grid)
        for (double V : config.v_grid)
          for (double eta : config.eta_grid)
            cells.push_back({backlog, scheduler, lambda0, V, eta, config.sigma});
  return run_cells(config, cells, parallelism);
}

SweepResult ood_experiment(const ScenarioConfig& config, double train_rate,
                           const std::vector<double>& test_rates, int parallelism) {
  if (test_rates.empty()) throw std::invalid_argument("ood_experiment: empty test grid");
  // Classical controllers carry no trained state; the train rate only pins
  // rate-independent tuning, so evaluation reuses the configured control
  // parameters across all test rates.
  (void)train_rate;
  std::vector<Cell> cells;
  for (const std::string& backlog : config.backlogs)
    for (const std::string& scheduler : config.schedulers)
      for (double rate : test_rates)
        for (double V : config.v_grid)
          for (double eta : config.eta_grid)
            cells.push_back({backlog, scheduler, rate, V, eta, config.sigma});
  return run_cells(config, cells, parallelism);
}

SweepResult mobility_experiment(const ScenarioConfig& config,
                                const std::vector<double>& sigma_grid, int parallelism) {
  if (sigma_grid.empty()) throw std::invalid_argument("mobility_experiment: empty sigma grid");
  std::vector<Cell> cells;
  for (const std::string& backlog : config.backlogs)
    for (const std::string& scheduler : config.schedulers)
      for (double lambda0 : config.lambda_grid)
        for (double V : config.v_grid)
          for (double eta : config.eta_grid)
            for (double sigma : sigma_grid)
              cells.push_back({backlog, scheduler, lambda0, V, eta, sigma});
  return run_cells(config, cells, parallelism);
}

namespace {
constexpr const char* kAggregateHeader =
    "scenario_id,backlog,scheduler,allocator,lambda0,V,eta,sigma,queue_ratio_mean,"
    "queue_ratio_stderr,penalty_mean,penalty_stderr,slope_mean,n_seeds";
}

std::string aggregate_csv(const SweepResult& result) {
  std::string out = kAggregateHeader;
  out += "\n";
  for (const AggregateRow& a : result.aggregates) {
    out += a.scenario_id + "," + a.backlog + "," + a.scheduler + "," + a.allocator + "," +
           format_double(a.lambda0) + "," + format_double(a.V) + "," + format_double(a.eta) +
           "," + format_double(a.sigma) + "," + format_double(a.queue_ratio_mean) + "," +
           format_double(a.queue_ratio_stderr) + "," + format_double(a.penalty_mean) + "," +
           format_double(a.penalty_stderr) + "," + format_double(a.slope_mean) + "," +
           std::to_string(a.n_seeds) + "\n";
  }
  return out;
}

std::string seed_csv(const SweepResult& result) {
  // Wall-clock runtimes stay in the in-memory rows only; emitted files must
  // be byte-identical across reruns.
  std::string out = "scenario_id,seed,lambda0,V,eta,sigma,queue_ratio,mean_penalty,slope,status\n";
  for (const SeedRow& r : result.rows) {
    out += r.scenario_id + "," + std::to_string(r.seed) + "," + format_double(r.lambda0) + "," +
           format_double(r.V) + "," + format_double(r.eta) + "," + format_double(r.sigma) + "," +
           format_double(r.queue_ratio) + "," + format_double(r.mean_penalty) + "," +
           format_double(r.slope) + "," + r.status + "\n";
  }
  return out;
}

std::vector<AggregateRow> parse_aggregate_csv(const std::string& text) {
  std::vector<AggregateRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      if (trim(line) != kAggregateHeader)
        throw std::invalid_argument("unexpected aggregate CSV header");
      first = false;
      continue;
    }
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 14) throw std::invalid_argument("malformed aggregate CSV row");
    AggregateRow a;
    a.scenario_id = f[0];
    a.backlog = f[1];
    a.scheduler = f[2];
    a.allocator = f[3];
    a.lambda0 = std::stod(f[4]);
    a.V = std::stod(f[5]);
    a.eta = std::stod(f[6]);
    a.sigma = std::stod(f[7]);
    a.queue_ratio_mean = std::stod(f[8]);
    a.queue_ratio_stderr = std::stod(f[9]);
    a.penalty_mean = std::stod(f[10]);
    a.penalty_stderr = std::stod(f[11]);
    a.slope_mean = std::stod(f[12]);
    a.n_seeds = std::stoi(f[13]);
    rows.push_back(std::move(a));
  }
  return rows;
}

namespace {

struct Series {
  std::string name;
  std::vector<double> x, y, err;
};

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
  const double width = 640, height = 420;
  const double ml = 70, mr = 160, mt = 40, mb = 50;
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (const Series& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      x_lo = std::min(x_lo, s.x[k]);
      x_hi = std::max(x_hi, s.x[k]);
      y_lo = std::min(y_lo, s.y[k] - s.err[k]);
      y_hi = std::max(y_hi, s.y[k] + s.err[k]);
    }
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";
  for (double frac : {0.0, 0.5, 1.0}) {
    const double xv = x_lo + frac * (x_hi - x_lo);
    const double yv = y_lo + frac * (y_hi - y_lo);
    svg << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << format_double(xv) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << format_double(yv) << "</text>\n";
  }
  int color = 0;
  for (const Series& s : series) {
    const char* stroke = palette[color % 8];
    std::ostringstream points;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      points << px(s.x[k]) << "," << py(s.y[k]) << " ";
      svg << "<line x1=\"" << px(s.x[k]) << "\" y1=\"" << py(s.y[k] - s.err[k]) << "\" x2=\""
          << px(s.x[k]) << "\" y2=\"" << py(s.y[k] + s.err[k]) << "\" stroke=\"" << stroke
          << "\"/>\n";
      svg << "<circle cx=\"" << px(s.x[k]) << "\" cy=\"" << py(s.y[k]) << "\" r=\"2.5\" fill=\""
          << stroke << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"" << points.str()
        << "\"/>\n";
    svg << "<text x=\"" << width - mr + 10 << "\" y=\"" << mt + 14 * color
        << "\" font-size=\"10\" fill=\"" << stroke << "\">" << s.name << "</text>\n";
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << content;
  written.push_back(path);
}

}  // namespace

std::vector<std::string> emit_outputs(const SweepResult& result, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());

  std::vector<std::string> written;
  write_file(out_dir + "/sweep.csv", aggregate_csv(result), written);

  write_file(out_dir + "/seeds.csv", seed_csv(result), written);

  if (result.aggregates.empty()) return written;

  // Charts sweep the first axis that actually varies.
  auto distinct = [&](auto getter) {
    std::set<double> vals;
    for (const AggregateRow& a : result.aggregates) vals.insert(getter(a));
    return vals.size();
  };
  std::string x_name = "lambda0";
  auto x_of = [](const AggregateRow& a) { return a.lambda0; };
  std::function<double(const AggregateRow&)> getter = x_of;
  if (distinct([](const AggregateRow& a) { return a.lambda0; }) > 1) {
    x_name = "lambda0";
    getter = [](const AggregateRow& a) { return a.lambda0; };
  } else if (distinct([](const AggregateRow& a) { return a.V; }) > 1) {
    x_name = "V";
    getter = [](const AggregateRow& a) { return a.V; };
  } else if (distinct([](const AggregateRow& a) { return a.eta; }) > 1) {
    x_name = "eta";
    getter = [](const AggregateRow& a) { return a.eta; };
  } else if (distinct([](const AggregateRow& a) { return a.sigma; }) > 1) {
    x_name = "sigma";
    getter = [](const AggregateRow& a) { return a.sigma; };
  }

  auto series_key = [&](const AggregateRow& a) {
    std::string key = a.backlog + "/" + a.scheduler;
    if (x_name != "V") key += "/V" + format_double(a.V);
    if (x_name != "eta") key += "/eta" + format_double(a.eta);
    if (x_name != "sigma" && a.sigma != 0.0) key += "/sig" + format_double(a.sigma);
    return key;
  };

  auto build_series = [&](auto value, auto err) {
    std::map<std::string, Series> by_key;
    std::vector<std::string> order;
    for (const AggregateRow& a : result.aggregates) {
      const std::string key = series_key(a);
      if (!by_key.count(key)) {
        by_key[key].name = key;
        order.push_back(key);
      }
      by_key[key].x.push_back(getter(a));
      by_key[key].y.push_back(value(a));
      by_key[key].err.push_back(err(a));
    }
    std::vector<Series> out;
    for (const std::string& key : order) out.push_back(by_key[key]);
    return out;
  };

  const auto qr_series = build_series([](const AggregateRow& a) { return a.queue_ratio_mean; },
                                      [](const AggregateRow& a) { return a.queue_ratio_stderr; });
  write_file(out_dir + "/queue_ratio.svg",
             svg_line_chart("Queue ratio", x_name, "queue ratio", qr_series), written);
  const auto pen_series = build_series([](const AggregateRow& a) { return a.penalty_mean; },
                                       [](const AggregateRow& a) { return a.penalty_stderr; });
  write_file(out_dir + "/penalty.svg",
             svg_line_chart("Average penalty", x_name, "penalty", pen_series), written);
  return written;
}

}  // namespace dppsim
