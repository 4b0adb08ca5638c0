#include "dppsim/scheduler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dppsim {

SchedulerKind scheduler_kind_from_name(const std::string& name) {
  if (name == "maxweight" || name == "max_weight") return SchedulerKind::max_weight;
  if (name == "softmax") return SchedulerKind::softmax;
  if (name == "sinkhorn") return SchedulerKind::sinkhorn;
  throw std::invalid_argument("unknown scheduler kind: " + name);
}

std::string scheduler_kind_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::max_weight: return "maxweight";
    case SchedulerKind::softmax: return "softmax";
    case SchedulerKind::sinkhorn: return "sinkhorn";
  }
  return "maxweight";
}

CommodityTensor compute_weights(const Matrix& U, const Topology& topology) {
  const int m = static_cast<int>(U.cols());
  CommodityTensor W = zero_tensor(topology.n, m);
  for (int c = 0; c < m; ++c)
    for (const auto& [i, j] : topology.links) W[c](i, j) = U(i, c) - U(j, c);
  return W;
}

namespace {
// Best commodity on link (i,j); ties break toward the lowest index.
int argmax_commodity(const CommodityTensor& W, int i, int j) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(W.size()); ++c)
    if (W[c](i, j) > W[best](i, j)) best = c;
  return best;
}
}  // namespace

CommodityTensor max_weight_schedule(const CommodityTensor& W, const Matrix& kappa,
                                    const Topology& topology) {
  CommodityTensor mu = zero_tensor(topology.n, static_cast<int>(W.size()));
  for (const auto& [i, j] : topology.links) {
    const int best = argmax_commodity(W, i, j);
    if (W[best](i, j) > 0.0) mu[best](i, j) = kappa(i, j);
  }
  return mu;
}

CommodityTensor softmax_max_weight(const CommodityTensor& W, const Matrix& Q,
                                   const Matrix& kappa, const Topology& topology) {
  const int m = static_cast<int>(W.size());
  CommodityTensor mu = zero_tensor(topology.n, m);
  for (int i = 0; i < topology.n; ++i) {
    const auto& nbrs = topology.out_neighbors[i];
    if (nbrs.empty()) continue;
    for (int c = 0; c < m; ++c) {
      // Softmax over this node's out-links for commodity c.
      double peak = -std::numeric_limits<double>::infinity();
      for (int j : nbrs) peak = std::max(peak, W[c](i, j));
      double denom = 0.0;
      for (int j : nbrs) denom += std::exp(W[c](i, j) - peak);
      for (int j : nbrs) {
        if (argmax_commodity(W, i, j) != c || W[c](i, j) <= 0.0) continue;
        const double share = std::exp(W[c](i, j) - peak) / denom;
        mu[c](i, j) = std::min(share * Q(i, c), kappa(i, j));
      }
    }
  }
  return mu;
}

CommodityTensor ot_schedule(const CommodityTensor& W, const Matrix& Q, const Matrix& kappa,
                            const Topology& topology, const SinkhornConfig& cfg,
                            OtScheduleReport* report) {
  const int m = static_cast<int>(W.size());
  CommodityTensor mu = zero_tensor(topology.n, m);

  std::vector<SinkhornProblem> problems;
  std::vector<int> node_of_block;
  std::vector<Matrix> slices;
  for (int i = 0; i < topology.n; ++i) {
    const auto& nbrs = topology.out_neighbors[i];
    if (nbrs.empty()) continue;
    Vector kappa_i(static_cast<Eigen::Index>(nbrs.size()));
    for (std::size_t r = 0; r < nbrs.size(); ++r)
      kappa_i(static_cast<Eigen::Index>(r)) = kappa(i, nbrs[r]);
    const Vector Q_i = Q.row(i).transpose();
    if (Q_i.sum() <= 0.0 || kappa_i.maxCoeff() <= 0.0) continue;

    Matrix W_i(static_cast<Eigen::Index>(nbrs.size()), m);
    for (std::size_t r = 0; r < nbrs.size(); ++r)
      for (int c = 0; c < m; ++c) W_i(static_cast<Eigen::Index>(r), c) = W[c](i, nbrs[r]);

    SinkhornProblem p = build_ot_problem(W_i, Q_i, kappa_i, cfg.eta);
    if (p.empty()) continue;
    problems.push_back(std::move(p));
    node_of_block.push_back(i);
    slices.push_back(std::move(W_i));
  }
  if (problems.empty()) return mu;

  const SinkhornProblem batch = block_diag_batch(problems);
  const SinkhornResult result = sparse_sinkhorn(batch, cfg);
  if (report) {
    report->iterations = result.iterations;
    report->violation = result.violation;
    report->converged = result.converged;
  }

  for (std::size_t block = 0; block < node_of_block.size(); ++block) {
    const int i = node_of_block[block];
    const Matrix mu_i =
        threshold_schedule(result.plan, batch, static_cast<int>(block), slices[block]);
    const auto& nbrs = topology.out_neighbors[i];
    for (std::size_t r = 0; r < nbrs.size(); ++r)
      for (int c = 0; c < m; ++c) mu[c](i, nbrs[r]) = mu_i(static_cast<Eigen::Index>(r), c);
  }
  return mu;
}

DppStepResult dpp_step(const Matrix& Q, const Topology& topology,
                       const ChannelState& channel, const ControlConfig& config,
                       const Matrix& distances, const Matrix& qsp_prev) {
  DppStepResult result;

  switch (config.backlog) {
    case BacklogKind::bp:
      result.backlog = bp_backlog(Q, topology);
      break;
    case BacklogKind::sp:
      result.backlog = sp_backlog(Q, distances, config.sp_weight, topology);
      break;
    case BacklogKind::qsp:
      result.backlog = qsp_value_iteration_step(qsp_prev, Q, topology);
      break;
    case BacklogKind::qsp_clamped:
      result.backlog = clamp_backlog(qsp_value_iteration_step(qsp_prev, Q, topology), Q,
                                     config.bound, topology);
      break;
  }

  result.weights = compute_weights(result.backlog, topology);

  switch (config.allocator.kind) {
    case AllocatorKind::uniform:
      result.power = uniform_power(topology, config.P_max);
      break;
    case AllocatorKind::pressure:
      result.power = pressure_proportional_power(result.weights, topology, config.P_max);
      break;
    case AllocatorKind::gradient:
      result.power = gradient_power(result.weights, topology, channel, config.allocator,
                                    config.P_max, config.kappa_max,
                                    uniform_power(topology, config.P_max));
      break;
  }

  result.kappa = link_capacity(result.power, channel, topology, config.kappa_max);

  switch (config.scheduler) {
    case SchedulerKind::max_weight:
      result.schedule = max_weight_schedule(result.weights, result.kappa, topology);
      break;
    case SchedulerKind::softmax:
      result.schedule = softmax_max_weight(result.weights, Q, result.kappa, topology);
      break;
    case SchedulerKind::sinkhorn: {
      OtScheduleReport report;
      result.schedule =
          ot_schedule(result.weights, Q, result.kappa, topology, config.sinkhorn, &report);
      result.sinkhorn_iterations = report.iterations;
      result.sinkhorn_violation = report.violation;
      result.sinkhorn_converged = report.converged;
      break;
    }
  }

  result.penalty_value = penalty(result.power, result.kappa, config.penalty, topology);
  return result;
}

DppController::DppController(const Topology& topology, ControlConfig config)
    : config_(std::move(config)) {
  on_topology_change(topology);
  qsp_prev_ = Matrix::Zero(topology.n, topology.commodity_count());
}

void DppController::on_topology_change(const Topology& topology) {
  distances_ = relax_to_fixed_point(init_distances(topology), topology);
}

DppStepResult DppController::step(const Matrix& Q, const Topology& topology,
                                  const ChannelState& channel) {
  distances_ = distance_relax_step(distances_, topology);
  DppStepResult result = dpp_step(Q, topology, channel, config_, distances_, qsp_prev_);
  if (config_.backlog == BacklogKind::qsp || config_.backlog == BacklogKind::qsp_clamped)
    qsp_prev_ = result.backlog;
  return result;
}

}  // namespace dppsim
