#pragma once

#include <string>

#include "dppsim/backlog.hpp"
#include "dppsim/channel.hpp"
#include "dppsim/power_alloc.hpp"
#include "dppsim/sinkhorn.hpp"
#include "dppsim/topology.hpp"
#include "dppsim/types.hpp"

namespace dppsim {

enum class SchedulerKind { max_weight, softmax, sinkhorn };

SchedulerKind scheduler_kind_from_name(const std::string& name);
std::string scheduler_kind_name(SchedulerKind kind);

// W(i,j,c) = U(i,c) - U(j,c) on links, zero elsewhere. Antisymmetric on the
// symmetric link set.
CommodityTensor compute_weights(const Matrix& U, const Topology& topology);

// Assigns each link's full capacity to its best commodity when that best
// weight is positive; ties break toward the lowest commodity index. May
// request more data than the queues hold.
CommodityTensor max_weight_schedule(const CommodityTensor& W, const Matrix& kappa,
                                    const Topology& topology);

// Queue-feasible variant: the best commodity on a link receives
// min(softmax over out-links of its weights * queue, capacity), and nothing
// moves on links whose best weight is non-positive.
CommodityTensor softmax_max_weight(const CommodityTensor& W, const Matrix& Q,
                                   const Matrix& kappa, const Topology& topology);

struct OtScheduleReport {
  int iterations = 0;
  double violation = 0.0;
  bool converged = true;
};

// Optimal-transport schedule: one slack-augmented problem per node with data
// and capacity, batched block-diagonally, solved by sparse log-domain
// Sinkhorn and thresholded on positive weights. Nodes with nothing to send
// or no capacity are skipped.
CommodityTensor ot_schedule(const CommodityTensor& W, const Matrix& Q, const Matrix& kappa,
                            const Topology& topology, const SinkhornConfig& cfg,
                            OtScheduleReport* report = nullptr);

// Full per-slot control decision.
struct ControlConfig {
  BacklogKind backlog = BacklogKind::bp;
  double sp_weight = 1.0;
  double bound = 10.0;  // B for the clamped backlog
  AllocatorSpec allocator;
  SchedulerKind scheduler = SchedulerKind::max_weight;
  SinkhornConfig sinkhorn;   // sinkhorn.eta is the regularisation used
  PenaltySpec penalty;
  double P_max = 1.0;
  double kappa_max = 20.0;
};

struct DppStepResult {
  Matrix backlog;          // U
  CommodityTensor weights; // W
  Matrix power;            // P
  Matrix kappa;
  CommodityTensor schedule;  // mu, before queue clamping
  double penalty_value = 0.0;
  int sinkhorn_iterations = 0;
  double sinkhorn_violation = 0.0;
  bool sinkhorn_converged = true;
};

// Owns the controller state that persists across slots: the relaxed distance
// matrix for the shortest-path backlog and the previous value-iteration
// sweep for the queue-biased one. Distances are relaxed to their fixed point
// on construction and after every topology change, then refreshed by one
// relaxation per slot.
class DppController {
 public:
  DppController(const Topology& topology, ControlConfig config);

  void on_topology_change(const Topology& topology);

  DppStepResult step(const Matrix& Q, const Topology& topology,
                     const ChannelState& channel);

  const ControlConfig& config() const { return config_; }

 private:
  ControlConfig config_;
  Matrix distances_;
  Matrix qsp_prev_;
};

// One drift-plus-penalty slot: backlog, weights, power, capacities, schedule
// and penalty, with all intermediates reported. Stateless entry point used
// by the controller.
DppStepResult dpp_step(const Matrix& Q, const Topology& topology,
                       const ChannelState& channel, const ControlConfig& config,
                       const Matrix& distances, const Matrix& qsp_prev);

}  // namespace dppsim
