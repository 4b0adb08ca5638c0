#pragma once

#include <string>

#include "dppsim/channel.hpp"
#include "dppsim/topology.hpp"
#include "dppsim/types.hpp"

namespace dppsim {

// Classical transmit-power allocators. All of them map into the feasible set:
// non-negative, supported on links, row sums at most P_max.

enum class AllocatorKind { uniform, pressure, gradient };

AllocatorKind allocator_kind_from_name(const std::string& name);
std::string allocator_kind_name(AllocatorKind kind);

struct AllocatorSpec {
  AllocatorKind kind = AllocatorKind::uniform;
  int steps = 10;            // gradient only
  double step_size = 0.0;    // gradient only; <= 0 means 0.1 * P_max
  double penalty_weight = 0.0;  // V
  PenaltySpec penalty;
};

// Splits P_max equally over each node's out-links.
Matrix uniform_power(const Topology& topology, double P_max);

// P(i,j) proportional to the positive part of max_c W(i,j,c), scaled to
// P_max per node; rows with no positive pressure stay zero.
Matrix pressure_proportional_power(const CommodityTensor& W, const Topology& topology,
                                   double P_max);

// Projected gradient ascent on the surrogate
//   sum_links (max_c W)^+ * kappa(P) - V * penalty(P)
// with central finite-difference gradients; returns the best iterate seen.
Matrix gradient_power(const CommodityTensor& W, const Topology& topology,
                      const ChannelState& channel, const AllocatorSpec& spec,
                      double P_max, double kappa_max, const Matrix& P_init);

// Surrogate value used by gradient_power (exposed for its ascent tests).
double power_surrogate(const Matrix& P, const CommodityTensor& W, const Topology& topology,
                       const ChannelState& channel, const AllocatorSpec& spec,
                       double kappa_max);

}  // namespace dppsim
