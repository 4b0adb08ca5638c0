#pragma once

#include "dppsim/topology.hpp"
#include "dppsim/types.hpp"

namespace dppsim {

// Link channel gains h(i,j) = (1 + dist(i,j))^-3, defined exactly on the
// links of the topology (zero elsewhere), plus the background noise power.
struct ChannelState {
  Matrix gains;  // n x n, symmetric, zero off-links
  double noise = 0.01;
};

enum class PenaltyKind { none, consumption, efficiency };

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::none;
  double static_power = 0.1;  // P0, used only by the efficiency penalty
};

PenaltyKind penalty_kind_from_name(const std::string& name);
std::string penalty_kind_name(PenaltyKind kind);

// (1 + r)^-3 pathloss; equals 1 at zero distance.
double pathloss_gain(double distance);

ChannelState channel_gains(const Topology& topology, double noise);

// Scales every row whose sum exceeds P_max down to P_max; clips negative
// entries to zero first. Feasible rows are returned unchanged.
Matrix project_power(const Matrix& P_raw, double P_max);

// SINR capacity kappa(i,j) = log2(1 + h_ij P_ij / (I_j + N0)) with
// I_j = sum_{k in N_j} h_kj * (total transmit power of k) - h_ij P_ij,
// clamped at zero before adding the noise, and the result capped at
// kappa_max. Zero off-links.
Matrix link_capacity(const Matrix& P, const ChannelState& channel,
                     const Topology& topology, double kappa_max);

// none -> 0; consumption -> ||P||_1; efficiency -> -sum_links kappa/(P + P0).
double penalty(const Matrix& P, const Matrix& kappa, const PenaltySpec& spec,
               const Topology& topology);

}  // namespace dppsim
