#include "dppsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace dppsim {

PenaltyKind penalty_kind_from_name(const std::string& name) {
  if (name == "none") return PenaltyKind::none;
  if (name == "cons" || name == "consumption") return PenaltyKind::consumption;
  if (name == "eff" || name == "efficiency") return PenaltyKind::efficiency;
  throw std::invalid_argument("unknown penalty kind: " + name);
}

std::string penalty_kind_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::none: return "none";
    case PenaltyKind::consumption: return "cons";
    case PenaltyKind::efficiency: return "eff";
  }
  return "none";
}

double pathloss_gain(double distance) { return std::pow(1.0 + distance, -3.0); }

ChannelState channel_gains(const Topology& topology, double noise) {
  if (!(noise > 0.0)) throw std::invalid_argument("noise must be positive");
  ChannelState ch;
  ch.noise = noise;
  ch.gains = Matrix::Zero(topology.n, topology.n);
  for (const auto& [i, j] : topology.links)
    ch.gains(i, j) = pathloss_gain(topology.distance(i, j));
  return ch;
}

Matrix project_power(const Matrix& P_raw, double P_max) {
  Matrix P = P_raw.cwiseMax(0.0);
  for (int i = 0; i < P.rows(); ++i) {
    const double total = P.row(i).sum();
    if (total > P_max) P.row(i) *= P_max / total;
  }
  return P;
}

Matrix link_capacity(const Matrix& P, const ChannelState& channel,
                     const Topology& topology, double kappa_max) {
  if (!P.allFinite()) throw std::runtime_error("link_capacity: non-finite power entries");
  const int n = topology.n;
  const Vector tx_total = P.rowwise().sum();

  // Aggregate received power at each node from all of its neighbors.
  Vector rx_total = Vector::Zero(n);
  for (const auto& [k, j] : topology.links) rx_total(j) += channel.gains(k, j) * tx_total(k);

  Matrix kappa = Matrix::Zero(n, n);
  for (const auto& [i, j] : topology.links) {
    const double signal = channel.gains(i, j) * P(i, j);
    const double interference = std::max(rx_total(j) - signal, 0.0);
    const double sinr = signal / (interference + channel.noise);
    kappa(i, j) = std::min(std::log2(1.0 + sinr), kappa_max);
  }
  return kappa;
}

double penalty(const Matrix& P, const Matrix& kappa, const PenaltySpec& spec,
               const Topology& topology) {
  switch (spec.kind) {
    case PenaltyKind::none:
      return 0.0;
    case PenaltyKind::consumption:
      return P.sum();
    case PenaltyKind::efficiency: {
      if (!(spec.static_power > 0.0))
        throw std::invalid_argument("efficiency penalty requires static_power > 0");
      double total = 0.0;
      for (const auto& [i, j] : topology.links)
        total -= kappa(i, j) / (P(i, j) + spec.static_power);
      return total;
    }
  }
  return 0.0;
}

}  // namespace dppsim
