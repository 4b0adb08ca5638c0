#include "dppsim/power_alloc.hpp"

#include <cmath>
#include <stdexcept>

namespace dppsim {

AllocatorKind allocator_kind_from_name(const std::string& name) {
  if (name == "uniform") return AllocatorKind::uniform;
  if (name == "pressure") return AllocatorKind::pressure;
  if (name == "gradient") return AllocatorKind::gradient;
  throw std::invalid_argument("unknown allocator kind: " + name);
}

std::string allocator_kind_name(AllocatorKind kind) {
  switch (kind) {
    case AllocatorKind::uniform: return "uniform";
    case AllocatorKind::pressure: return "pressure";
    case AllocatorKind::gradient: return "gradient";
  }
  return "uniform";
}

namespace {
Matrix link_pressures(const CommodityTensor& W, const Topology& topology) {
  Matrix pressure = Matrix::Zero(topology.n, topology.n);
  for (const auto& [i, j] : topology.links) {
    double best = 0.0;
    for (const Matrix& layer : W) best = std::max(best, layer(i, j));
    pressure(i, j) = best;  // already the positive part
  }
  return pressure;
}
}  // namespace

Matrix uniform_power(const Topology& topology, double P_max) {
  Matrix P = Matrix::Zero(topology.n, topology.n);
  for (int i = 0; i < topology.n; ++i) {
    const auto& nbrs = topology.out_neighbors[i];
    if (nbrs.empty()) continue;
    const double share = P_max / static_cast<double>(nbrs.size());
    for (int j : nbrs) P(i, j) = share;
  }
  return P;
}

Matrix pressure_proportional_power(const CommodityTensor& W, const Topology& topology,
                                   double P_max) {
  const Matrix pressure = link_pressures(W, topology);
  Matrix P = Matrix::Zero(topology.n, topology.n);
  for (int i = 0; i < topology.n; ++i) {
    const double total = pressure.row(i).sum();
    if (total <= 0.0) continue;
    for (int j : topology.out_neighbors[i]) P(i, j) = P_max * pressure(i, j) / total;
  }
  return P;
}

double power_surrogate(const Matrix& P, const CommodityTensor& W, const Topology& topology,
                       const ChannelState& channel, const AllocatorSpec& spec,
                       double kappa_max) {
  const Matrix kappa = link_capacity(P, channel, topology, kappa_max);
  const Matrix pressure = link_pressures(W, topology);
  double value = (pressure.array() * kappa.array()).sum();
  value -= spec.penalty_weight * penalty(P, kappa, spec.penalty, topology);
  return value;
}

Matrix gradient_power(const CommodityTensor& W, const Topology& topology,
                      const ChannelState& channel, const AllocatorSpec& spec,
                      double P_max, double kappa_max, const Matrix& P_init) {
  if (spec.steps < 1) throw std::invalid_argument("gradient_power: steps must be >= 1");
  const double step = spec.step_size > 0.0 ? spec.step_size : 0.1 * P_max;
  const double h = 1e-5 * std::max(P_max, 1.0);

  Matrix P = project_power(P_init, P_max);
  Matrix best = P;
  double best_value = power_surrogate(P, W, topology, channel, spec, kappa_max);
  if (!std::isfinite(best_value))
    throw std::runtime_error("gradient_power: non-finite surrogate");

  for (int it = 0; it < spec.steps; ++it) {
    Matrix grad = Matrix::Zero(topology.n, topology.n);
    for (const auto& [i, j] : topology.links) {
      Matrix probe = P;
      const double lo = std::max(P(i, j) - h, 0.0);
      const double hi = P(i, j) + h;
      probe(i, j) = hi;
      const double f_hi = power_surrogate(probe, W, topology, channel, spec, kappa_max);
      probe(i, j) = lo;
      const double f_lo = power_surrogate(probe, W, topology, channel, spec, kappa_max);
      grad(i, j) = (f_hi - f_lo) / (hi - lo);
    }
    P = project_power(P + step * grad, P_max);
    const double value = power_surrogate(P, W, topology, channel, spec, kappa_max);
    if (!std::isfinite(value)) throw std::runtime_error("gradient_power: non-finite surrogate");
    if (value > best_value) {
      best_value = value;
      best = P;
    }
  }
  return best;
}

}  // namespace dppsim
