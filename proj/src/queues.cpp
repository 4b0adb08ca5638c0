#include "dppsim/queues.hpp"

#include <stdexcept>

namespace dppsim {

namespace {
constexpr double kNegativeQueueTol = 1e-9;
}

Matrix sample_arrivals(const ArrivalSpec& spec, const Topology& topology, Rng& rng) {
  if (spec.rate < 0.0) throw std::invalid_argument("arrival rate must be non-negative");
  const int n = topology.n;
  const int m = topology.commodity_count();
  Matrix A = Matrix::Zero(n, m);
  if (spec.rate == 0.0) return A;
  std::poisson_distribution<long> poisson(spec.rate);
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < n; ++i) {
      if (i == topology.commodities[c]) continue;
      A(i, c) = static_cast<double>(poisson(rng));
    }
  }
  return A;
}

CommodityTensor realize_schedule(const Matrix& Q, const CommodityTensor& mu) {
  CommodityTensor out = mu;
  const int n = static_cast<int>(Q.rows());
  for (int c = 0; c < static_cast<int>(out.size()); ++c) {
    for (int i = 0; i < n; ++i) {
      const double requested = out[c].row(i).sum();
      const double available = Q(i, c);
      if (requested <= available) continue;
      const double scale = available > 0.0 ? available / requested : 0.0;
      out[c].row(i) *= scale;
    }
  }
  return out;
}

StepOutcome step_queues(const Matrix& Q, const CommodityTensor& mu_realized,
                        const Matrix& A, const Topology& topology) {
  const int n = topology.n;
  const int m = topology.commodity_count();
  StepOutcome result;
  result.queues = Q;
  for (int c = 0; c < m; ++c) {
    const int dest = topology.commodities[c];
    const Vector inflow = mu_realized[c].colwise().sum().transpose();
    const Vector outflow = mu_realized[c].rowwise().sum();
    for (int i = 0; i < n; ++i) {
      if (i == dest) {
        result.delivered += inflow(i);
        result.queues(i, c) = 0.0;
        continue;
      }
      double next = Q(i, c) + inflow(i) - outflow(i) + A(i, c);
      if (next < -kNegativeQueueTol)
        throw std::runtime_error("step_queues: schedule drained more data than available");
      result.queues(i, c) = std::max(next, 0.0);
    }
  }
  return result;
}

double queue_ratio(const EpisodeMetrics& metrics) {
  double arrived = 0.0;
  for (double a : metrics.arrivals) arrived += a;
  if (arrived <= 0.0) return 0.0;
  return metrics.queue_total.back() / arrived;
}

double stability_slope(const EpisodeMetrics& metrics, int window) {
  const int t_max = metrics.horizon();
  if (window < 2) throw std::invalid_argument("stability_slope: window must be >= 2");
  if (window > t_max) throw std::invalid_argument("stability_slope: window exceeds horizon");
  const int start = t_max - window;
  double mean_t = 0.0, mean_q = 0.0;
  for (int k = 0; k < window; ++k) {
    mean_t += k;
    mean_q += metrics.queue_total[start + k];
  }
  mean_t /= window;
  mean_q /= window;
  double cov = 0.0, var = 0.0;
  for (int k = 0; k < window; ++k) {
    cov += (k - mean_t) * (metrics.queue_total[start + k] - mean_q);
    var += (k - mean_t) * (k - mean_t);
  }
  return cov / var;
}

}  // namespace dppsim
