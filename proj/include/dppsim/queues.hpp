#pragma once

#include "dppsim/topology.hpp"
#include "dppsim/types.hpp"

namespace dppsim {

// Queues are n x m with column c holding the fluid backlog destined for
// commodity node topology.commodities[c]. The entry at the destination node
// itself is identically zero: data leaves the network on arrival.

struct ArrivalSpec {
  double rate = 0.0;  // common Poisson rate per (node, commodity) pair
};

struct StepOutcome {
  Matrix queues;
  double delivered = 0.0;
};

// Per-step episode traces; entry t holds the value after step t.
struct EpisodeMetrics {
  std::vector<double> queue_total;  // ||Q(t+1)||_1
  std::vector<double> arrivals;     // ||A(t)||_1
  std::vector<double> delivered;
  std::vector<double> penalty;

  int horizon() const { return static_cast<int>(queue_total.size()); }
};

// A(i,c) ~ Poisson(rate) i.i.d. for nodes other than the destination.
Matrix sample_arrivals(const ArrivalSpec& spec, const Topology& topology, Rng& rng);

// Scales each (node, commodity) slice of the requested schedule so that the
// total amount sent never exceeds the data available in the queue.
CommodityTensor realize_schedule(const Matrix& Q, const CommodityTensor& mu);

// Queue dynamics: Q'(i,c) = Q(i,c) + inflow - outflow + A(i,c) away from the
// destination; the destination row stays zero and its inflow counts as
// delivered. Throws if a queue would go negative beyond 1e-9.
StepOutcome step_queues(const Matrix& Q, const CommodityTensor& mu_realized,
                        const Matrix& A, const Topology& topology);

// Fraction of all arrived data still queued at the horizon (0 when nothing
// arrived).
double queue_ratio(const EpisodeMetrics& metrics);

// Least-squares slope of the queue totals over the trailing window.
double stability_slope(const EpisodeMetrics& metrics, int window);

}  // namespace dppsim
