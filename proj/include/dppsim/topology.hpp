#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dppsim/types.hpp"

namespace dppsim {

using Rng = std::mt19937_64;

// Random geometric network on the unit square. Links are distance-based and
// therefore symmetric as a set; commodities are the sink nodes and index the
// columns of every (node, commodity) matrix in the library.
struct Topology {
  int n = 0;
  Eigen::Matrix<double, Eigen::Dynamic, 2> positions;  // one row per node
  std::vector<std::pair<int, int>> links;              // ordered pairs, both directions
  std::vector<int> commodities;                        // sorted node ids
  std::vector<std::vector<int>> out_neighbors;
  std::vector<std::vector<int>> in_neighbors;
  double radius = 0.0;  // connection threshold used to derive the links

  int commodity_count() const { return static_cast<int>(commodities.size()); }
  bool has_link(int i, int j) const { return link_index_(i, j) >= 0; }
  double distance(int i, int j) const {
    return (positions.row(i) - positions.row(j)).norm();
  }

  // Rebuilds links, neighbor lists and the lookup table from positions/radius.
  void rebuild_links();

 private:
  Eigen::MatrixXi link_index_;
};

// Samples node count uniformly in [n_min, n_max], positions uniformly in
// [0,1]^2, links every unordered pair with 0 < dist <= d, and marks each node
// a commodity independently with probability commodity_fraction (redrawn
// until at least one commodity exists). Disconnected components are allowed.
Topology generate_geometric_network(int n_min, int n_max, double commodity_fraction,
                                    double d, Rng& rng);

// Applies x <- min{(x + nu)^+, 1} with nu ~ Normal(0, sigma^2) i.i.d. per
// coordinate, then rebuilds the links from the perturbed positions. Channel
// gains must be recomputed by the caller.
Topology perturb_positions(const Topology& topology, double sigma, Rng& rng);

namespace detail {
inline double clamp_unit(double x) { return std::min(std::max(x, 0.0), 1.0); }
}  // namespace detail

}  // namespace dppsim
