#include "dppsim/topology.hpp"

#include <stdexcept>

namespace dppsim {

void Topology::rebuild_links() {
  links.clear();
  out_neighbors.assign(n, {});
  in_neighbors.assign(n, {});
  link_index_ = Eigen::MatrixXi::Constant(n, n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double r = distance(i, j);
      if (r > 0.0 && r <= radius) {
        link_index_(i, j) = static_cast<int>(links.size());
        links.emplace_back(i, j);
        link_index_(j, i) = static_cast<int>(links.size());
        links.emplace_back(j, i);
        out_neighbors[i].push_back(j);
        out_neighbors[j].push_back(i);
        in_neighbors[i].push_back(j);
        in_neighbors[j].push_back(i);
      }
    }
  }
}

Topology generate_geometric_network(int n_min, int n_max, double commodity_fraction,
                                    double d, Rng& rng) {
  if (!(commodity_fraction > 0.0 && commodity_fraction < 1.0))
    throw std::invalid_argument("commodity_fraction must lie in (0, 1)");
  if (!(d > 0.0)) throw std::invalid_argument("connection threshold d must be positive");
  if (n_min < 2) throw std::invalid_argument("n_min must be at least 2");
  if (n_max < n_min) throw std::invalid_argument("n_max must be >= n_min");

  Topology topo;
  std::uniform_int_distribution<int> node_count(n_min, n_max);
  topo.n = node_count(rng);
  topo.radius = d;

  std::uniform_real_distribution<double> coord(0.0, 1.0);
  topo.positions.resize(topo.n, 2);
  for (int i = 0; i < topo.n; ++i) {
    topo.positions(i, 0) = coord(rng);
    topo.positions(i, 1) = coord(rng);
  }
  topo.rebuild_links();

  // Redraw until 1 <= m < n.
  std::bernoulli_distribution is_commodity(commodity_fraction);
  do {
    topo.commodities.clear();
    for (int i = 0; i < topo.n; ++i) {
      if (is_commodity(rng)) topo.commodities.push_back(i);
    }
  } while (topo.commodities.empty() ||
           static_cast<int>(topo.commodities.size()) == topo.n);
  return topo;
}

Topology perturb_positions(const Topology& topology, double sigma, Rng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
  if (sigma == 0.0) return topology;
  Topology out = topology;
  std::normal_distribution<double> noise(0.0, sigma);
  for (int i = 0; i < out.n; ++i) {
    out.positions(i, 0) = detail::clamp_unit(out.positions(i, 0) + noise(rng));
    out.positions(i, 1) = detail::clamp_unit(out.positions(i, 1) + noise(rng));
  }
  out.rebuild_links();
  return out;
}

}  // namespace dppsim
