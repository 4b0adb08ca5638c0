#include <doctest.h>

#include "dppsim/channel.hpp"
#include "dppsim/topology.hpp"
#include "oracles.hpp"

using namespace dppsim;

TEST_CASE("geometric network with d > sqrt(2) is complete") {
  Rng rng(7);
  const Topology topo = generate_geometric_network(5, 5, 0.4, 1.5, rng);
  CHECK(topo.n == 5);
  CHECK(topo.links.size() == 5 * 4);  // both directions of every pair
  for (int i = 0; i < 5; ++i) CHECK(topo.out_neighbors[i].size() == 4);
}

TEST_CASE("geometric network with vanishing threshold has no links") {
  Rng rng(7);
  const Topology topo = generate_geometric_network(5, 5, 0.4, 1e-12, rng);
  CHECK(topo.links.empty());
}

TEST_CASE("generation rejects bad parameters") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_geometric_network(5, 5, 0.0, 0.3, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_geometric_network(5, 5, 1.0, 0.3, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_geometric_network(5, 5, 0.2, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_geometric_network(1, 5, 0.2, 0.3, rng), std::invalid_argument);
}

TEST_CASE("generation always yields at least one commodity and in-range positions") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Topology topo = generate_geometric_network(2, 8, 0.05, 0.3, rng);
    CHECK(topo.commodities.size() >= 1);
    CHECK(static_cast<int>(topo.commodities.size()) < topo.n);
    CHECK((topo.positions.array() >= 0.0).all());
    CHECK((topo.positions.array() <= 1.0).all());
    for (const auto& [i, j] : topo.links) {
      CHECK(i != j);
      CHECK(topo.has_link(j, i));  // symmetric as a set
    }
  }
}

TEST_CASE("mean degree at n=30, d=0.3 matches the Monte-Carlo pair estimate") {
  Rng rng(2024);
  double degree_sum = 0.0;
  int node_count = 0;
  for (int s = 0; s < 1000; ++s) {
    const Topology topo = generate_geometric_network(30, 30, 0.2, 0.3, rng);
    degree_sum += static_cast<double>(topo.links.size());
    node_count += topo.n;
  }
  const double mean_degree = degree_sum / node_count;
  Rng mc_rng(99);
  const double p_link = oracles::link_probability_estimate(0.3, 2'000'000, mc_rng);
  CHECK(mean_degree == doctest::Approx(29.0 * p_link).epsilon(0.02));
}

TEST_CASE("commodity count stays strictly below the node count") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const Topology topo = generate_geometric_network(2, 3, 0.9, 0.5, rng);
    CHECK(topo.commodities.size() >= 1);
    CHECK(static_cast<int>(topo.commodities.size()) < topo.n);
  }
}

TEST_CASE("channel gains follow the inverse-cube law") {
  CHECK(pathloss_gain(0.0) == 1.0);
  CHECK(pathloss_gain(1.0) == doctest::Approx(0.125).epsilon(1e-12));

  // two nodes exactly one apart: h = (1+1)^-3
  const Topology topo = oracles::make_topology({{0.0, 0.0}, {1.0, 0.0}}, 1.5, {1});
  const ChannelState ch = channel_gains(topo, 0.01);
  CHECK(ch.gains(0, 1) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(ch.gains(1, 0) == ch.gains(0, 1));
}

TEST_CASE("channel gains decrease strictly with distance along a chain") {
  const Topology topo =
      oracles::make_topology({{0.0, 0.0}, {0.1, 0.0}, {0.3, 0.0}, {0.65, 0.0}}, 0.4, {0});
  const ChannelState ch = channel_gains(topo, 0.01);
  CHECK(ch.gains(0, 1) > ch.gains(1, 2));
  CHECK(ch.gains(1, 2) > ch.gains(2, 3));
  // symmetric everywhere, zero off-links
  const Topology complete = oracles::make_topology({{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.2}}, 2.0, {0});
  const ChannelState ch2 = channel_gains(complete, 0.01);
  CHECK(ch2.gains == ch2.gains.transpose().eval());
  CHECK(ch.gains(0, 3) == 0.0);
}

TEST_CASE("zero power gives zero capacity") {
  Rng rng(3);
  const Topology topo = generate_geometric_network(8, 8, 0.3, 0.5, rng);
  const ChannelState ch = channel_gains(topo, 0.01);
  const Matrix kappa = link_capacity(Matrix::Zero(8, 8), ch, topo, 20.0);
  CHECK(kappa.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("isolated link with h*P = N0 has unit capacity") {
  const Topology topo = oracles::make_topology({{0.1, 0.1}, {0.3, 0.1}}, 0.5, {1});
  const double noise = 0.01;
  const ChannelState ch = channel_gains(topo, noise);
  Matrix P = Matrix::Zero(2, 2);
  P(0, 1) = noise / ch.gains(0, 1);
  const Matrix kappa = link_capacity(P, ch, topo, 20.0);
  CHECK(kappa(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kappa(1, 0) == 0.0);
}

TEST_CASE("a second transmitter near the receiver lowers the first link's capacity") {
  const Topology topo =
      oracles::make_topology({{0.0, 0.0}, {0.2, 0.0}, {0.25, 0.05}}, 0.3, {1});
  const ChannelState ch = channel_gains(topo, 0.01);
  Matrix P1 = Matrix::Zero(3, 3);
  P1(0, 1) = 0.5;
  Matrix P2 = P1;
  P2(2, 1) = 0.5;
  const Matrix kappa1 = link_capacity(P1, ch, topo, 20.0);
  const Matrix kappa2 = link_capacity(P2, ch, topo, 20.0);
  CHECK(kappa2(0, 1) < kappa1(0, 1));
}

TEST_CASE("capacity is strictly increasing in power on an isolated link") {
  const Topology topo = oracles::make_topology({{0.1, 0.1}, {0.4, 0.1}}, 0.5, {1});
  const ChannelState ch = channel_gains(topo, 0.01);
  double previous = 0.0;
  for (double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    Matrix P = Matrix::Zero(2, 2);
    P(0, 1) = p;
    const double k = link_capacity(P, ch, topo, 20.0)(0, 1);
    CHECK(k > previous);
    previous = k;
  }
}

TEST_CASE("capacity rejects non-finite power") {
  const Topology topo = oracles::make_topology({{0.1, 0.1}, {0.4, 0.1}}, 0.5, {1});
  const ChannelState ch = channel_gains(topo, 0.01);
  Matrix P = Matrix::Zero(2, 2);
  P(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(link_capacity(P, ch, topo, 20.0));
}

TEST_CASE("penalty kinds") {
  const Topology topo = oracles::make_topology({{0.1, 0.1}, {0.4, 0.1}}, 0.5, {1});
  Matrix P = Matrix::Zero(2, 2);
  P(0, 1) = 1.0;
  P(1, 0) = 2.0;
  Matrix kappa = Matrix::Zero(2, 2);

  CHECK(penalty(P, kappa, {PenaltyKind::none, 0.1}, topo) == 0.0);
  CHECK(penalty(P, kappa, {PenaltyKind::consumption, 0.1}, topo) == doctest::Approx(3.0));
  CHECK(penalty(P, kappa, {PenaltyKind::efficiency, 0.1}, topo) == 0.0);  // kappa = 0
  kappa(0, 1) = 2.0;
  CHECK(penalty(P, kappa, {PenaltyKind::efficiency, 0.1}, topo) ==
        doctest::Approx(-2.0 / 1.1));
  CHECK_THROWS_AS(penalty(P, kappa, {PenaltyKind::efficiency, 0.0}, topo),
                  std::invalid_argument);
  // consumption penalty is zero exactly at P = 0
  CHECK(penalty(Matrix::Zero(2, 2), kappa, {PenaltyKind::consumption, 0.1}, topo) == 0.0);
}

TEST_CASE("project_power scales overweight rows and clips negatives") {
  Matrix P(2, 2);
  P << 0.0, 2.0, -1.0, 0.5;
  const Matrix projected = project_power(P, 1.0);
  CHECK(projected(0, 1) == doctest::Approx(1.0));
  CHECK(projected(1, 0) == 0.0);
  CHECK(projected(1, 1) == doctest::Approx(0.5));  // feasible row untouched

  Matrix negative(1, 2);
  negative << -0.2, -3.0;
  CHECK(project_power(negative, 1.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("project_power feasibility closure on random matrices") {
  Rng rng(17);
  std::uniform_real_distribution<double> entry(-2.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix P(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) P(i, j) = entry(rng);
    const Matrix projected = project_power(P, 1.0);
    CHECK((projected.array() >= 0.0).all());
    CHECK(projected.rowwise().sum().maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("perturb_positions: sigma = 0 is the identity, outputs stay in the square") {
  Rng rng(5);
  const Topology topo = generate_geometric_network(12, 12, 0.3, 0.3, rng);
  Rng noise_rng(9);
  const Topology same = perturb_positions(topo, 0.0, noise_rng);
  CHECK(same.positions == topo.positions);
  CHECK(same.links == topo.links);

  CHECK(detail::clamp_unit(0.99 + 0.05) == 1.0);
  CHECK(detail::clamp_unit(-0.3) == 0.0);

  Topology moving = topo;
  for (int t = 0; t < 20; ++t) {
    moving = perturb_positions(moving, 0.1, noise_rng);
    CHECK((moving.positions.array() >= 0.0).all());
    CHECK((moving.positions.array() <= 1.0).all());
    for (const auto& [i, j] : moving.links) CHECK(moving.distance(i, j) <= moving.radius);
  }
}
