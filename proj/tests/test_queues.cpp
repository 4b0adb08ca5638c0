#include <doctest.h>

#include "dppsim/queues.hpp"
#include "oracles.hpp"

using namespace dppsim;

TEST_CASE("arrivals: zero rate gives zero matrix") {
  const Topology topo = oracles::path_topology(4, {3});
  Rng rng(1);
  CHECK(sample_arrivals({0.0}, topo, rng).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("arrivals are non-negative integers and skip the destination") {
  const Topology topo = oracles::path_topology(5, {0, 4});
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix A = sample_arrivals({0.7}, topo, rng);
    CHECK(A(0, 0) == 0.0);
    CHECK(A(4, 1) == 0.0);
    for (int i = 0; i < 5; ++i)
      for (int c = 0; c < 2; ++c) {
        CHECK(A(i, c) >= 0.0);
        CHECK(A(i, c) == std::floor(A(i, c)));
      }
  }
}

TEST_CASE("arrival sample mean is within 1% of the rate") {
  const Topology topo = oracles::path_topology(11, {0});
  Rng rng(3);
  double total = 0.0;
  const int draws = 50000;  // 10 active entries each
  for (int k = 0; k < draws; ++k) total += sample_arrivals({0.5}, topo, rng).sum();
  const double mean = total / (draws * 10.0);
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("realize_schedule clamps per (node, commodity) slice proportionally") {
  const Topology topo = oracles::path_topology(3, {2});
  Matrix Q = Matrix::Zero(3, 1);
  Q(0, 0) = 1.0;
  CommodityTensor mu = zero_tensor(3, 1);
  mu[0](0, 1) = 1.5;
  mu[0](1, 2) = 0.25;  // feasible elsewhere

  SUBCASE("oversubscribed slice is scaled") {
    // request 2.0 from 1.0 available, split (1.5, 0.5) -> realized (0.75, 0.25)
    const Topology star = oracles::make_topology({{0.5, 0.5}, {0.4, 0.5}, {0.6, 0.5}}, 0.2, {1});
    Matrix Qs = Matrix::Zero(3, 1);
    Qs(0, 0) = 1.0;
    CommodityTensor req = zero_tensor(3, 1);
    req[0](0, 1) = 1.5;
    req[0](0, 2) = 0.5;
    const CommodityTensor realized = realize_schedule(Qs, req);
    CHECK(realized[0](0, 1) == doctest::Approx(0.75));
    CHECK(realized[0](0, 2) == doctest::Approx(0.25));
  }

  SUBCASE("feasible schedule is unchanged") {
    Q(0, 0) = 2.0;
    Q(1, 0) = 1.0;
    const CommodityTensor realized = realize_schedule(Q, mu);
    CHECK(realized[0](0, 1) == doctest::Approx(1.5));
    CHECK(realized[0](1, 2) == doctest::Approx(0.25));
  }

  SUBCASE("empty queue forces a zero slice") {
    Q(0, 0) = 0.0;
    Q(1, 0) = 1.0;
    const CommodityTensor realized = realize_schedule(Q, mu);
    CHECK(realized[0](0, 1) == 0.0);
  }
}

TEST_CASE("step_queues: no flow, no arrivals leaves queues unchanged") {
  const Topology topo = oracles::path_topology(3, {2});
  Matrix Q(3, 1);
  Q << 2.0, 1.0, 0.0;
  const StepOutcome out = step_queues(Q, zero_tensor(3, 1), Matrix::Zero(3, 1), topo);
  CHECK(out.queues == Q);
  CHECK(out.delivered == 0.0);
}

TEST_CASE("step_queues: delivery into the commodity absorbs mass") {
  const Topology topo = oracles::path_topology(3, {2});
  Matrix Q(3, 1);
  Q << 0.0, 1.0, 0.0;
  CommodityTensor mu = zero_tensor(3, 1);
  mu[0](1, 2) = 1.0;
  const StepOutcome out = step_queues(Q, mu, Matrix::Zero(3, 1), topo);
  CHECK(out.delivered == doctest::Approx(1.0));
  CHECK(out.queues.sum() == doctest::Approx(0.0));
  CHECK(out.queues(2, 0) == 0.0);
}

TEST_CASE("step_queues: relay hop conserves total mass") {
  const Topology topo = oracles::path_topology(4, {3});
  Matrix Q(4, 1);
  Q << 2.0, 0.5, 0.0, 0.0;
  CommodityTensor mu = zero_tensor(4, 1);
  mu[0](0, 1) = 1.0;  // relay, not absorption
  const StepOutcome out = step_queues(Q, mu, Matrix::Zero(4, 1), topo);
  CHECK(out.delivered == 0.0);
  CHECK(out.queues.sum() == doctest::Approx(Q.sum()));
  CHECK(out.queues(0, 0) == doctest::Approx(1.0));
  CHECK(out.queues(1, 0) == doctest::Approx(1.5));
}

TEST_CASE("step_queues rejects infeasible drains") {
  const Topology topo = oracles::path_topology(3, {2});
  Matrix Q = Matrix::Zero(3, 1);
  Q(0, 0) = 0.5;
  CommodityTensor mu = zero_tensor(3, 1);
  mu[0](0, 1) = 1.0;  // more than available, not realized first
  CHECK_THROWS_AS(step_queues(Q, mu, Matrix::Zero(3, 1), topo), std::runtime_error);
}

TEST_CASE("random episodes conserve mass and stay non-negative") {
  const Topology topo = oracles::path_topology(6, {2, 5});
  Rng rng(77);
  std::uniform_real_distribution<double> amount(0.0, 2.0);
  Matrix Q = Matrix::Zero(6, 2);
  double prev_total = 0.0;
  for (int t = 0; t < 200; ++t) {
    CommodityTensor mu = zero_tensor(6, 2);
    for (int c = 0; c < 2; ++c)
      for (const auto& [i, j] : topo.links) mu[c](i, j) = amount(rng);
    mu = realize_schedule(Q, mu);
    const Matrix A = sample_arrivals({0.4}, topo, rng);
    const StepOutcome out = step_queues(Q, mu, A, topo);
    CHECK(std::abs(out.queues.sum() - prev_total - A.sum() + out.delivered) <= 1e-9);
    CHECK((out.queues.array() >= 0.0).all());
    for (int c = 0; c < 2; ++c) CHECK(out.queues(topo.commodities[c], c) == 0.0);
    Q = out.queues;
    prev_total = Q.sum();
  }
}

TEST_CASE("queue_ratio") {
  EpisodeMetrics metrics;
  metrics.arrivals = {1.0, 1.0, 2.0};
  metrics.delivered = {0.0, 0.0, 2.0};
  metrics.queue_total = {1.0, 2.0, 2.0};
  CHECK(queue_ratio(metrics) == doctest::Approx(0.5));  // half of 4 still queued

  metrics.queue_total = {1.0, 2.0, 0.0};
  CHECK(queue_ratio(metrics) == 0.0);

  // no transmissions at all: everything stays queued
  metrics.arrivals = {1.0, 3.0};
  metrics.queue_total = {1.0, 4.0};
  metrics.delivered = {0.0, 0.0};
  CHECK(queue_ratio(metrics) == doctest::Approx(1.0));

  EpisodeMetrics empty;
  empty.arrivals = {0.0, 0.0};
  empty.queue_total = {0.0, 0.0};
  CHECK(queue_ratio(empty) == 0.0);  // zero-arrival convention
}

TEST_CASE("stability_slope") {
  EpisodeMetrics metrics;
  metrics.queue_total.assign(50, 3.0);
  CHECK(stability_slope(metrics, 50) == doctest::Approx(0.0));

  for (int t = 0; t < 50; ++t) metrics.queue_total[t] = static_cast<double>(t);
  CHECK(stability_slope(metrics, 50) == doctest::Approx(1.0));
  CHECK(stability_slope(metrics, 10) == doctest::Approx(1.0));

  CHECK_THROWS_AS(stability_slope(metrics, 1), std::invalid_argument);
  CHECK_THROWS_AS(stability_slope(metrics, 51), std::invalid_argument);
}

TEST_CASE("stability_slope on a noisy plateau stays below the noise-scaled bound") {
  EpisodeMetrics metrics;
  Rng rng(123);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  const int window = 100;
  for (int t = 0; t < window; ++t) metrics.queue_total.push_back(10.0 + noise(rng));
  // slope of pure noise: sd <= sigma / sqrt(sum (t - mean)^2); allow 4 sigma
  double var_t = 0.0;
  for (int t = 0; t < window; ++t) var_t += (t - (window - 1) / 2.0) * (t - (window - 1) / 2.0);
  const double sigma = 2.0 / std::sqrt(12.0);
  CHECK(std::abs(stability_slope(metrics, window)) <= 4.0 * sigma / std::sqrt(var_t));
}
