#include <doctest.h>

#include "dppsim/lp_oracle.hpp"
#include "dppsim/queues.hpp"
#include "dppsim/scheduler.hpp"
#include "oracles.hpp"

using namespace dppsim;

TEST_CASE("compute_weights: difference of backlogs on links, antisymmetric") {
  const Topology topo = oracles::path_topology(3, {2});
  Matrix U(3, 1);
  U << 3.0, 1.0, 0.0;
  const CommodityTensor W = compute_weights(U, topo);
  CHECK(W[0](0, 1) == doctest::Approx(2.0));
  CHECK(W[0](1, 0) == doctest::Approx(-2.0));
  CHECK(W[0](0, 2) == 0.0);  // not a link

  CHECK(tensor_abs_max(compute_weights(Matrix::Zero(3, 1), topo)) == 0.0);

  // BP with a single packet at i: positive weight toward every neighbor
  Matrix Q = Matrix::Zero(3, 1);
  Q(1, 0) = 1.0;
  const CommodityTensor Wq = compute_weights(bp_backlog(Q, topo), topo);
  CHECK(Wq[0](1, 0) == doctest::Approx(1.0));
  CHECK(Wq[0](1, 2) == doctest::Approx(1.0));
}

TEST_CASE("max_weight_schedule assigns full capacity to the best positive commodity") {
  const Topology topo = oracles::path_topology(2, {1});
  Matrix kappa = Matrix::Zero(2, 2);
  kappa(0, 1) = 2.0;

  SUBCASE("all weights non-positive: nothing moves") {
    CommodityTensor W = zero_tensor(2, 2);
    W[0](0, 1) = -1.0;
    W[1](0, 1) = 0.0;
    CHECK(tensor_abs_max(max_weight_schedule(W, kappa, topo)) == 0.0);
  }
  SUBCASE("argmax commodity gets the link") {
    CommodityTensor W = zero_tensor(2, 2);
    W[0](0, 1) = 3.0;
    W[1](0, 1) = 5.0;
    const CommodityTensor mu = max_weight_schedule(W, kappa, topo);
    CHECK(mu[1](0, 1) == doctest::Approx(2.0));
    CHECK(mu[0](0, 1) == 0.0);
  }
  SUBCASE("ties break toward the lowest commodity index") {
    CommodityTensor W = zero_tensor(2, 2);
    W[0](0, 1) = 4.0;
    W[1](0, 1) = 4.0;
    kappa(0, 1) = 1.0;
    const CommodityTensor mu = max_weight_schedule(W, kappa, topo);
    CHECK(mu[0](0, 1) == doctest::Approx(1.0));
    CHECK(mu[1](0, 1) == 0.0);
  }
}

TEST_CASE("softmax max-weight schedule") {
  SUBCASE("single neighbor, single commodity: min(Q, kappa)") {
    const Topology topo = oracles::path_topology(2, {1});
    CommodityTensor W = zero_tensor(2, 1);
    W[0](0, 1) = 2.0;
    Matrix Q = Matrix::Constant(2, 1, 3.0);
    Q(1, 0) = 0.0;
    Matrix kappa = Matrix::Zero(2, 2);
    kappa(0, 1) = 1.5;
    const CommodityTensor mu = softmax_max_weight(W, Q, kappa, topo);
    CHECK(mu[0](0, 1) == doctest::Approx(1.5));
    kappa(0, 1) = 10.0;
    CHECK(softmax_max_weight(W, Q, kappa, topo)[0](0, 1) == doctest::Approx(3.0));
  }
  SUBCASE("two symmetric neighbors split the queue evenly") {
    const Topology topo =
        oracles::make_topology({{0.5, 0.5}, {0.4, 0.5}, {0.6, 0.5}}, 0.15, {1, 2});
    CommodityTensor W = zero_tensor(3, 2);
    W[0](0, 1) = 1.0;
    W[0](0, 2) = 1.0;
    Matrix Q = Matrix::Zero(3, 2);
    Q(0, 0) = 2.0;
    Matrix kappa = Matrix::Zero(3, 3);
    kappa(0, 1) = kappa(0, 2) = 50.0;
    const CommodityTensor mu = softmax_max_weight(W, Q, kappa, topo);
    CHECK(mu[0](0, 1) == doctest::Approx(1.0));
    CHECK(mu[0](0, 2) == doctest::Approx(1.0));
  }
  SUBCASE("zero queues move nothing") {
    const Topology topo = oracles::path_topology(2, {1});
    CommodityTensor W = zero_tensor(2, 1);
    W[0](0, 1) = 2.0;
    Matrix kappa = Matrix::Constant(2, 2, 5.0);
    CHECK(tensor_abs_max(softmax_max_weight(W, Matrix::Zero(2, 1), kappa, topo)) == 0.0);
  }
  SUBCASE("negative best weight moves nothing") {
    const Topology topo = oracles::path_topology(2, {1});
    CommodityTensor W = zero_tensor(2, 1);
    W[0](0, 1) = -0.5;
    Matrix kappa = Matrix::Constant(2, 2, 5.0);
    CHECK(tensor_abs_max(softmax_max_weight(W, Matrix::Constant(2, 1, 4.0), kappa, topo)) ==
          0.0);
  }
}

TEST_CASE("softmax schedule is queue- and capacity-feasible on random inputs") {
  Rng rng(404);
  std::uniform_real_distribution<double> weight(-3.0, 3.0);
  std::uniform_real_distribution<double> mass(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Topology topo = generate_geometric_network(6, 10, 0.3, 0.5, rng);
    const int m = topo.commodity_count();
    CommodityTensor W = zero_tensor(topo.n, m);
    Matrix Q(topo.n, m);
    Matrix kappa = Matrix::Zero(topo.n, topo.n);
    for (int c = 0; c < m; ++c)
      for (const auto& [i, j] : topo.links) W[c](i, j) = weight(rng);
    for (int i = 0; i < topo.n; ++i)
      for (int c = 0; c < m; ++c) Q(i, c) = mass(rng);
    for (const auto& [i, j] : topo.links) kappa(i, j) = mass(rng);

    const CommodityTensor mu = softmax_max_weight(W, Q, kappa, topo);
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < topo.n; ++i) CHECK(mu[c].row(i).sum() <= Q(i, c) + 1e-9);
    for (const auto& [i, j] : topo.links) {
      double used = 0.0;
      for (int c = 0; c < m; ++c) {
        used += mu[c](i, j);
        if (mu[c](i, j) > 0.0) CHECK(W[c](i, j) > 0.0);
      }
      CHECK(used <= kappa(i, j) + 1e-9);
    }
  }
}

TEST_CASE("sinkhorn-thresholded schedules approach the LP objective and stay feasible") {
  Rng rng(888);
  for (int trial = 0; trial < 50; ++trial) {
    const ScheduleLP lp = random_schedule_lp(rng);
    if (lp.capacities.maxCoeff() <= 0.0 || lp.queues.sum() <= 0.0) continue;
    const SinkhornProblem p = build_ot_problem(lp.weights, lp.queues, lp.capacities, 100.0);
    const SinkhornResult r = sparse_sinkhorn(p, {100.0, 200000, 1e-8});
    REQUIRE(r.converged);
    const Matrix mu = threshold_schedule(r.plan, p, 0, lp.weights);

    CHECK(((mu.rowwise().sum() - lp.capacities).array() <= 1e-6).all());
    CHECK(((mu.colwise().sum().transpose() - lp.queues).array() <= 1e-6).all());
    for (int i = 0; i < mu.rows(); ++i)
      for (int c = 0; c < mu.cols(); ++c)
        if (mu(i, c) > 0.0) CHECK(lp.weights(i, c) > 0.0);

    const double objective = (lp.weights.array() * mu.array()).sum();
    const double optimum = solve_schedule_lp(lp).objective;
    CHECK(objective <= optimum + 1e-6);
    CHECK(objective >= optimum - 0.05 * std::max(optimum, 1e-9) - 1e-9);
  }
}

namespace {
ControlConfig basic_control(SchedulerKind scheduler, BacklogKind backlog = BacklogKind::bp) {
  ControlConfig cc;
  cc.backlog = backlog;
  cc.scheduler = scheduler;
  cc.sinkhorn = {1.0, 500, 1e-8};
  return cc;
}
}  // namespace

TEST_CASE("dpp_step: zero queues schedule nothing for every scheduler") {
  Rng rng(21);
  const Topology topo = generate_geometric_network(8, 8, 0.3, 0.5, rng);
  const ChannelState ch = channel_gains(topo, 0.01);
  const Matrix Q = Matrix::Zero(topo.n, topo.commodity_count());
  for (SchedulerKind kind :
       {SchedulerKind::max_weight, SchedulerKind::softmax, SchedulerKind::sinkhorn}) {
    DppController controller(topo, basic_control(kind));
    const DppStepResult r = controller.step(Q, topo, ch);
    CHECK(tensor_abs_max(r.schedule) == 0.0);
  }
}

TEST_CASE("dpp_step on a two-node network moves min(Q, kappa) toward the commodity") {
  const Topology topo = oracles::make_topology({{0.2, 0.5}, {0.4, 0.5}}, 0.3, {1});
  const ChannelState ch = channel_gains(topo, 0.01);
  Matrix Q = Matrix::Zero(2, 1);
  Q(0, 0) = 5.0;

  DppController controller(topo, basic_control(SchedulerKind::sinkhorn));
  const DppStepResult r = controller.step(Q, topo, ch);
  const CommodityTensor realized = realize_schedule(Q, r.schedule);
  const double expected = std::min(Q(0, 0), r.kappa(0, 1));
  CHECK(realized[0](0, 1) == doctest::Approx(expected).epsilon(1e-6));
  CHECK(r.kappa(0, 1) > 0.0);
}

TEST_CASE("dpp_step is deterministic") {
  Rng rng(4);
  const Topology topo = generate_geometric_network(10, 10, 0.3, 0.4, rng);
  const ChannelState ch = channel_gains(topo, 0.01);
  Matrix Q(topo.n, topo.commodity_count());
  Rng qrng(5);
  std::uniform_real_distribution<double> mass(0.0, 3.0);
  for (int i = 0; i < topo.n; ++i)
    for (int c = 0; c < topo.commodity_count(); ++c) Q(i, c) = mass(qrng);
  for (int c = 0; c < topo.commodity_count(); ++c) Q(topo.commodities[c], c) = 0.0;

  DppController a(topo, basic_control(SchedulerKind::sinkhorn));
  DppController b(topo, basic_control(SchedulerKind::sinkhorn));
  const DppStepResult ra = a.step(Q, topo, ch);
  const DppStepResult rb = b.step(Q, topo, ch);
  for (int c = 0; c < topo.commodity_count(); ++c) CHECK(ra.schedule[c] == rb.schedule[c]);
  CHECK(ra.power == rb.power);
  CHECK(ra.penalty_value == rb.penalty_value);
}

TEST_CASE("every scheduler respects capacity and the weight sign rule end to end") {
  Rng rng(616);
  std::uniform_real_distribution<double> mass(0.0, 4.0);
  for (SchedulerKind kind :
       {SchedulerKind::max_weight, SchedulerKind::softmax, SchedulerKind::sinkhorn}) {
    for (BacklogKind backlog : {BacklogKind::bp, BacklogKind::sp, BacklogKind::qsp_clamped}) {
      const Topology topo = generate_geometric_network(10, 16, 0.25, 0.4, rng);
      const ChannelState ch = channel_gains(topo, 0.01);
      const int m = topo.commodity_count();
      Matrix Q(topo.n, m);
      for (int i = 0; i < topo.n; ++i)
        for (int c = 0; c < m; ++c) Q(i, c) = mass(rng);
      for (int c = 0; c < m; ++c) Q(topo.commodities[c], c) = 0.0;

      DppController controller(topo, basic_control(kind, backlog));
      const DppStepResult r = controller.step(Q, topo, ch);

      for (const auto& [i, j] : topo.links) {
        double used = 0.0;
        for (int c = 0; c < m; ++c) {
          used += r.schedule[c](i, j);
          if (r.schedule[c](i, j) > 0.0) CHECK(r.weights[c](i, j) > 0.0);
        }
        CHECK(used <= r.kappa(i, j) + 1e-6);
      }
      if (kind != SchedulerKind::max_weight) {
        for (int c = 0; c < m; ++c)
          for (int i = 0; i < topo.n; ++i) CHECK(r.schedule[c].row(i).sum() <= Q(i, c) + 1e-6);
      }
    }
  }
}
