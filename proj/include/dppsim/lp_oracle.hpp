#pragma once

#include <cmath>
#include <limits>

#include "dppsim/sinkhorn.hpp"
#include "dppsim/topology.hpp"
#include "dppsim/types.hpp"

namespace dppsim {

// One node's scheduling subproblem: maximize weights.schedule subject to row
// sums bounded by the link capacities and column sums bounded by the queues.
struct ScheduleLP {
  Matrix weights;     // out-links x commodities
  Vector capacities;  // per out-link
  Vector queues;      // per commodity
};

struct ScheduleSolution {
  Matrix schedule;
  double objective = 0.0;
};

struct TransportSolution {
  Vector plan;  // aligned with the problem's coordinate lists
  double objective = 0.0;
};

// Exact optimum of the inequality-constrained scheduling problem. Oracle
// scale only (at most 64 cells).
ScheduleSolution solve_schedule_lp(const ScheduleLP& lp);

// Exact optimum of the slack-augmented transport problem under equality
// marginals, maximizing the positive parts of the weights. The problem must
// be a single full-rectangle block (as produced by build_ot_problem).
TransportSolution solve_transport_lp(const SinkhornProblem& problem);

// Optimal-solution properties: zero mass on negative-weight cells, and every
// positive-weight cell saturates its row or its column.
bool verify_schedule_optimality(const Matrix& schedule, const ScheduleLP& lp, double tol = 1e-9);

// Solves the slack-augmented transport problem exactly, thresholds by W > 0,
// and checks the result is feasible for the scheduling problem and attains
// its exact optimum.
bool verify_threshold_equivalence(const ScheduleLP& lp, double tol = 1e-6);

// Random instance used by the property suites: out-degree in [1, max_nbrs],
// commodities in [1, max_m], weights uniform in [w_lo, w_hi], capacities and
// queues uniform in [0, mass_hi].
ScheduleLP random_schedule_lp(Rng& rng, int max_nbrs = 5, int max_m = 4,
                              double w_lo = -5.0, double w_hi = 5.0,
                              double mass_hi = 3.0);

template <typename Scalar>
struct DenseSinkhornResult {
  MatrixX<Scalar> plan;
  int iterations = 0;
  Scalar violation = Scalar(0);
};

// Classic dense Sinkhorn on the kernel exp(eta * values^+), kept in the log
// domain throughout so large eta never overflows. Runs the same
// column-then-row update order as the sparse implementation so finite
// iterates agree; long double gives the high-precision ground truth.
template <typename Scalar = long double>
DenseSinkhornResult<Scalar> dense_entropic_reference(const SinkhornProblem& problem,
                                                     int max_iters, double tol) {
  using Mat = MatrixX<Scalar>;
  using Vec = VectorX<Scalar>;
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  DenseSinkhornResult<Scalar> result;
  if (problem.empty()) return result;

  Mat L = Mat::Constant(problem.n_rows, problem.n_cols, -inf);
  for (Eigen::Index k = 0; k < problem.values.size(); ++k)
    L(problem.rows[static_cast<std::size_t>(k)], problem.cols[static_cast<std::size_t>(k)]) =
        Scalar(problem.eta) * Scalar(std::max(problem.values(k), 0.0));

  Vec log_source(problem.n_cols), log_target(problem.n_rows);
  for (int c = 0; c < problem.n_cols; ++c)
    log_source(c) = problem.source(c) > 0.0 ? std::log(Scalar(problem.source(c))) : -inf;
  for (int r = 0; r < problem.n_rows; ++r)
    log_target(r) = problem.target(r) > 0.0 ? std::log(Scalar(problem.target(r))) : -inf;

  auto logsumexp = [&](auto&& view) -> Scalar {
    Scalar peak = -inf;
    for (Eigen::Index k = 0; k < view.size(); ++k) peak = std::max(peak, view(k));
    if (peak == -inf) return -inf;
    Scalar acc = Scalar(0);
    for (Eigen::Index k = 0; k < view.size(); ++k)
      if (view(k) != -inf) acc += std::exp(view(k) - peak);
    return peak + std::log(acc);
  };

  for (int it = 1; it <= max_iters; ++it) {
    for (int c = 0; c < problem.n_cols; ++c) {
      const Scalar s = logsumexp(L.col(c));
      if (log_source(c) == -inf) {
        L.col(c).setConstant(-inf);
      } else if (s != -inf) {
        L.col(c).array() += log_source(c) - s;
      }
    }
    for (int r = 0; r < problem.n_rows; ++r) {
      const Scalar s = logsumexp(L.row(r));
      if (log_target(r) == -inf) {
        L.row(r).setConstant(-inf);
      } else if (s != -inf) {
        L.row(r).array() += log_target(r) - s;
      }
    }
    result.iterations = it;
    result.plan = L.array().exp();
    Scalar row_viol = Scalar(0), col_viol = Scalar(0);
    for (int r = 0; r < problem.n_rows; ++r)
      row_viol += std::abs(result.plan.row(r).sum() - Scalar(problem.target(r)));
    for (int c = 0; c < problem.n_cols; ++c)
      col_viol += std::abs(result.plan.col(c).sum() - Scalar(problem.source(c)));
    result.violation = std::max(row_viol, col_viol);
    if (tol > 0.0 && result.violation <= Scalar(tol)) break;
  }
  return result;
}

// Reads the dense plan back out in the problem's coordinate order.
template <typename Scalar>
Vector cells_from_dense(const MatrixX<Scalar>& plan, const SinkhornProblem& problem) {
  Vector out(problem.values.size());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out(k) = static_cast<double>(plan(problem.rows[static_cast<std::size_t>(k)],
                                      problem.cols[static_cast<std::size_t>(k)]));
  return out;
}

}  // namespace dppsim
