#include "dppsim/lp_oracle.hpp"

#include <stdexcept>

#include "dppsim/simplex.hpp"

namespace dppsim {

namespace {
constexpr int kOracleCellLimit = 64;
}

ScheduleSolution solve_schedule_lp(const ScheduleLP& lp) {
  const int nbrs = static_cast<int>(lp.capacities.size());
  const int m = static_cast<int>(lp.queues.size());
  if (lp.weights.rows() != nbrs || lp.weights.cols() != m)
    throw std::invalid_argument("solve_schedule_lp: shape mismatch");
  const int cells = nbrs * m;
  if (cells > kOracleCellLimit)
    throw std::invalid_argument("solve_schedule_lp: instance exceeds oracle scale");
  if (!lp.weights.allFinite())
    throw std::invalid_argument("solve_schedule_lp: non-finite weights");

  Matrix A = Matrix::Zero(nbrs + m, cells);
  Vector b(nbrs + m);
  Vector obj(cells);
  for (int r = 0; r < nbrs; ++r) {
    for (int c = 0; c < m; ++c) {
      const int x = r * m + c;
      A(r, x) = 1.0;       // row sum <= capacity
      A(nbrs + c, x) = 1.0;  // column sum <= queue
      obj(x) = lp.weights(r, c);
    }
  }
  b.head(nbrs) = lp.capacities;
  b.tail(m) = lp.queues;

  const SimplexSolution sol = simplex_maximize(A, b, obj);
  ScheduleSolution out;
  out.schedule = Matrix::Zero(nbrs, m);
  for (int r = 0; r < nbrs; ++r)
    for (int c = 0; c < m; ++c) out.schedule(r, c) = sol.x(r * m + c);
  out.objective = sol.objective;
  return out;
}

TransportSolution solve_transport_lp(const SinkhornProblem& problem) {
  TransportSolution out;
  if (problem.empty()) return out;
  const int cells = static_cast<int>(problem.values.size());
  if (problem.blocks.size() != 1 || cells != problem.n_rows * problem.n_cols)
    throw std::invalid_argument("solve_transport_lp: expects one full-rectangle block");
  if (cells > 4 * kOracleCellLimit)
    throw std::invalid_argument("solve_transport_lp: instance exceeds oracle scale");
  const double mass = problem.source.sum();
  if (std::abs(mass - problem.target.sum()) > 1e-9 * std::max(1.0, mass))
    throw std::invalid_argument("solve_transport_lp: infeasible marginals");

  // Solve the inequality relaxation with the clipped weights, then complete
  // the plan to equality marginals. Positive-weight cells are already
  // saturated at the optimum, so the completion only moves zero-value mass
  // and the objective is unchanged.
  Matrix A = Matrix::Zero(problem.n_rows + problem.n_cols, cells);
  Vector b(problem.n_rows + problem.n_cols);
  Vector obj(cells);
  for (int k = 0; k < cells; ++k) {
    A(problem.rows[static_cast<std::size_t>(k)], k) = 1.0;
    A(problem.n_rows + problem.cols[static_cast<std::size_t>(k)], k) = 1.0;
    obj(k) = std::max(problem.values(k), 0.0);
  }
  b.head(problem.n_rows) = problem.target;
  b.tail(problem.n_cols) = problem.source;

  const SimplexSolution sol = simplex_maximize(A, b, obj);
  out.plan = sol.x;

  Vector row_residual = problem.target - segmented_sum(out.plan, problem.rows, problem.n_rows);
  Vector col_residual = problem.source - segmented_sum(out.plan, problem.cols, problem.n_cols);
  for (int k = 0; k < cells; ++k) {
    const int r = problem.rows[static_cast<std::size_t>(k)];
    const int c = problem.cols[static_cast<std::size_t>(k)];
    const double add = std::min(row_residual(r), col_residual(c));
    if (add > 0.0) {
      out.plan(k) += add;
      row_residual(r) -= add;
      col_residual(c) -= add;
    }
  }
  if (row_residual.cwiseAbs().maxCoeff() > 1e-7 || col_residual.cwiseAbs().maxCoeff() > 1e-7)
    throw std::runtime_error("solve_transport_lp: completion failed to balance marginals");

  out.objective = obj.dot(out.plan);
  return out;
}

bool verify_schedule_optimality(const Matrix& schedule, const ScheduleLP& lp, double tol) {
  const Vector row_sums = schedule.rowwise().sum();
  const Vector col_sums = schedule.colwise().sum().transpose();
  for (int r = 0; r < schedule.rows(); ++r) {
    for (int c = 0; c < schedule.cols(); ++c) {
      if (lp.weights(r, c) < 0.0 && schedule(r, c) > tol) return false;
      if (lp.weights(r, c) > 0.0) {
        const bool row_tight = row_sums(r) >= lp.capacities(r) - tol;
        const bool col_tight = col_sums(c) >= lp.queues(c) - tol;
        if (!row_tight && !col_tight) return false;
      }
    }
  }
  return true;
}

bool verify_threshold_equivalence(const ScheduleLP& lp, double tol) {
  if (lp.capacities.size() == 0 || lp.capacities.maxCoeff() <= 0.0) return true;
  const SinkhornProblem problem = build_ot_problem(lp.weights, lp.queues, lp.capacities, 1.0);
  const TransportSolution transport = solve_transport_lp(problem);
  const Matrix thresholded = threshold_schedule(transport.plan, problem, 0, lp.weights);

  const Vector row_sums = thresholded.rowwise().sum();
  const Vector col_sums = thresholded.colwise().sum().transpose();
  const double feas_tol = 1e-7;
  if (((row_sums - lp.capacities).array() > feas_tol).any()) return false;
  if (((col_sums - lp.queues).array() > feas_tol).any()) return false;
  if ((thresholded.array() < -feas_tol).any()) return false;

  const ScheduleSolution exact = solve_schedule_lp(lp);
  const double objective = (lp.weights.array() * thresholded.array()).sum();
  return std::abs(objective - exact.objective) <= tol;
}

ScheduleLP random_schedule_lp(Rng& rng, int max_nbrs, int max_m, double w_lo,
                              double w_hi, double mass_hi) {
  std::uniform_int_distribution<int> nbr_count(1, max_nbrs);
  std::uniform_int_distribution<int> commodity_count(1, max_m);
  std::uniform_real_distribution<double> weight(w_lo, w_hi);
  std::uniform_real_distribution<double> mass(0.0, mass_hi);
  ScheduleLP lp;
  const int nbrs = nbr_count(rng);
  const int m = commodity_count(rng);
  lp.weights.resize(nbrs, m);
  for (int r = 0; r < nbrs; ++r)
    for (int c = 0; c < m; ++c) lp.weights(r, c) = weight(rng);
  lp.capacities.resize(nbrs);
  for (int r = 0; r < nbrs; ++r) lp.capacities(r) = mass(rng);
  lp.queues.resize(m);
  for (int c = 0; c < m; ++c) lp.queues(c) = mass(rng);
  return lp;
}

}  // namespace dppsim
