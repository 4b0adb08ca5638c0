#include "dppsim/sinkhorn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dppsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Vector safe_log(const Vector& v) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) > 0.0 ? std::log(v(i)) : -kInf;
  return out;
}

// Rescales the cells of each segment so its mass matches the target; all in
// log space. Segments with zero target are wiped directly, segments with no
// finite mass are left alone (the violation report picks them up).
void normalize_segments(Vector& log_values, const std::vector<int>& seg,
                        const Vector& log_target, int n) {
  const Vector sums = segmented_logsumexp(log_values, seg, n);
  for (Eigen::Index k = 0; k < log_values.size(); ++k) {
    const int s = seg[static_cast<std::size_t>(k)];
    if (log_target(s) == -kInf) {
      log_values(k) = -kInf;
    } else if (sums(s) != -kInf) {
      log_values(k) += log_target(s) - sums(s);
    }
  }
}

double marginal_violation(const Vector& plan, const SinkhornProblem& p) {
  const Vector row_sums = segmented_sum(plan, p.rows, p.n_rows);
  const Vector col_sums = segmented_sum(plan, p.cols, p.n_cols);
  const double row_viol = (row_sums - p.target).cwiseAbs().sum();
  const double col_viol = (col_sums - p.source).cwiseAbs().sum();
  return std::max(row_viol, col_viol);
}
}  // namespace

Vector segmented_sum(const Vector& values, const std::vector<int>& segments, int n) {
  Vector out = Vector::Zero(n);
  for (Eigen::Index k = 0; k < values.size(); ++k)
    out(segments[static_cast<std::size_t>(k)]) += values(k);
  return out;
}

Vector segmented_logsumexp(const Vector& values, const std::vector<int>& segments, int n) {
  Vector peak = Vector::Constant(n, -kInf);
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const int s = segments[static_cast<std::size_t>(k)];
    peak(s) = std::max(peak(s), values(k));
  }
  Vector acc = Vector::Zero(n);
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const int s = segments[static_cast<std::size_t>(k)];
    if (values(k) != -kInf) acc(s) += std::exp(values(k) - peak(s));
  }
  Vector out(n);
  for (int s = 0; s < n; ++s) out(s) = peak(s) == -kInf ? -kInf : peak(s) + std::log(acc(s));
  return out;
}

SinkhornProblem build_ot_problem(const Matrix& W_i, const Vector& Q_i,
                                 const Vector& kappa_i, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if ((Q_i.array() < 0.0).any() || (kappa_i.array() < 0.0).any())
    throw std::invalid_argument("build_ot_problem: negative marginals");
  const int nbrs = static_cast<int>(kappa_i.size());
  const int m = static_cast<int>(Q_i.size());
  if (W_i.rows() != nbrs || W_i.cols() != m)
    throw std::invalid_argument("build_ot_problem: weight slice shape mismatch");

  SinkhornProblem p;
  p.eta = eta;
  if (nbrs == 0 || kappa_i.maxCoeff() <= 0.0) return p;

  const double d = kappa_i.sum() - Q_i.sum();
  p.n_rows = nbrs + (d < 0.0 ? 1 : 0);
  p.n_cols = m + (d > 0.0 ? 1 : 0);

  const int cells = p.n_rows * p.n_cols;
  p.values.resize(cells);
  p.rows.reserve(cells);
  p.cols.reserve(cells);
  int k = 0;
  for (int r = 0; r < p.n_rows; ++r) {
    for (int c = 0; c < p.n_cols; ++c, ++k) {
      p.rows.push_back(r);
      p.cols.push_back(c);
      p.values(k) = (r < nbrs && c < m) ? W_i(r, c) : 0.0;
    }
  }

  p.source.resize(p.n_cols);
  p.source.head(m) = Q_i;
  if (d > 0.0) p.source(m) = d;
  p.target.resize(p.n_rows);
  p.target.head(nbrs) = kappa_i;
  if (d < 0.0) p.target(nbrs) = -d;

  p.blocks.push_back({0, cells, 0, 0, nbrs, m, d < 0.0, d > 0.0});
  return p;
}

SinkhornProblem block_diag_batch(const std::vector<SinkhornProblem>& problems) {
  SinkhornProblem batch;
  bool eta_set = false;
  int cells = 0, rows = 0, cols = 0;
  for (const SinkhornProblem& p : problems) {
    if (p.empty()) continue;
    if (!eta_set) {
      batch.eta = p.eta;
      eta_set = true;
    } else if (p.eta != batch.eta) {
      throw std::invalid_argument("block_diag_batch: mixed regularisation values");
    }
    cells += static_cast<int>(p.values.size());
    rows += p.n_rows;
    cols += p.n_cols;
  }
  batch.values.resize(cells);
  batch.source.resize(cols);
  batch.target.resize(rows);
  batch.rows.reserve(cells);
  batch.cols.reserve(cells);

  int cell_off = 0, row_off = 0, col_off = 0;
  for (const SinkhornProblem& p : problems) {
    if (p.empty()) continue;
    for (Eigen::Index k = 0; k < p.values.size(); ++k) {
      batch.values(cell_off + k) = p.values(k);
      batch.rows.push_back(p.rows[static_cast<std::size_t>(k)] + row_off);
      batch.cols.push_back(p.cols[static_cast<std::size_t>(k)] + col_off);
    }
    batch.source.segment(col_off, p.n_cols) = p.source;
    batch.target.segment(row_off, p.n_rows) = p.target;
    for (SinkhornProblem::Block b : p.blocks) {
      b.cell_offset += cell_off;
      b.row_offset += row_off;
      b.col_offset += col_off;
      batch.blocks.push_back(b);
    }
    cell_off += static_cast<int>(p.values.size());
    row_off += p.n_rows;
    col_off += p.n_cols;
  }
  batch.n_rows = rows;
  batch.n_cols = cols;
  return batch;
}

SinkhornResult sparse_sinkhorn(const SinkhornProblem& problem, const SinkhornConfig& cfg) {
  SinkhornResult result;
  if (problem.empty()) return result;
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

  const double total_source = problem.source.sum();
  const double total_target = problem.target.sum();
  const double balance_tol = 1e-9 * std::max(1.0, total_source);
  if (std::abs(total_source - total_target) > balance_tol)
    throw std::invalid_argument("sparse_sinkhorn: marginal sums differ");

  const Vector log_source = safe_log(problem.source);
  const Vector log_target = safe_log(problem.target);
  // Kernel of the entropy-regularised problem: the objective rewards only the
  // positive weight parts, so negative cells enter at the slack weight and
  // survive solely as carriers of slack-bound mass until thresholding.
  Vector log_values = problem.eta * problem.values.cwiseMax(0.0);

  result.converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    normalize_segments(log_values, problem.cols, log_source, problem.n_cols);
    normalize_segments(log_values, problem.rows, log_target, problem.n_rows);
    result.iterations = it;
    result.plan = log_values.array().exp();
    result.violation = marginal_violation(result.plan, problem);
    if (cfg.tol > 0.0 && result.violation <= cfg.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Matrix threshold_schedule(const Vector& plan, const SinkhornProblem& problem,
                          int block_index, const Matrix& W_i) {
  const SinkhornProblem::Block& b = problem.blocks.at(static_cast<std::size_t>(block_index));
  if (W_i.rows() != b.base_rows || W_i.cols() != b.base_cols)
    throw std::invalid_argument("threshold_schedule: weight slice shape mismatch");
  Matrix mu = Matrix::Zero(b.base_rows, b.base_cols);
  for (int k = b.cell_offset; k < b.cell_offset + b.cell_count; ++k) {
    const int r = problem.rows[static_cast<std::size_t>(k)] - b.row_offset;
    const int c = problem.cols[static_cast<std::size_t>(k)] - b.col_offset;
    if (r >= b.base_rows || c >= b.base_cols) continue;  // slack
    if (W_i(r, c) > 0.0) mu(r, c) = plan(k);
  }
  return mu;
}

}  // namespace dppsim
