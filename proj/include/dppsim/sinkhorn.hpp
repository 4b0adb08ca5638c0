#pragma once

#include <vector>

#include "dppsim/types.hpp"

namespace dppsim {

// One node's link-scheduling transport problem in coordinate-list form, or a
// block-diagonal batch of such problems. Rows correspond to out-links (plus
// an optional zero-weight slack row), columns to commodities (plus an
// optional zero-weight slack column). `source` holds the column-sum targets
// (queues, plus the capacity excess when positive) and `target` the row-sum
// targets (link capacities, plus the queue excess when positive), so the two
// marginals always sum to the same total mass.
struct SinkhornProblem {
  Vector values;          // raw weights per cell; the kernel is exp(eta * values^+)
  std::vector<int> rows;
  std::vector<int> cols;
  int n_rows = 0;
  int n_cols = 0;
  Vector source;          // I: column-sum targets
  Vector target;          // T: row-sum targets
  double eta = 1.0;

  struct Block {
    int cell_offset = 0;
    int cell_count = 0;
    int row_offset = 0;
    int col_offset = 0;
    int base_rows = 0;   // rows excluding the slack row
    int base_cols = 0;   // columns excluding the slack column
    bool slack_row = false;
    bool slack_col = false;
  };
  std::vector<Block> blocks;

  bool empty() const { return values.size() == 0; }
};

struct SinkhornConfig {
  double eta = 0.5;
  int max_iters = 500;
  double tol = 1e-6;  // L1 marginal violation; <= 0 disables early stopping
};

struct SinkhornResult {
  Vector plan;         // aligned with the problem's coordinate lists
  int iterations = 0;
  double violation = 0.0;
  bool converged = true;
};

// Scatter reductions over segment ids (the sparse row/column sums).
Vector segmented_sum(const Vector& values, const std::vector<int>& segments, int n);
Vector segmented_logsumexp(const Vector& values, const std::vector<int>& segments, int n);

// Builds the slack-augmented transport problem for one node from its weight
// slice (out-links x commodities), queue row and capacity row. Negative
// weight entries are retained; they are only zeroed by the final
// thresholding. Returns an empty problem when no out-link has capacity.
SinkhornProblem build_ot_problem(const Matrix& W_i, const Vector& Q_i,
                                 const Vector& kappa_i, double eta);

// Concatenates independent problems into one block-diagonal problem; solving
// the batch is equivalent to solving each block on its own.
SinkhornProblem block_diag_batch(const std::vector<SinkhornProblem>& problems);

// Log-domain Sinkhorn scaling on the sparse kernel exp(eta * values^+):
// alternately matches column sums to `source` and row sums to `target` until
// the worst L1 marginal violation drops below tol. Non-convergence returns
// the last iterate with converged = false rather than throwing.
SinkhornResult sparse_sinkhorn(const SinkhornProblem& problem, const SinkhornConfig& cfg);

// Extracts one block's schedule from a batched plan: slack cells are dropped
// and every entry whose weight is non-positive is zeroed.
Matrix threshold_schedule(const Vector& plan, const SinkhornProblem& problem,
                          int block_index, const Matrix& W_i);

}  // namespace dppsim
