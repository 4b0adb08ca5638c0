#include "dppsim/simplex.hpp"

#include <stdexcept>

namespace dppsim {

namespace {
constexpr double kPivotTol = 1e-9;
}

SimplexSolution simplex_maximize(const Matrix& A, const Vector& b, const Vector& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex_maximize: dimension mismatch");
  if ((b.array() < 0.0).any())
    throw std::invalid_argument("simplex_maximize: requires b >= 0");

  // Tableau columns: n structural, m slack, 1 rhs. Last row is the objective.
  Matrix T = Matrix::Zero(m + 1, n + m + 1);
  T.topLeftCorner(m, n) = A;
  T.block(0, n, m, m) = Matrix::Identity(m, m);
  T.col(n + m).head(m) = b;
  T.row(m).head(n) = -c.transpose();

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const int max_pivots = 200000;
  for (int pivot = 0; pivot < max_pivots; ++pivot) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (T(m, j) < -kPivotTol) {
        enter = j;
        break;  // Bland: smallest improving index
      }
    }
    if (enter < 0) {
      SimplexSolution sol;
      sol.x = Vector::Zero(n);
      for (int i = 0; i < m; ++i)
        if (basis[i] < n) sol.x(basis[i]) = T(i, n + m);
      sol.objective = T(m, n + m);
      return sol;
    }

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) <= kPivotTol) continue;
      const double ratio = T(i, n + m) / T(i, enter);
      if (leave < 0 || ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw std::runtime_error("simplex_maximize: unbounded objective");

    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = T(i, enter);
      if (factor != 0.0) T.row(i) -= factor * T.row(leave);
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("simplex_maximize: pivot limit exceeded");
}

}  // namespace dppsim
