#pragma once

#include "dppsim/types.hpp"

namespace dppsim {

struct SimplexSolution {
  Vector x;
  double objective = 0.0;
};

// Primal simplex for max c.x subject to A x <= b, x >= 0 with b >= 0 (the
// slack basis is immediately feasible, so no phase-1 is needed). Bland's rule
// on both the entering and leaving choices rules out cycling. Intended for
// the tiny transportation-structured instances the oracles solve.
SimplexSolution simplex_maximize(const Matrix& A, const Vector& b, const Vector& c);

}  // namespace dppsim
