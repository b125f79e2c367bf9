#pragma once

#include "netcs/linalg.hpp"

namespace netcs {

struct LpSolution {
  Vector x;
  double objective = 0.0;
  int iterations = 0;
};

/// Dense two-phase revised simplex for
///
///   min c^T x  subject to  A x = b,  x >= 0.
///
/// Entering and leaving variables follow Bland's rule, so degenerate problems
/// terminate. The basis is refactorised every iteration; problem sizes here are
/// a few dozen rows at most.
///
/// Throws InfeasibleError if the feasible set is empty and SolverError when
/// the problem is unbounded or the iteration limit is hit.
LpSolution solve_lp(const Matrix& A, const Vector& b, const Vector& c, int max_iterations = 0);

}  // namespace netcs
