#include "netcs/linear_program.hpp"

#include "netcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace netcs {

namespace {

enum class Exit { Optimal, Unbounded, IterationLimit };

struct Simplex {
  const Matrix& A;
  const Vector& b;
  const Vector& cost;
  std::vector<Index>& basis;
  Index enterable;  // columns [0, enterable) may enter the basis
  int& iterations;
  int max_iterations;

  Vector basic_values() const {
    return select_columns(A, basis).fullPivLu().solve(b);
  }

  Exit run() {
    const Index m = A.rows();
    const bool bounded_below = (cost.array() >= 0.0).all();
    std::vector<char> in_basis(static_cast<size_t>(A.cols()), 0);
    std::vector<char> skip(static_cast<size_t>(A.cols()), 0);
    for (;;) {
      std::fill(in_basis.begin(), in_basis.end(), 0);
      for (Index j : basis) in_basis[j] = 1;

      const Matrix B = select_columns(A, basis);
      const Eigen::FullPivLU<Matrix> lu(B);
      const Vector xb = lu.solve(b);
      Vector cb(m);
      for (Index r = 0; r < m; ++r) cb(r) = cost(basis[r]);
      const Vector y = B.transpose().fullPivLu().solve(cb);

      Index entering = -1;
      for (Index j = 0; j < enterable; ++j) {
        if (in_basis[j] || skip[j]) continue;
        // Relative to the terms of the reduced cost: large duals from a
        // poorly conditioned basis otherwise turn roundoff into pivots.
        const double scale = std::abs(cost(j)) + A.col(j).cwiseAbs().dot(y.cwiseAbs());
        if (cost(j) - A.col(j).dot(y) < -1e-10 * std::max(scale, 1e-300)) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return Exit::Optimal;
      if (iterations >= max_iterations) return Exit::IterationLimit;
      ++iterations;

      const Vector w = lu.solve(A.col(entering));
      const double piv_tol = std::max(1e-9 * w.cwiseAbs().maxCoeff(), 1e-14);
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index r = 0; r < m; ++r) {
        if (w(r) <= piv_tol) continue;
        const double t = std::max(xb(r), 0.0) / w(r);
        if (leave < 0) {
          leave = r;
          best = t;
          continue;
        }
        const double eps = 1e-12 * (1.0 + best);
        if (t < best - eps) {
          leave = r;
          best = t;
        } else if (t <= best + eps && basis[r] < basis[leave]) {
          leave = r;
          best = std::min(best, t);
        }
      }
      if (leave < 0) {
        // With a nonnegative cost no true ray of descent exists; the reduced
        // cost was roundoff.
        if (!bounded_below) return Exit::Unbounded;
        skip[entering] = 1;
        --iterations;
        continue;
      }
      std::fill(skip.begin(), skip.end(), 0);
      basis[leave] = entering;
    }
  }
};

}  // namespace

LpSolution solve_lp(const Matrix& A_in, const Vector& b_in, const Vector& c, int max_iterations) {
  if (A_in.rows() != b_in.size() || A_in.cols() != c.size())
    throw ParameterError("solve_lp: dimension mismatch");
  const Index n = A_in.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(50 * (A_in.rows() + n) + 100);

  // Normalise to b >= 0 and drop empty rows.
  const double b_in_scale = std::max(1.0, b_in.size() ? b_in.cwiseAbs().maxCoeff() : 0.0);
  std::vector<Index> kept;
  for (Index i = 0; i < A_in.rows(); ++i) {
    if (A_in.row(i).cwiseAbs().maxCoeff() == 0.0) {
      if (std::abs(b_in(i)) > 1e-12 * b_in_scale) throw InfeasibleError("solve_lp: 0 = b_i with b_i != 0");
      continue;
    }
    kept.push_back(i);
  }
  const Index m = static_cast<Index>(kept.size());
  Matrix A(m, n + m);
  Vector b(m);
  for (Index r = 0; r < m; ++r) {
    const double sign = b_in(kept[r]) < 0 ? -1.0 : 1.0;
    A.row(r).head(n) = sign * A_in.row(kept[r]);
    b(r) = sign * b_in(kept[r]);
  }
  // Equilibrate: rows to unit max-norm, then structural columns likewise.
  for (Index r = 0; r < m; ++r) {
    const double scale = A.row(r).head(n).cwiseAbs().maxCoeff();
    A.row(r).head(n) /= scale;
    b(r) /= scale;
  }
  Vector col_scale = Vector::Ones(n);
  for (Index j = 0; j < n; ++j) {
    const double scale = A.col(j).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      col_scale(j) = scale;
      A.col(j) /= scale;
    }
  }
  A.rightCols(m).setIdentity();

  const double b_scale = std::max(1.0, m ? b.cwiseAbs().maxCoeff() : 0.0);

  LpSolution sol;
  std::vector<Index> basis(static_cast<size_t>(m));
  for (Index r = 0; r < m; ++r) basis[r] = n + r;

  // Phase 1: minimise the sum of artificials.
  Vector phase1_cost = Vector::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  Simplex first{A, b, phase1_cost, basis, n, sol.iterations, max_iterations};
  const Exit phase1 = first.run();
  if (phase1 == Exit::IterationLimit)
    throw SolverError("solve_lp: phase 1 iteration limit", sol.iterations);
  if (phase1 == Exit::Unbounded)
    throw SolverError("solve_lp: phase 1 lost numerical consistency", sol.iterations);
  {
    const Vector xb = first.basic_values();
    double infeasibility = 0.0;
    for (Index r = 0; r < m; ++r)
      if (basis[r] >= n) infeasibility += std::abs(xb(r));
    if (infeasibility > 1e-9 * b_scale) throw InfeasibleError("solve_lp: constraints are infeasible");
  }

  // Pivot zero-level artificials out where a structural column can replace
  // them; the rest sit on redundant rows and can never move.
  for (Index r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    const Matrix B = select_columns(A, basis);
    const Eigen::FullPivLU<Matrix> lu(B);
    Vector unit = Vector::Zero(m);
    unit(r) = 1.0;
    const Vector row = B.transpose().fullPivLu().solve(unit);  // e_r^T B^{-1}
    Index best = -1;
    double best_mag = 1e-9;
    for (Index j = 0; j < n; ++j) {
      if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
      const double mag = std::abs(row.dot(A.col(j)));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    if (best >= 0) basis[r] = best;
  }

  Vector phase2 = Vector::Zero(n + m);
  phase2.head(n) = c.cwiseQuotient(col_scale);
  Simplex second{A, b, phase2, basis, n, sol.iterations, max_iterations};
  const Exit exit = second.run();
  if (exit == Exit::IterationLimit)
    throw SolverError("solve_lp: phase 2 iteration limit", sol.iterations);
  if (exit == Exit::Unbounded) throw SolverError("solve_lp: objective unbounded", sol.iterations);

  const Vector xb = second.basic_values();
  sol.x = Vector::Zero(n);
  for (Index r = 0; r < m; ++r)
    if (basis[r] < n) sol.x(basis[r]) = std::max(xb(r), 0.0) / col_scale(basis[r]);
  sol.objective = c.dot(sol.x);
  return sol;
}

}  // namespace netcs
