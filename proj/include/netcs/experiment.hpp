#pragma once

#include "netcs/linalg.hpp"
#include "netcs/network_model.hpp"

#include <vector>

namespace netcs {

/// Step inputs applied in one steady-state experiment (0-based state indices).
struct ExperimentPlan {
  std::vector<int> inputs;
  std::vector<double> magnitudes;

  /// All magnitudes equal to `magnitude`.
  static ExperimentPlan steps(std::vector<int> inputs, double magnitude = 1.0);
};

/// Throws ParameterError unless the plan is nonempty, has matching magnitudes
/// and distinct indices in [0, p).
void check_plan(const ExperimentPlan& plan, int p);

/// Concatenated steady-state data, one column per experiment.
struct DataSet {
  Matrix Y;  // p x m
  Matrix U;  // p x m
  std::vector<int> usage;
  std::vector<ExperimentPlan> plans;

  int p() const { return static_cast<int>(Y.rows()); }
  int m() const { return static_cast<int>(Y.cols()); }

  /// Appends experiments; usage counts follow.
  void append(const Vector& y, const ExperimentPlan& plan);
};

/// Per-row sensing problem [A1 A2] [x1; x2] = b with x1 the off-diagonal row
/// of Q and x2 = P(i,i).
struct RowSystem {
  int row = 0;
  Matrix A1;  // m x (p-1)
  Matrix A2;  // m x 1
  Vector b;
  std::vector<int> col_map;  // A1 column -> state index
};

inline constexpr double kSingularConditionLimit = 1e12;

/// Y(:,j) = (I - Q0)^{-1} P0 U(:,j) for every plan.
DataSet simulate(const Network& net, const std::vector<ExperimentPlan>& plans);

/// Single-experiment form of simulate() for a precomputed transfer matrix
/// (I - Q0)^{-1} P0.
Vector steady_response(const Matrix& transfer, const ExperimentPlan& plan);

/// (I - Q0)^{-1} P0; throws IllPosedNetworkError when cond(I - Q0) > 1e12.
Matrix steady_transfer(const Network& net);

RowSystem assemble_row_system(const DataSet& data, int i);

/// Relative residual of the true (Q0, P0) in the row system of row i.
double ground_truth_residual(const RowSystem& sys, const SteadyGains& gains);

}  // namespace netcs
