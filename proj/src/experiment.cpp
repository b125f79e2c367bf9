#include "netcs/experiment.hpp"

#include "netcs/errors.hpp"

#include <algorithm>
#include <string>

namespace netcs {

ExperimentPlan ExperimentPlan::steps(std::vector<int> inputs, double magnitude) {
  ExperimentPlan plan;
  plan.magnitudes.assign(inputs.size(), magnitude);
  plan.inputs = std::move(inputs);
  return plan;
}

void check_plan(const ExperimentPlan& plan, int p) {
  if (plan.inputs.empty()) throw ParameterError("experiment plan has no inputs");
  if (plan.magnitudes.size() != plan.inputs.size())
    throw ParameterError("experiment plan needs one magnitude per input");
  std::vector<int> sorted = plan.inputs;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0 || sorted.back() >= p)
    throw ParameterError("experiment input index out of range 1.." + std::to_string(p));
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParameterError("experiment plan repeats an input");
}

void DataSet::append(const Vector& y, const ExperimentPlan& plan) {
  const Index p = y.size();
  if (Y.size() == 0) {
    Y.resize(p, 0);
    U.resize(p, 0);
    usage.assign(static_cast<size_t>(p), 0);
  }
  const Index m = Y.cols();
  Y.conservativeResize(Eigen::NoChange, m + 1);
  U.conservativeResize(Eigen::NoChange, m + 1);
  Y.col(m) = y;
  U.col(m).setZero();
  for (size_t s = 0; s < plan.inputs.size(); ++s) {
    U(plan.inputs[s], m) = plan.magnitudes[s];
    ++usage[plan.inputs[s]];
  }
  plans.push_back(plan);
}

Matrix steady_transfer(const Network& net) {
  const SteadyGains g = steady_gains(net);
  const Matrix lhs = Matrix::Identity(net.p, net.p) - g.Q0;
  if (condition_number(lhs) > kSingularConditionLimit)
    throw IllPosedNetworkError("I - Q(0) is numerically singular");
  return lhs.fullPivLu().solve(g.P0);
}

Vector steady_response(const Matrix& transfer, const ExperimentPlan& plan) {
  Vector y = Vector::Zero(transfer.rows());
  for (size_t s = 0; s < plan.inputs.size(); ++s)
    y += transfer.col(plan.inputs[s]) * plan.magnitudes[s];
  return y;
}

DataSet simulate(const Network& net, const std::vector<ExperimentPlan>& plans) {
  if (plans.empty()) throw ParameterError("simulate: no experiment plans");
  for (const auto& plan : plans) check_plan(plan, net.p);
  const SteadyGains g = steady_gains(net);
  const Matrix lhs = Matrix::Identity(net.p, net.p) - g.Q0;
  if (condition_number(lhs) > kSingularConditionLimit)
    throw IllPosedNetworkError("I - Q(0) is numerically singular");

  DataSet data;
  Matrix U = Matrix::Zero(net.p, static_cast<Index>(plans.size()));
  for (size_t j = 0; j < plans.size(); ++j)
    for (size_t s = 0; s < plans[j].inputs.size(); ++s)
      U(plans[j].inputs[s], static_cast<Index>(j)) = plans[j].magnitudes[s];
  data.Y = lhs.fullPivLu().solve(g.P0 * U);
  data.U = std::move(U);
  data.plans = plans;
  data.usage.assign(net.p, 0);
  for (const auto& plan : plans)
    for (int i : plan.inputs) ++data.usage[i];
  return data;
}

RowSystem assemble_row_system(const DataSet& data, int i) {
  const int p = data.p();
  if (i < 0 || i >= p)
    throw ParameterError("row index " + std::to_string(i + 1) + " out of range 1.." +
                         std::to_string(p));
  if (data.m() < 1) throw ParameterError("data set has no experiments");
  RowSystem sys;
  sys.row = i;
  sys.A1.resize(data.m(), p - 1);
  for (int j = 0, c = 0; j < p; ++j) {
    if (j == i) continue;
    sys.A1.col(c++) = data.Y.row(j).transpose();
    sys.col_map.push_back(j);
  }
  sys.A2 = data.U.row(i).transpose();
  sys.b = data.Y.row(i).transpose();
  return sys;
}

double ground_truth_residual(const RowSystem& sys, const SteadyGains& gains) {
  Vector x1(static_cast<Index>(sys.col_map.size()));
  for (size_t c = 0; c < sys.col_map.size(); ++c)
    x1(static_cast<Index>(c)) = gains.Q0(sys.row, sys.col_map[c]);
  const Vector r = sys.A1 * x1 + sys.A2.col(0) * gains.P0(sys.row, sys.row) - sys.b;
  return r.norm() / std::max(sys.b.norm(), 1.0);
}

}  // namespace netcs
