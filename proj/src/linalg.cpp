#include "netcs/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <limits>

namespace netcs {

double singular_value_ratio(const Matrix& a) {
  if (a.cols() == 0) return 1.0;
  if (a.rows() < a.cols()) return 0.0;
  const Vector sv = a.jacobiSvd().singularValues();
  const double smax = sv(0);
  if (smax == 0.0) return 0.0;
  return sv(sv.size() - 1) / smax;
}

Matrix select_columns(const Matrix& a, const std::vector<Index>& cols) {
  Matrix out(a.rows(), static_cast<Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = a.col(cols[c]);
  return out;
}

double spectral_radius(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double condition_number(const Matrix& a) {
  const Vector sv = a.jacobiSvd().singularValues();
  if (sv.size() == 0) return 1.0;
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace netcs
