#pragma once

#include <Eigen/Dense>

#include <vector>

namespace netcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default ratio sigma_min / sigma_max below which a matrix is treated as
/// column-rank deficient.
inline constexpr double kDefaultRankTol = 1e-8;

/// sigma_min / sigma_max over the columns of `a`. Returns 0 when `a` has more
/// columns than rows or is identically zero.
double singular_value_ratio(const Matrix& a);

inline bool has_full_column_rank(const Matrix& a, double tol = kDefaultRankTol) {
  return a.cols() == 0 || singular_value_ratio(a) > tol;
}

/// Columns of `a` listed in `cols`, in that order.
Matrix select_columns(const Matrix& a, const std::vector<Index>& cols);

/// Largest eigenvalue magnitude.
double spectral_radius(const Matrix& a);

/// 2-norm condition number (inf if singular).
double condition_number(const Matrix& a);

}  // namespace netcs
