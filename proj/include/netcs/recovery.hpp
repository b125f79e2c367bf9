#pragma once

#include "netcs/experiment.hpp"
#include "netcs/linalg.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace netcs {

/// Numerical cutoffs shared by the recovery routines.
struct Tolerances {
  double rank = kDefaultRankTol;  // sigma_min / sigma_max
  double residual = 1e-8;         // ||r|| / max(||b||, 1)
  double ambiguity = 1e-6;        // elementwise gap between rival solutions
  double threshold = 1e-6;        // basis pursuit zeroing, relative to max(1, ||x||_inf)
};

/// Residual normalised as ||r|| / max(||b||, 1).
double relative_residual(const Vector& r, const Vector& b);

/// Full QR of A2 = [thin null] [R1; 0].
struct QRSplit {
  Matrix thin;  // m x n2
  Matrix null;  // m x (m - n2)
  Matrix R1;    // n2 x n2, upper triangular
};

/// Throws CertificateError if A2 is not of full column rank, ParameterError
/// if A2 has no columns or more columns than rows.
QRSplit qr_split(const Matrix& A2, double rank_tol = kDefaultRankTol);

/// Orthonormal basis of range(A2)^perp. Unlike qr_split this accepts a
/// rank-deficient A2.
Matrix orthogonal_complement(const Matrix& A2, double rank_tol = kDefaultRankTol);

struct UniquenessReport {
  bool m_ok = false;
  bool a2_full_rank = false;
  bool all_subsets_ok = false;
  /// Lexicographically first rank-deficient subset of A1 columns.
  std::optional<std::vector<int>> deficient_subset;
  long long checked_subsets = 0;

  bool unique() const { return m_ok && a2_full_rank && all_subsets_ok; }
};

/// Sufficient conditions for the (k + n2)-sparse solution of
/// [A1 A2][x1; x2] = b to be unique: m >= 2k + n2, A2 of full column rank,
/// and every min(2k, n1)-column subset of Qnull^T A1 of full column rank.
UniquenessReport check_uniqueness(const Matrix& A1, const Matrix& A2, int k,
                                  double rank_tol = kDefaultRankTol);

/// Subset test only; `projected` is Qnull^T A1. Stops at the first deficient
/// subset in lexicographic order.
UniquenessReport check_projected_subsets(const Matrix& projected, int k,
                                         double rank_tol = kDefaultRankTol);

/// Smallest rank-deficient column subset of `projected` with at most
/// `max_size` columns (lexicographically first at that size), if any.
std::optional<std::vector<int>> minimal_deficient_subset(const Matrix& projected, int max_size,
                                                         double rank_tol = kDefaultRankTol);

struct SparseFit {
  Vector x;
  std::vector<int> support;  // column indices of the system matrix
  double residual = 0.0;
};

/// Two or more equally sparse solutions that disagree.
struct AmbiguityReport {
  int cardinality = 0;
  std::vector<SparseFit> candidates;
};

using L0Outcome = std::variant<SparseFit, AmbiguityReport>;

/// Sparsest solution of A x = b with ||x||_0 <= k by exhaustive support
/// enumeration in increasing cardinality. Supports are fitted by least
/// squares and accepted when the relative residual is below tol.residual.
/// Throws InfeasibleError when no support of size <= k fits.
L0Outcome solve_l0(const Matrix& A, const Vector& b, int k, const Tolerances& tol = {});

/// As above, but fits rejected by `accept` are ignored.
L0Outcome solve_l0(const Matrix& A, const Vector& b, int k, const Tolerances& tol,
                   const std::function<bool(const SparseFit&)>& accept);

/// x2 = R1^{-1} Q1^T (b - A1 x1).
Vector solve_x2(const QRSplit& split, const Matrix& A1, const Vector& b, const Vector& x1);

enum class Method { L0Exhaustive, BasisPursuit };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct RecoveryResult {
  int row = 0;
  Vector x1;                 // ordered like the row system's A1 columns
  double x2 = 0.0;
  std::vector<int> support;  // state indices of nonzero x1 entries
  double residual = 0.0;
  Method method = Method::L0Exhaustive;
  UniquenessReport certificate;
};

struct RowAmbiguity {
  int row = 0;
  std::vector<RecoveryResult> candidates;
  UniquenessReport certificate;
};

using RowOutcome = std::variant<RecoveryResult, RowAmbiguity>;

/// Prior-knowledge pipeline: split off the known-nonzero P(i,i) column,
/// solve the projected k-sparse problem exhaustively, then back-substitute.
/// Candidates with P(i,i) = 0 contradict the prior and are discarded, unless
/// no other candidate fits. Without a P(i,i) column (state never perturbed)
/// x2 is 0 and A1 is solved directly.
RowOutcome solve_row_prior(const RowSystem& sys, int k, const Tolerances& tol = {});

/// min ||x||_1 subject to A x = b.
Vector basis_pursuit(const Matrix& A, const Vector& b, const Tolerances& tol = {});

/// min sum_j w_j |x_j| subject to A x = b, w_j >= 0. A zero weight leaves the
/// coordinate unpenalised.
Vector basis_pursuit_weighted(const Matrix& A, const Vector& b, const Vector& weights,
                              const Tolerances& tol = {});

struct Coherence {
  double mu = 0.0;
  std::vector<Index> zero_columns;
};

/// Mutual coherence over the nonzero columns of A.
Coherence coherence(const Matrix& A);

/// Recovered: one sparsest solution. Ambiguous: several disagree. Failed: a
/// numerical error (kept in RowReport::error).
enum class RowStatus { Recovered, Ambiguous, Failed };

std::string to_string(RowStatus status);

struct RowReport {
  int row = 0;
  RowStatus status = RowStatus::Failed;
  Method method = Method::L0Exhaustive;
  std::optional<RecoveryResult> result;     // first candidate when ambiguous
  std::vector<RecoveryResult> alternatives;  // remaining candidates
  UniquenessReport certificate;
  std::string error;
};

struct Reconstruction {
  Matrix Qhat;
  Matrix Phat;
  std::vector<RowReport> rows;
};

Reconstruction reconstruct_network(const DataSet& data, int k, Method method,
                                   const Tolerances& tol = {});

/// Two distinct sparse solutions sharing one right-hand side, built from the
/// null vector of a rank-deficient column subset.
struct CompetingSolutions {
  Vector b;
  Vector x1_first;
  Vector x2_first;
  Vector x1_second;
  Vector x2_second;
};

/// Requires report.deficient_subset; returns nullopt otherwise.
std::optional<CompetingSolutions> competing_solutions(const Matrix& A1, const Matrix& A2,
                                                      const UniquenessReport& report,
                                                      double rank_tol = kDefaultRankTol);

}  // namespace netcs
