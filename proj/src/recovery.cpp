#include "netcs/recovery.hpp"

#include "netcs/errors.hpp"
#include "netcs/linear_program.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace netcs {

namespace {

// Advances `c` to the next k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

std::vector<int> first_combination(int k) {
  std::vector<int> c(static_cast<size_t>(k));
  std::iota(c.begin(), c.end(), 0);
  return c;
}

Matrix columns(const Matrix& a, const std::vector<int>& cols) {
  Matrix out(a.rows(), static_cast<Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = a.col(cols[c]);
  return out;
}

Vector least_squares(const Matrix& a, const Vector& b) {
  if (a.cols() == 0) return Vector(0);
  return a.completeOrthogonalDecomposition().solve(b);
}

RecoveryResult make_result(const RowSystem& sys, const Vector& x1, double x2, Method method,
                           const UniquenessReport& cert) {
  RecoveryResult r;
  r.row = sys.row;
  r.x1 = x1;
  r.x2 = x2;
  r.method = method;
  r.certificate = cert;
  for (Index c = 0; c < x1.size(); ++c)
    if (x1(c) != 0.0) r.support.push_back(sys.col_map[c]);
  r.residual = relative_residual(sys.A1 * x1 + sys.A2.col(0) * x2 - sys.b, sys.b);
  return r;
}

}  // namespace

double relative_residual(const Vector& r, const Vector& b) {
  return r.norm() / std::max(b.norm(), 1.0);
}

QRSplit qr_split(const Matrix& A2, double rank_tol) {
  const Index m = A2.rows();
  const Index n2 = A2.cols();
  if (n2 < 1) throw ParameterError("qr_split: A2 has no columns");
  if (m < n2) throw ParameterError("qr_split: A2 has fewer rows than columns");
  if (!has_full_column_rank(A2, rank_tol))
    throw CertificateError("qr_split: A2 is not of full column rank");
  const Eigen::HouseholderQR<Matrix> qr(A2);
  const Matrix q = qr.householderQ();
  QRSplit split;
  split.thin = q.leftCols(n2);
  split.null = q.rightCols(m - n2);
  split.R1 = qr.matrixQR().topRows(n2).triangularView<Eigen::Upper>();
  return split;
}

Matrix orthogonal_complement(const Matrix& A2, double rank_tol) {
  const Index m = A2.rows();
  if (A2.cols() >= 1 && m >= A2.cols() && has_full_column_rank(A2, rank_tol))
    return qr_split(A2, rank_tol).null;
  if (A2.cols() == 0) return Matrix::Identity(m, m);
  const Eigen::JacobiSVD<Matrix> svd(A2, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  Index rank = 0;
  if (sv.size() && sv(0) > 0.0)
    for (Index i = 0; i < sv.size(); ++i) rank += sv(i) > rank_tol * sv(0) ? 1 : 0;
  return svd.matrixU().rightCols(m - rank);
}

UniquenessReport check_projected_subsets(const Matrix& projected, int k, double rank_tol) {
  if (k < 1) throw ParameterError("check_uniqueness: k must be at least 1");
  UniquenessReport report;
  const int n1 = static_cast<int>(projected.cols());
  const int size = std::min(2 * k, n1);
  report.all_subsets_ok = true;
  if (size == 0) return report;
  std::vector<int> subset = first_combination(size);
  do {
    ++report.checked_subsets;
    if (singular_value_ratio(columns(projected, subset)) <= rank_tol) {
      report.all_subsets_ok = false;
      report.deficient_subset = subset;
      break;
    }
  } while (next_combination(subset, n1));
  return report;
}

std::optional<std::vector<int>> minimal_deficient_subset(const Matrix& projected, int max_size,
                                                         double rank_tol) {
  const int n = static_cast<int>(projected.cols());
  for (int size = 1; size <= std::min(max_size, n); ++size) {
    std::vector<int> subset = first_combination(size);
    do {
      if (singular_value_ratio(columns(projected, subset)) <= rank_tol) return subset;
    } while (next_combination(subset, n));
  }
  return std::nullopt;
}

UniquenessReport check_uniqueness(const Matrix& A1, const Matrix& A2, int k, double rank_tol) {
  if (A1.rows() != A2.rows()) throw ParameterError("check_uniqueness: A1 and A2 row counts differ");
  const Index m = A1.rows();
  const Index n2 = A2.cols();
  const Matrix projected = orthogonal_complement(A2, rank_tol).transpose() * A1;
  UniquenessReport report = check_projected_subsets(projected, k, rank_tol);
  report.m_ok = m >= 2 * k + n2;
  report.a2_full_rank = n2 >= 1 && m >= n2 && has_full_column_rank(A2, rank_tol);
  return report;
}

L0Outcome solve_l0(const Matrix& A, const Vector& b, int k, const Tolerances& tol) {
  return solve_l0(A, b, k, tol, [](const SparseFit&) { return true; });
}

L0Outcome solve_l0(const Matrix& A, const Vector& b, int k, const Tolerances& tol,
                   const std::function<bool(const SparseFit&)>& accept) {
  if (k < 1) throw ParameterError("solve_l0: k must be at least 1");
  if (A.rows() != b.size()) throw ParameterError("solve_l0: dimension mismatch");
  const int n = static_cast<int>(A.cols());
  if (n < k) throw ParameterError("solve_l0: fewer columns than the sparsity level");

  for (int card = 0; card <= k; ++card) {
    std::vector<SparseFit> fits;
    std::vector<int> subset = first_combination(card);
    do {
      SparseFit fit;
      fit.x = Vector::Zero(n);
      fit.support = subset;
      const Vector xs = least_squares(columns(A, subset), b);
      for (int s = 0; s < card; ++s) fit.x(subset[s]) = xs(s);
      fit.residual = relative_residual(A * fit.x - b, b);
      if (fit.residual < tol.residual && accept(fit)) fits.push_back(std::move(fit));
    } while (card > 0 && next_combination(subset, n));

    if (fits.empty()) continue;
    std::vector<SparseFit> distinct;
    for (auto& f : fits) {
      const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const SparseFit& d) {
        return (d.x - f.x).cwiseAbs().maxCoeff() <= tol.ambiguity;
      });
      if (!seen) distinct.push_back(std::move(f));
    }
    if (distinct.size() == 1) return std::move(distinct.front());
    return AmbiguityReport{card, std::move(distinct)};
  }
  throw InfeasibleError("solve_l0: no solution with at most " + std::to_string(k) +
                        " nonzeros fits the data");
}

Vector solve_x2(const QRSplit& split, const Matrix& A1, const Vector& b, const Vector& x1) {
  const Vector rhs = split.thin.transpose() * (b - A1 * x1);
  return split.R1.triangularView<Eigen::Upper>().solve(rhs);
}

std::string to_string(Method method) {
  return method == Method::L0Exhaustive ? "l0" : "bp";
}

Method method_from_string(const std::string& name) {
  if (name == "l0") return Method::L0Exhaustive;
  if (name == "bp") return Method::BasisPursuit;
  throw ParameterError("unknown method '" + name + "' (expected l0 or bp)");
}

RowOutcome solve_row_prior(const RowSystem& sys, int k, const Tolerances& tol) {
  const UniquenessReport cert = check_uniqueness(sys.A1, sys.A2, k, tol.rank);
  if (!cert.a2_full_rank) {
    // State never perturbed: no P(i,i) column to split off, x2 = 0.
    const L0Outcome plain = solve_l0(sys.A1, sys.b, k, tol);
    if (const auto* fit = std::get_if<SparseFit>(&plain))
      return make_result(sys, fit->x, 0.0, Method::L0Exhaustive, cert);
    RowAmbiguity out;
    out.row = sys.row;
    out.certificate = cert;
    for (const auto& c : std::get<AmbiguityReport>(plain).candidates)
      out.candidates.push_back(make_result(sys, c.x, 0.0, Method::L0Exhaustive, cert));
    return out;
  }
  const QRSplit split = qr_split(sys.A2, tol.rank);
  const Matrix reduced = split.null.transpose() * sys.A1;
  const Vector breduced = split.null.transpose() * sys.b;
  const double a2_norm = sys.A2.norm();
  const double floor = tol.residual * std::max(sys.b.norm(), 1.0);

  // P(i,i) is known to be nonzero.
  auto x2_of = [&](const Vector& x1) { return solve_x2(split, sys.A1, sys.b, x1)(0); };
  auto accept = [&](const SparseFit& f) { return std::abs(x2_of(f.x)) * a2_norm > floor; };

  // When every fit has P(i,i) = 0 the data overrule the prior.
  L0Outcome outcome;
  try {
    outcome = solve_l0(reduced, breduced, k, tol, accept);
  } catch (const InfeasibleError&) {
    outcome = solve_l0(reduced, breduced, k, tol);
  }
  if (const auto* fit = std::get_if<SparseFit>(&outcome))
    return make_result(sys, fit->x, x2_of(fit->x), Method::L0Exhaustive, cert);

  const auto& amb = std::get<AmbiguityReport>(outcome);
  RowAmbiguity out;
  out.row = sys.row;
  out.certificate = cert;
  for (const auto& c : amb.candidates)
    out.candidates.push_back(make_result(sys, c.x, x2_of(c.x), Method::L0Exhaustive, cert));
  return out;
}

Vector basis_pursuit(const Matrix& A, const Vector& b, const Tolerances& tol) {
  return basis_pursuit_weighted(A, b, Vector::Ones(A.cols()), tol);
}

Vector basis_pursuit_weighted(const Matrix& A, const Vector& b, const Vector& weights,
                              const Tolerances& tol) {
  const Index n = A.cols();
  if (A.rows() != b.size() || weights.size() != n)
    throw ParameterError("basis_pursuit: dimension mismatch");
  if ((weights.array() < 0.0).any()) throw ParameterError("basis_pursuit: negative weight");
  if (relative_residual(A * least_squares(A, b) - b, b) >= tol.residual)
    throw InfeasibleError("basis_pursuit: b is not in the range of A");

  // Unpenalised columns are free: project them out, solve for the rest and
  // recover them by least squares.
  std::vector<Index> free_cols;
  std::vector<Index> cost_cols;
  for (Index j = 0; j < n; ++j) (weights(j) == 0.0 ? free_cols : cost_cols).push_back(j);
  const Matrix F = select_columns(A, free_cols);
  Matrix reduced = select_columns(A, cost_cols);
  Vector rhs = b;
  if (!free_cols.empty()) {
    const Matrix complement = orthogonal_complement(F, tol.rank);
    reduced = complement.transpose() * reduced;
    rhs = complement.transpose() * b;
  }
  const Index nc = static_cast<Index>(cost_cols.size());
  Vector xc = Vector::Zero(nc);
  if (nc > 0 && rhs.size() > 0) {
    // x = u - v with u, v >= 0.
    Matrix lp_a(reduced.rows(), 2 * nc);
    lp_a << reduced, -reduced;
    Vector w(nc);
    for (Index c = 0; c < nc; ++c) w(c) = weights(cost_cols[c]);
    Vector lp_c(2 * nc);
    lp_c << w, w;
    const LpSolution lp = solve_lp(lp_a, rhs, lp_c);
    xc = lp.x.head(nc) - lp.x.tail(nc);
  }
  const double cut = tol.threshold * std::max(1.0, nc ? xc.cwiseAbs().maxCoeff() : 0.0);
  for (Index c = 0; c < nc; ++c)
    if (std::abs(xc(c)) < cut) xc(c) = 0.0;

  Vector x = Vector::Zero(n);
  for (Index c = 0; c < nc; ++c) x(cost_cols[c]) = xc(c);
  if (!free_cols.empty()) {
    const Vector xf = least_squares(F, b - select_columns(A, cost_cols) * xc);
    for (size_t f = 0; f < free_cols.size(); ++f) x(free_cols[f]) = xf(static_cast<Index>(f));
  }
  return x;
}

Coherence coherence(const Matrix& A) {
  Coherence out;
  const Vector norms = A.colwise().norm().transpose();
  const double largest = norms.size() ? norms.maxCoeff() : 0.0;
  std::vector<Index> keep;
  for (Index j = 0; j < A.cols(); ++j) {
    if (norms(j) <= 1e-14 * largest || norms(j) == 0.0)
      out.zero_columns.push_back(j);
    else
      keep.push_back(j);
  }
  if (keep.size() < 2) throw ParameterError("coherence: fewer than two nonzero columns");
  Matrix unit(A.rows(), static_cast<Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c)
    unit.col(static_cast<Index>(c)) = A.col(keep[c]) / norms(keep[c]);
  const Matrix gram = unit.transpose() * unit;
  for (Index i = 0; i < gram.rows(); ++i)
    for (Index j = i + 1; j < gram.cols(); ++j) out.mu = std::max(out.mu, std::abs(gram(i, j)));
  return out;
}

std::string to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Recovered:
      return "recovered";
    case RowStatus::Ambiguous:
      return "ambiguous";
    case RowStatus::Failed:
      break;
  }
  return "failed";
}

Reconstruction reconstruct_network(const DataSet& data, int k, Method method,
                                   const Tolerances& tol) {
  const int p = data.p();
  if (k < 1 || k >= p) throw ParameterError("reconstruct_network: need 1 <= k < p");
  Reconstruction out{Matrix::Zero(p, p), Matrix::Zero(p, p), {}};
  for (int i = 0; i < p; ++i) {
    const RowSystem sys = assemble_row_system(data, i);
    RowReport report;
    report.row = i;
    report.method = method;
    try {
      report.certificate = check_uniqueness(sys.A1, sys.A2, k, tol.rank);
      if (method == Method::L0Exhaustive) {
        RowOutcome outcome = solve_row_prior(sys, k, tol);
        if (auto* r = std::get_if<RecoveryResult>(&outcome)) {
          report.status = RowStatus::Recovered;
          report.result = std::move(*r);
        } else {
          auto& amb = std::get<RowAmbiguity>(outcome);
          report.status = RowStatus::Ambiguous;
          report.result = amb.candidates.front();
          report.alternatives.assign(amb.candidates.begin() + 1, amb.candidates.end());
        }
      } else {
        Matrix a(sys.A1.rows(), p);
        a << sys.A1, sys.A2;
        Vector w = Vector::Ones(p);
        w(p - 1) = 0.0;
        const Vector x = basis_pursuit_weighted(a, sys.b, w, tol);
        report.status = RowStatus::Recovered;
        report.result = make_result(sys, x.head(p - 1), x(p - 1), Method::BasisPursuit,
                                    report.certificate);
      }
    } catch (const NumericalError& e) {
      report.status = RowStatus::Failed;
      report.error = e.what();
    }
    if (report.result) {
      for (size_t c = 0; c < sys.col_map.size(); ++c)
        out.Qhat(i, sys.col_map[c]) = report.result->x1(static_cast<Index>(c));
      out.Phat(i, i) = report.result->x2;
    }
    out.rows.push_back(std::move(report));
  }
  return out;
}

std::optional<CompetingSolutions> competing_solutions(const Matrix& A1, const Matrix& A2,
                                                      const UniquenessReport& report,
                                                      double rank_tol) {
  if (!report.deficient_subset) return std::nullopt;
  const std::vector<int>& subset = *report.deficient_subset;
  const int size = static_cast<int>(subset.size());
  const Matrix null = orthogonal_complement(A2, rank_tol);
  const Matrix projected = null.transpose() * columns(A1, subset);
  const Eigen::JacobiSVD<Matrix> svd(projected, Eigen::ComputeFullV);
  const Vector z = svd.matrixV().col(size - 1);

  const int half = (size + 1) / 2;
  CompetingSolutions out;
  out.x1_first = Vector::Zero(A1.cols());
  out.x1_second = Vector::Zero(A1.cols());
  for (int s = 0; s < half; ++s) out.x1_first(subset[s]) = z(s);
  for (int s = half; s < size; ++s) out.x1_second(subset[s]) = -z(s);
  out.x2_first = Vector::Ones(A2.cols());
  out.b = A1 * out.x1_first + A2 * out.x2_first;
  out.x2_second = least_squares(A2, out.b - A1 * out.x1_second);
  return out;
}

}  // namespace netcs
