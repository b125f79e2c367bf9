#include "netcs/structure_inference.hpp"

#include "netcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace netcs {

namespace {

constexpr double kSingularLimit = 1e12;

void check_square(const Matrix& a, const char* name) {
  if (a.rows() != a.cols()) throw ParameterError(std::string(name) + " must be square");
}

// Solves (I - Q22) X = rhs, rejecting near-singular systems.
Matrix solve_unperturbed(const Matrix& Q22, const Matrix& rhs) {
  if (Q22.rows() == 0) return Matrix::Zero(0, rhs.cols());
  const Matrix lhs = Matrix::Identity(Q22.rows(), Q22.cols()) - Q22;
  if (condition_number(lhs) > kSingularLimit)
    throw SingularityError("I - Q22 is numerically singular");
  return lhs.fullPivLu().solve(rhs);
}

}  // namespace

Partition Partition::from_perturbed(int p, std::vector<int> perturbed) {
  Partition part;
  std::sort(perturbed.begin(), perturbed.end());
  part.perturbed = std::move(perturbed);
  for (int i = 0; i < p; ++i)
    if (!std::binary_search(part.perturbed.begin(), part.perturbed.end(), i))
      part.unperturbed.push_back(i);
  check_partition(part, p);
  return part;
}

void check_partition(const Partition& part, int p) {
  if (part.perturbed.empty()) throw ParameterError("partition: no perturbed states");
  std::vector<int> seen(static_cast<size_t>(std::max(p, 0)), 0);
  for (const auto* set : {&part.perturbed, &part.unperturbed}) {
    for (int i : *set) {
      if (i < 0 || i >= p) throw ParameterError("partition: state index out of range");
      if (seen[i]++) throw ParameterError("partition: state listed twice");
    }
  }
  if (static_cast<int>(part.perturbed.size() + part.unperturbed.size()) != p)
    throw ParameterError("partition does not cover every state");
}

StructurePattern::StructurePattern(int r, int c, Mark fill)
    : rows(r), cols(c), entries(static_cast<size_t>(r) * c, fill) {}

StructurePattern StructurePattern::from_matrix(const Matrix& a, double zero_tol) {
  StructurePattern out(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j)
      out(i, j) = std::abs(a(i, j)) <= zero_tol ? Mark::Zero : Mark::Nonzero;
  return out;
}

std::string StructurePattern::grid() const {
  std::string s;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) s += ' ';
      s += static_cast<char>((*this)(i, j));
    }
    s += '\n';
  }
  return s;
}

StructurePattern StructurePattern::parse_grid(const std::string& text) {
  std::vector<std::vector<Mark>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<Mark> row;
    for (char ch : line) {
      if (ch == ' ' || ch == '\t' || ch == '\r') continue;
      if (ch != '0' && ch != 'x' && ch != '?')
        throw ParameterError(std::string("pattern grid: unexpected character '") + ch + "'");
      row.push_back(static_cast<Mark>(ch));
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParameterError("pattern grid: ragged rows");
    rows.push_back(std::move(row));
  }
  StructurePattern out(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out(i, j) = rows[i][j];
  return out;
}

Matrix hat_q21(const Matrix& Q0, const Partition& part) {
  check_square(Q0, "Q0");
  check_partition(part, static_cast<int>(Q0.rows()));
  const auto& u = part.unperturbed;
  const auto& pp = part.perturbed;
  return solve_unperturbed(Q0(u, u), Q0(u, pp));
}

ResolutionChange m_dsf(const Matrix& Q0, const Matrix& P0, const Partition& part) {
  check_square(Q0, "Q0");
  check_square(P0, "P0");
  if (Q0.rows() != P0.rows()) throw ParameterError("Q0 and P0 sizes differ");
  check_partition(part, static_cast<int>(Q0.rows()));
  const auto& pp = part.perturbed;
  const auto& u = part.unperturbed;
  for (int i : pp)
    if (P0(i, i) == 0.0) throw ParameterError("P0 is zero at a perturbed state");

  const Matrix qbar = Q0(pp, pp) + Q0(pp, u) * solve_unperturbed(Q0(u, u), Q0(u, pp));
  const Index n = qbar.rows();
  ResolutionChange out{qbar, P0(pp, pp)};
  for (Index i = 0; i < n; ++i) {
    const double scale = 1.0 - qbar(i, i);
    if (std::abs(scale) < 1.0 / kSingularLimit)
      throw SingularityError("I - Diag(Qbar11) is numerically singular");
    out.Qhat11(i, i) = 0.0;
    out.Qhat11.row(i) /= scale;
    out.Phat11.row(i) /= scale;
  }
  return out;
}

ParticularSolution particular_solution(const Matrix& Q0, const Matrix& P0, const Partition& part) {
  const ResolutionChange low = m_dsf(Q0, P0, part);
  const Matrix q21 = hat_q21(Q0, part);
  const Index p = Q0.rows();
  ParticularSolution out{Matrix::Zero(p, p), Matrix::Zero(p, p)};
  out.Qhat(part.perturbed, part.perturbed) = low.Qhat11;
  out.Qhat(part.unperturbed, part.perturbed) = q21;
  out.Phat(part.perturbed, part.perturbed) = low.Phat11;
  return out;
}

StructurePattern constraint_matrix(const StructurePattern& qhat, const Partition& part) {
  const int p = part.p();
  if (qhat.rows != p || qhat.cols != p)
    throw ParameterError("constraint_matrix: pattern must be p x p");
  check_partition(part, p);
  const auto& pert = part.perturbed;
  const auto& unpert = part.unperturbed;

  StructurePattern qc(p, p, Mark::Unknown);
  for (int i = 0; i < p; ++i) qc(i, i) = Mark::Zero;

  // A zero in Qhat1(i, j) rules out the edge k -> i for every unperturbed k
  // that certainly reaches j.
  for (int i = 0; i < p; ++i) {
    for (int k : unpert) {
      if (k == i) continue;
      for (int j : pert) {
        if (j != i && qhat(i, j) == Mark::Zero && qhat(k, j) == Mark::Nonzero) {
          qc(i, k) = Mark::Zero;
          break;
        }
      }
    }
  }

  // Qhat1(i, j) = Q1(i, j) + sum_k Q2(i, k) Qhat21(k, j).
  for (int i = 0; i < p; ++i) {
    for (int j : pert) {
      if (j == i) continue;
      switch (qhat(i, j)) {
        case Mark::Zero:
          qc(i, j) = Mark::Zero;
          break;
        case Mark::Unknown:
          qc(i, j) = Mark::Unknown;
          break;
        case Mark::Nonzero: {
          const bool indirect = std::any_of(unpert.begin(), unpert.end(), [&](int k) {
            return k != i && qc(i, k) != Mark::Zero && qhat(k, j) != Mark::Zero;
          });
          qc(i, j) = indirect ? Mark::Unknown : Mark::Nonzero;
          break;
        }
      }
    }
  }
  return qc;
}

}  // namespace netcs
