#pragma once

#include "netcs/linalg.hpp"

#include <string>
#include <vector>

namespace netcs {

/// Split of the states into those driven by inputs and the rest.
struct Partition {
  std::vector<int> perturbed;
  std::vector<int> unperturbed;

  /// Complement of `perturbed` in [0, p), both sorted ascending.
  static Partition from_perturbed(int p, std::vector<int> perturbed);

  int p() const { return static_cast<int>(perturbed.size() + unperturbed.size()); }
};

/// Throws ParameterError unless the sets are disjoint, cover [0, p) and the
/// perturbed set is nonempty.
void check_partition(const Partition& part, int p);

enum class Mark : char { Zero = '0', Nonzero = 'x', Unknown = '?' };

struct StructurePattern {
  int rows = 0;
  int cols = 0;
  std::vector<Mark> entries;  // row-major

  StructurePattern() = default;
  StructurePattern(int rows, int cols, Mark fill = Mark::Unknown);

  Mark operator()(int i, int j) const { return entries[static_cast<size_t>(i) * cols + j]; }
  Mark& operator()(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }

  /// Zero where |a(i,j)| <= zero_tol, Nonzero elsewhere.
  static StructurePattern from_matrix(const Matrix& a, double zero_tol = 1e-9);

  /// One line per row, space separated marks: "0 0 x 0".
  std::string grid() const;
  static StructurePattern parse_grid(const std::string& text);

  friend bool operator==(const StructurePattern&, const StructurePattern&) = default;
};

struct ResolutionChange {
  Matrix Qhat11;
  Matrix Phat11;
};

/// DSF of the perturbed states alone (unperturbed states become latent):
///   Qbar = Q11 + Q12 (I - Q22)^{-1} Q21,  D = Diag(Qbar),
///   Qhat11 = (I - D)^{-1} (Qbar - D),     Phat11 = (I - D)^{-1} P11.
ResolutionChange m_dsf(const Matrix& Q0, const Matrix& P0, const Partition& part);

/// (I - Q22)^{-1} Q21: rows unperturbed, columns perturbed.
Matrix hat_q21(const Matrix& Q0, const Partition& part);

struct ParticularSolution {
  Matrix Qhat;
  Matrix Phat;
};

/// Solution in which unperturbed states have no outgoing edges, in the
/// original state order.
ParticularSolution particular_solution(const Matrix& Q0, const Matrix& P0,
                                       const Partition& part);

/// Constraints on the true Q implied by the identifiable low-resolution
/// structure. `qhat_pattern` is the p x p pattern of the particular solution;
/// only its perturbed columns are read.
StructurePattern constraint_matrix(const StructurePattern& qhat_pattern, const Partition& part);

}  // namespace netcs
