#pragma once

#include "gapsbm/types.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <span>
#include <vector>

namespace gapsbm {

/// Compressed-row matrix: sorted unique column indices per row, no stored zeros.
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

struct SparseSystem {
  CsrMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> constrained;  ///< sorted DOF indices eliminated by apply_strong_dirichlet

  int n() const { return static_cast<int>(rhs.size()); }
  std::vector<int> free_dofs() const;
};

/// Accumulates matrix and right-hand-side contributions in insertion order so
/// that repeated assemblies sum identically.
class SystemBuilder {
 public:
  explicit SystemBuilder(int n);

  void add(int row, int col, double value) { triplets_.emplace_back(row, col, value); }
  void add_rhs(int row, double value) { rhs_[row] += value; }
  int n() const { return static_cast<int>(rhs_.size()); }

  SparseSystem finalize() const;

 private:
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::VectorXd rhs_;
};

/// Symmetric elimination: constrained columns move to the right-hand side and
/// constrained rows become identity rows holding the prescribed values.
SparseSystem apply_strong_dirichlet(const SparseSystem& system, std::span<const int> dofs,
                                    std::span<const double> values);

/// Sparse LU with a fill-reducing column ordering. Throws SingularMatrixError.
Eigen::VectorXd solve(const SparseSystem& system);

/// 2-norm condition number sigma_max / sigma_min; +infinity when singular.
/// Dense SVD up to `dense_limit` unknowns, Lanczos on A^T A and (A^T A)^-1 above.
double condition_number(const CsrMatrix& matrix, int dense_limit = 2000);

/// Condition number of the free-DOF block (identity rows of constrained DOFs removed).
double condition_number(const SparseSystem& system, int dense_limit = 2000);

/// Rows and columns of `matrix` restricted to `dofs`.
CsrMatrix submatrix(const CsrMatrix& matrix, std::span<const int> dofs);

/// max |A - A^T| / max |A|.
double relative_asymmetry(const CsrMatrix& matrix);

/// Cholesky of the symmetric part succeeds.
bool symmetric_part_positive_definite(const CsrMatrix& matrix);

double relative_residual(const SparseSystem& system, const Eigen::VectorXd& x);

/// Plain "row col value" triples, one-based, with a size header line.
void write_matrix_market(const CsrMatrix& matrix, std::ostream& out);

}  // namespace gapsbm
