#include "gapsbm/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace gapsbm {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using LuSolver = Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>;

/// Largest eigenvalue of a symmetric positive semi-definite operator by
/// Lanczos with full reorthogonalization.
double lanczos_largest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, int n) {
  const int max_steps = std::min(n, 300);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = dist(rng);
  q.normalize();

  Eigen::MatrixXd basis(n, max_steps);
  std::vector<double> alpha, beta;
  double previous = 0.0;
  for (int k = 0; k < max_steps; ++k) {
    basis.col(k) = q;
    Eigen::VectorXd w = apply(q);
    alpha.push_back(q.dot(w));
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeff = basis.leftCols(k + 1).transpose() * w;
      w -= basis.leftCols(k + 1) * coeff;
    }
    const double b = w.norm();

    const int m = k + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    const double estimate = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .maxCoeff();
    const bool converged = k > 4 && std::abs(estimate - previous) <= 1e-9 * std::abs(estimate);
    previous = estimate;
    if (converged || b <= 1e-14 * std::abs(estimate)) break;
    beta.push_back(b);
    q = w / b;
  }
  return previous;
}

}  // namespace

std::vector<int> SparseSystem::free_dofs() const {
  std::vector<int> out;
  out.reserve(n());
  std::size_t next = 0;
  for (int i = 0; i < n(); ++i) {
    if (next < constrained.size() && constrained[next] == i) {
      ++next;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

SystemBuilder::SystemBuilder(int n) : rhs_(Eigen::VectorXd::Zero(n)) {
  if (n < 1) throw std::invalid_argument("SystemBuilder: system must have at least one unknown");
}

SparseSystem SystemBuilder::finalize() const {
  SparseSystem out;
  out.matrix.resize(n(), n());
  out.matrix.setFromTriplets(triplets_.begin(), triplets_.end());
  out.matrix.prune(0.0, 0.0);
  out.matrix.makeCompressed();
  out.rhs = rhs_;
  return out;
}

SparseSystem apply_strong_dirichlet(const SparseSystem& system, std::span<const int> dofs,
                                    std::span<const double> values) {
  if (dofs.size() != values.size()) throw std::invalid_argument("apply_strong_dirichlet: size mismatch");
  const int n = system.n();
  std::vector<char> fixed(n, 0);
  Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(n);
  // Previously constrained rows are identity rows holding their value.
  for (int c : system.constrained) {
    fixed[c] = 1;
    prescribed[c] = system.rhs[c];
  }
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (dofs[k] < 0 || dofs[k] >= n) throw std::out_of_range("apply_strong_dirichlet: DOF index");
    fixed[dofs[k]] = 1;
    prescribed[dofs[k]] = values[k];
  }
  SparseSystem out;
  out.rhs = system.rhs;
  std::vector<Eigen::Triplet<double>> kept;
  kept.reserve(system.matrix.nonZeros());
  for (int r = 0; r < n; ++r) {
    if (fixed[r]) continue;
    for (CsrMatrix::InnerIterator it(system.matrix, r); it; ++it) {
      if (fixed[it.col()]) {
        out.rhs[r] -= it.value() * prescribed[it.col()];
      } else {
        kept.emplace_back(r, it.col(), it.value());
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    if (!fixed[r]) continue;
    kept.emplace_back(r, r, 1.0);
    out.constrained.push_back(r);
  }
  for (int r : out.constrained) out.rhs[r] = prescribed[r];
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(kept.begin(), kept.end());
  out.matrix.prune(0.0, 0.0);
  out.matrix.makeCompressed();
  return out;
}

Eigen::VectorXd solve(const SparseSystem& system) {
  if (system.n() < 1 || system.matrix.rows() != system.n() || system.matrix.cols() != system.n()) {
    throw std::invalid_argument("solve: inconsistent system dimensions");
  }
  const ColMatrix a = system.matrix;
  LuSolver lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("solve: " + lu.lastErrorMessage());
  Eigen::VectorXd x = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SingularMatrixError("solve: back substitution failed");
  return x;
}

double condition_number(const CsrMatrix& matrix, int dense_limit) {
  constexpr double kInfinity = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(matrix.rows());
  if (n != matrix.cols() || n == 0) throw std::invalid_argument("condition_number: matrix must be square");
  if (n <= dense_limit) {
    const Eigen::MatrixXd dense = Eigen::MatrixXd(matrix);
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(dense).singularValues();
    const double smax = sv.maxCoeff(), smin = sv.minCoeff();
    if (!(smin > n * std::numeric_limits<double>::epsilon() * smax)) return kInfinity;
    return smax / smin;
  }
  const ColMatrix a = matrix;
  LuSolver lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) return kInfinity;
  const double largest = lanczos_largest([&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return a.transpose() * (a * v);
  }, n);
  const double inverse_largest = lanczos_largest([&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Eigen::VectorXd y = lu.transpose().solve(v);
    return lu.solve(y);
  }, n);
  if (!(inverse_largest > 0.0) || !std::isfinite(inverse_largest)) return kInfinity;
  return std::sqrt(largest * inverse_largest);
}

double condition_number(const SparseSystem& system, int dense_limit) {
  const std::vector<int> free = system.free_dofs();
  if (free.empty()) return 1.0;
  return condition_number(submatrix(system.matrix, free), dense_limit);
}

CsrMatrix submatrix(const CsrMatrix& matrix, std::span<const int> dofs) {
  std::vector<int> position(matrix.cols(), -1);
  for (std::size_t k = 0; k < dofs.size(); ++k) position[dofs[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> kept;
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    for (CsrMatrix::InnerIterator it(matrix, dofs[k]); it; ++it) {
      if (position[it.col()] >= 0) kept.emplace_back(static_cast<int>(k), position[it.col()], it.value());
    }
  }
  CsrMatrix out(static_cast<int>(dofs.size()), static_cast<int>(dofs.size()));
  out.setFromTriplets(kept.begin(), kept.end());
  out.makeCompressed();
  return out;
}

double relative_asymmetry(const CsrMatrix& matrix) {
  const CsrMatrix transposed = matrix.transpose();
  const CsrMatrix diff = matrix - transposed;
  double scale = 0.0, worst = 0.0;
  for (int k = 0; k < matrix.nonZeros(); ++k) scale = std::max(scale, std::abs(matrix.valuePtr()[k]));
  for (int k = 0; k < diff.nonZeros(); ++k) worst = std::max(worst, std::abs(diff.valuePtr()[k]));
  return scale > 0.0 ? worst / scale : 0.0;
}

bool symmetric_part_positive_definite(const CsrMatrix& matrix) {
  const ColMatrix sym = 0.5 * (ColMatrix(matrix) + ColMatrix(matrix.transpose()));
  Eigen::SimplicialLLT<ColMatrix> llt(sym);
  return llt.info() == Eigen::Success;
}

double relative_residual(const SparseSystem& system, const Eigen::VectorXd& x) {
  const double b = system.rhs.norm();
  const double r = (system.matrix * x - system.rhs).norm();
  return b > 0.0 ? r / b : r;
}

void write_matrix_market(const CsrMatrix& matrix, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  out.precision(17);
  for (int r = 0; r < matrix.outerSize(); ++r) {
    for (CsrMatrix::InnerIterator it(matrix, r); it; ++it) {
      out << r + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace gapsbm
