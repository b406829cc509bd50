#include "gapsbm/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace gapsbm;

namespace {

SparseSystem from_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  SystemBuilder builder(static_cast<int>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) builder.add(i, j, a(i, j));
    }
    builder.add_rhs(i, b[i]);
  }
  return builder.finalize();
}

/// Random diagonally dominant nonsymmetric matrix with a sparse pattern.
Eigen::MatrixXd random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 3); j < std::min(n, i + 4); ++j) a(i, j) = u(rng);
    a(i, i) = 8.0 + u(rng);
  }
  return a;
}

}  // namespace

TEST(Solve, TwoByTwo) {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 3;
  const Eigen::VectorXd x = solve(from_dense(a, Eigen::Vector2d(3, 5)));
  EXPECT_NEAR(x[0], 0.8, 1e-15);
  EXPECT_NEAR(x[1], 1.4, 1e-15);
}

TEST(Solve, MatchesDenseGaussianElimination) {
  const Eigen::MatrixXd a = random_matrix(60, 1);
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(60, -1.0, 2.0);
  const SparseSystem system = from_dense(a, b);
  const Eigen::VectorXd x = solve(system);
  EXPECT_LE((x - oracle::gauss_solve(a, b)).norm(), 1e-12 * x.norm());
  EXPECT_LE(relative_residual(system, x), 1e-14);
}

TEST(Solve, SingularThrows) {
  Eigen::MatrixXd a(3, 3);
  a << 1, 2, 3, 2, 4, 6, 0, 0, 1;
  EXPECT_THROW(solve(from_dense(a, Eigen::Vector3d(1, 1, 1))), SingularMatrixError);
}

TEST(SystemBuilder, SumsDuplicatesAndDropsZeros) {
  SystemBuilder builder(3);
  builder.add(0, 0, 1.0);
  builder.add(0, 0, 2.0);
  builder.add(1, 2, 1.5);
  builder.add(1, 2, -1.5);
  builder.add(2, 1, 0.0);
  builder.add_rhs(2, 4.0);
  const SparseSystem s = builder.finalize();
  EXPECT_EQ(s.matrix.nonZeros(), 1);
  EXPECT_EQ(s.matrix.coeff(0, 0), 3.0);
  EXPECT_EQ(s.rhs[2], 4.0);
  EXPECT_THROW(SystemBuilder(0), std::invalid_argument);
}

TEST(StrongDirichlet, MatchesLagrangeMultipliers) {
  const int n = 40;
  const Eigen::MatrixXd a = random_matrix(n, 2);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  const std::vector<int> dofs{0, 7, 19, 39};
  const std::vector<double> values{1.0, -2.0, 0.5, 3.0};

  const SparseSystem reduced = apply_strong_dirichlet(from_dense(a, b), dofs, values);
  EXPECT_EQ(reduced.constrained, dofs);
  const Eigen::VectorXd x = solve(reduced);

  const int m = static_cast<int>(dofs.size());
  Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(n + m, n + m);
  Eigen::VectorXd rhs(n + m);
  saddle.topLeftCorner(n, n) = a;
  rhs.head(n) = b;
  for (int k = 0; k < m; ++k) {
    saddle(dofs[k], n + k) = 1.0;
    saddle(n + k, dofs[k]) = 1.0;
    rhs[n + k] = values[k];
  }
  const Eigen::VectorXd expected = oracle::gauss_solve(saddle, rhs).head(n);
  EXPECT_LE((x - expected).norm(), 1e-12 * expected.norm());
  for (int k = 0; k < m; ++k) EXPECT_EQ(x[dofs[k]], values[k]);
}

TEST(StrongDirichlet, KeepsSymmetryAndRejectsBadInput) {
  Eigen::MatrixXd a = random_matrix(20, 3);
  a = (a + a.transpose()).eval();
  const SparseSystem s = from_dense(a, Eigen::VectorXd::Ones(20));
  const std::vector<int> dofs{3, 11};
  const std::vector<double> values{1.0, 2.0};
  EXPECT_EQ(relative_asymmetry(apply_strong_dirichlet(s, dofs, values).matrix), 0.0);
  const std::vector<double> short_values{1.0};
  EXPECT_THROW(apply_strong_dirichlet(s, dofs, short_values), std::invalid_argument);
  const std::vector<int> bad{20};
  EXPECT_THROW(apply_strong_dirichlet(s, bad, short_values), std::out_of_range);
}

TEST(ConditionNumber, Identity) {
  CsrMatrix eye(50, 50);
  eye.setIdentity();
  EXPECT_NEAR(condition_number(eye), 1.0, 1e-12);
  EXPECT_NEAR(condition_number(eye, 10), 1.0, 1e-8);
}

TEST(ConditionNumber, DenseAndLanczosAgreeWithEigenOracle) {
  for (unsigned seed : {4u, 5u}) {
    const Eigen::MatrixXd a = random_matrix(120, seed);
    const CsrMatrix sparse = from_dense(a, Eigen::VectorXd::Zero(120)).matrix;
    const double expected = oracle::condition_by_eigen(a);
    EXPECT_NEAR(condition_number(sparse), expected, 1e-10 * expected);
    EXPECT_NEAR(condition_number(sparse, 50), expected, 1e-6 * expected);
  }
}

TEST(ConditionNumber, SingularIsInfinite) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  a(3, 3) = 0.0;
  EXPECT_TRUE(std::isinf(condition_number(from_dense(a, Eigen::VectorXd::Zero(4)).matrix)));
}

TEST(ConditionNumber, FreeBlockIgnoresConstrainedRows) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a << 4, 1, 0, 1, 3, 0, 5, 5, 100;
  const std::vector<int> dofs{2};
  const std::vector<double> values{0.0};
  const SparseSystem s = apply_strong_dirichlet(from_dense(a, Eigen::VectorXd::Zero(3)), dofs, values);
  EXPECT_NEAR(condition_number(s), oracle::condition_by_eigen(a.topLeftCorner(2, 2)), 1e-12);
}

TEST(Diagnostics, AsymmetryAndDefiniteness) {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, -1, 2;
  const CsrMatrix m = from_dense(a, Eigen::VectorXd::Zero(2)).matrix;
  EXPECT_NEAR(relative_asymmetry(m), 1.0, 1e-15);
  EXPECT_TRUE(symmetric_part_positive_definite(m));
  a << 1, 3, 3, 1;
  EXPECT_FALSE(symmetric_part_positive_definite(from_dense(a, Eigen::VectorXd::Zero(2)).matrix));
}

TEST(Submatrix, PicksRowsAndColumns) {
  Eigen::MatrixXd a(3, 3);
  a << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const std::vector<int> keep{0, 2};
  const Eigen::MatrixXd sub(submatrix(from_dense(a, Eigen::VectorXd::Zero(3)).matrix, keep));
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 3, 7, 9;
  EXPECT_EQ(sub, expected);
}

TEST(MatrixMarket, WritesOneBasedTriples) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0, -2.5, 4;
  std::ostringstream out;
  write_matrix_market(from_dense(a, Eigen::VectorXd::Zero(2)).matrix, out);
  EXPECT_EQ(out.str(), "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 1 -2.5\n2 2 4\n");
}
