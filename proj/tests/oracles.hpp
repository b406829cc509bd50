#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's assembly or solver code.

#include "gapsbm/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Gaussian elimination with partial pivoting on a dense copy.
inline Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (a(pivot, k) == 0.0) throw std::runtime_error("gauss_solve: singular");
    a.row(k).swap(a.row(pivot));
    std::swap(b[k], b[pivot]);
    for (int i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / a(k, k);
      a.row(i) -= factor * a.row(k);
      b[i] -= factor * b[k];
    }
  }
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    double sum = b[i];
    for (int j = i + 1; j < n; ++j) sum -= a(i, j) * x[j];
    x[i] = sum / a(i, i);
  }
  return x;
}

/// Gradients of the three barycentric functions of a triangle.
inline std::array<Eigen::Vector2d, 3> p1_gradients(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                                   const Eigen::Vector2d& p2) {
  const double twice_area = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
  auto grad = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) -> Eigen::Vector2d {
    // Gradient of the function equal to 1 opposite edge (a, b).
    return Eigen::Vector2d{a.y() - b.y(), b.x() - a.x()} / twice_area;
  };
  return {grad(p1, p2), grad(p2, p0), grad(p0, p1)};
}

/// Textbook P1 Laplace stiffness over the listed triangles, indexed by mesh
/// node.
inline Eigen::MatrixXd p1_laplace_stiffness(const gapsbm::Mesh& mesh, const std::vector<int>& cells) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(mesh.num_nodes(), mesh.num_nodes());
  for (int c : cells) {
    const auto cn = mesh.cell_nodes(c);
    const auto g = p1_gradients(mesh.node(cn[0]), mesh.node(cn[1]), mesh.node(cn[2]));
    const double area = 0.5 * std::abs((mesh.node(cn[1]) - mesh.node(cn[0])).x() * (mesh.node(cn[2]) - mesh.node(cn[0])).y() -
                                       (mesh.node(cn[1]) - mesh.node(cn[0])).y() * (mesh.node(cn[2]) - mesh.node(cn[0])).x());
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) k(cn[a], cn[b]) += area * g[a].dot(g[b]);
    }
  }
  return k;
}

/// Q1 Laplace stiffness of an axis-aligned hx-by-hy rectangle, local nodes
/// counter-clockwise from the lower-left corner, by the closed-form integrals.
inline Eigen::Matrix4d q1_laplace_rectangle(double hx, double hy) {
  // Bilinear hat functions; the integrals of products of 1D pieces are
  // hx/3, hx/6 (mass) and 1/hx, -1/hx (stiffness).
  const int ix[4] = {0, 1, 1, 0};
  const int iy[4] = {0, 0, 1, 1};
  auto mass = [](double h, int a, int b) { return a == b ? h / 3.0 : h / 6.0; };
  auto stiff = [](double h, int a, int b) { return a == b ? 1.0 / h : -1.0 / h; };
  Eigen::Matrix4d k;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      k(a, b) = stiff(hx, ix[a], ix[b]) * mass(hy, iy[a], iy[b]) + mass(hx, ix[a], ix[b]) * stiff(hy, iy[a], iy[b]);
    }
  }
  return k;
}

/// Largest and smallest singular values by the symmetric eigen solver on
/// A^T A (independent of the library's SVD and Lanczos paths).
inline double condition_by_eigen(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.transpose() * a);
  const auto& v = eig.eigenvalues();
  return std::sqrt(v.maxCoeff() / v.minCoeff());
}

}  // namespace oracle
