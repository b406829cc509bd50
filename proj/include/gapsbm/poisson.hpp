#pragma once

#include "gapsbm/fem.hpp"
#include "gapsbm/linalg.hpp"
#include "gapsbm/surrogate.hpp"

#include <functional>
#include <vector>

namespace gapsbm {

/// Where boundary data and normals are sampled for a surrogate quadrature
/// point x: on the straight extension edge at x + d(x) with its normal
/// (chord), or at the closest point of the true boundary with the true
/// normal (projected).
enum class DataPlacement { chord, projected };

/// Neumann datum as a function of the boundary point and outward normal.
using FluxData = std::function<double(const Vec2&, const Vec2&)>;

struct PoissonProblem {
  ScalarField f;
  ScalarField u_D;
  FluxData h_N;
  ScalarField outer_dirichlet;
  double theta = -1.0;
  double gamma = 0.0;
  DataPlacement placement = DataPlacement::chord;
  bool eliminate_outer = true;

  /// gamma >= 0 always; theta = 1 needs gamma > 0.
  void validate() const;
};

/// Unknowns are numbered by SurrogateModel::node_dof.
SparseSystem assemble_poisson(const Mesh& mesh, const SurrogateModel& surrogate, const PoissonProblem& problem);

/// Nodal values indexed by mesh node; inactive nodes hold NaN.
std::vector<double> scatter_scalar(const Mesh& mesh, const SurrogateModel& surrogate, const Eigen::VectorXd& x);

std::vector<double> solve_poisson(const Mesh& mesh, const SurrogateModel& surrogate, const PoissonProblem& problem);

}  // namespace gapsbm
