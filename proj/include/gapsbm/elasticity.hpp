#pragma once

#include "gapsbm/fem.hpp"
#include "gapsbm/linalg.hpp"
#include "gapsbm/poisson.hpp"
#include "gapsbm/surrogate.hpp"

#include <functional>
#include <vector>

namespace gapsbm {

enum class PlaneMode { plane_strain, plane_stress };

struct LameParameters {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Throws std::invalid_argument unless E > 0 and -1 < nu < 0.5.
LameParameters lame_from_E_nu(double E, double nu, PlaneMode mode);

/// Traction datum as a function of the boundary point and outward normal.
using TractionData = std::function<Vec2(const Vec2&, const Vec2&)>;

struct ElasticityProblem {
  double lambda = 0.0;
  double mu = 1.0;
  VectorField body_force;
  VectorField u_D;
  TractionData t_N;
  VectorField outer_dirichlet;
  double theta = -1.0;
  double gamma = 0.0;
  DataPlacement placement = DataPlacement::chord;
  bool eliminate_outer = true;

  void validate() const;
  /// lambda tr(G) I + mu (G + G^T) for a displacement gradient G.
  Mat2 stress(const Mat2& grad) const;
};

/// Unknown 2k + i is component i at active node k (SurrogateModel::node_dof).
SparseSystem assemble_elasticity(const Mesh& mesh, const SurrogateModel& surrogate,
                                 const ElasticityProblem& problem);

/// Nodal displacements indexed by mesh node; inactive nodes hold NaN.
std::vector<Vec2> scatter_vector(const Mesh& mesh, const SurrogateModel& surrogate, const Eigen::VectorXd& x);

std::vector<Vec2> solve_elasticity(const Mesh& mesh, const SurrogateModel& surrogate,
                                   const ElasticityProblem& problem);

}  // namespace gapsbm
