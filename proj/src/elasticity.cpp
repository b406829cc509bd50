#include "gapsbm/elasticity.hpp"

#include "gap_assembly.hpp"

#include <limits>
#include <stdexcept>

namespace gapsbm {

LameParameters lame_from_E_nu(double E, double nu, PlaneMode mode) {
  if (!(E > 0.0)) throw std::invalid_argument("lame_from_E_nu: E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("lame_from_E_nu: nu must lie in (-1, 0.5)");
  const double mu = E / (2.0 * (1.0 + nu));
  const double lambda = mode == PlaneMode::plane_strain ? E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu))
                                                        : E * nu / ((1.0 + nu) * (1.0 - nu));
  return {lambda, mu};
}

void ElasticityProblem::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("ElasticityProblem: mu must be positive");
  if (lambda < 0.0) throw std::invalid_argument("ElasticityProblem: lambda must be non-negative");
  if (theta != 1.0 && theta != -1.0) throw std::invalid_argument("ElasticityProblem: theta must be +1 or -1");
  if (gamma < 0.0) throw std::invalid_argument("ElasticityProblem: gamma must be non-negative");
  if (theta == 1.0 && gamma <= 0.0) throw std::invalid_argument("ElasticityProblem: symmetric variant needs gamma > 0");
  if (!body_force || !u_D || !t_N || !outer_dirichlet) throw std::invalid_argument("ElasticityProblem: missing data");
}

Mat2 ElasticityProblem::stress(const Mat2& grad) const {
  return lambda * grad.trace() * Mat2::Identity() + mu * (grad + grad.transpose());
}

SparseSystem assemble_elasticity(const Mesh& mesh, const SurrogateModel& surrogate,
                                 const ElasticityProblem& problem) {
  problem.validate();
  detail::GapForm form;
  form.components = 2;
  form.flux = [&](const Mat2& g) { return problem.stress(g); };
  form.source = problem.body_force;
  form.dirichlet = problem.u_D;
  form.neumann = problem.t_N;
  form.outer = problem.outer_dirichlet;
  form.theta = problem.theta;
  form.gamma = problem.gamma;
  form.placement =
      problem.placement == DataPlacement::chord ? detail::Placement::chord : detail::Placement::projected;
  form.eliminate_outer = problem.eliminate_outer;
  return detail::assemble_gap_form(mesh, surrogate, form);
}

std::vector<Vec2> scatter_vector(const Mesh& mesh, const SurrogateModel& surrogate, const Eigen::VectorXd& x) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Vec2> out(mesh.num_nodes(), Vec2(nan, nan));
  for (std::size_t k = 0; k < surrogate.active_nodes.size(); ++k) {
    out[surrogate.active_nodes[k]] = Vec2(x[2 * k], x[2 * k + 1]);
  }
  return out;
}

std::vector<Vec2> solve_elasticity(const Mesh& mesh, const SurrogateModel& surrogate,
                                   const ElasticityProblem& problem) {
  return scatter_vector(mesh, surrogate, solve(assemble_elasticity(mesh, surrogate, problem)));
}

}  // namespace gapsbm
