#include "gapsbm/poisson.hpp"

#include "gap_assembly.hpp"

#include <limits>
#include <stdexcept>

namespace gapsbm {

void PoissonProblem::validate() const {
  if (theta != 1.0 && theta != -1.0) throw std::invalid_argument("PoissonProblem: theta must be +1 or -1");
  if (gamma < 0.0) throw std::invalid_argument("PoissonProblem: gamma must be non-negative");
  if (theta == 1.0 && gamma <= 0.0) throw std::invalid_argument("PoissonProblem: symmetric variant needs gamma > 0");
  if (!f || !u_D || !h_N || !outer_dirichlet) throw std::invalid_argument("PoissonProblem: missing data");
}

SparseSystem assemble_poisson(const Mesh& mesh, const SurrogateModel& surrogate, const PoissonProblem& problem) {
  problem.validate();
  detail::GapForm form;
  form.components = 1;
  form.flux = [](const Mat2& g) { return g; };
  form.source = [&](const Vec2& x) { return Vec2(problem.f(x), 0.0); };
  form.dirichlet = [&](const Vec2& x) { return Vec2(problem.u_D(x), 0.0); };
  form.neumann = [&](const Vec2& x, const Vec2& n) { return Vec2(problem.h_N(x, n), 0.0); };
  form.outer = [&](const Vec2& x) { return Vec2(problem.outer_dirichlet(x), 0.0); };
  form.theta = problem.theta;
  form.gamma = problem.gamma;
  form.placement =
      problem.placement == DataPlacement::chord ? detail::Placement::chord : detail::Placement::projected;
  form.eliminate_outer = problem.eliminate_outer;
  return detail::assemble_gap_form(mesh, surrogate, form);
}

std::vector<double> scatter_scalar(const Mesh& mesh, const SurrogateModel& surrogate, const Eigen::VectorXd& x) {
  std::vector<double> out(mesh.num_nodes(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < surrogate.active_nodes.size(); ++k) out[surrogate.active_nodes[k]] = x[k];
  return out;
}

std::vector<double> solve_poisson(const Mesh& mesh, const SurrogateModel& surrogate, const PoissonProblem& problem) {
  return scatter_scalar(mesh, surrogate, solve(assemble_poisson(mesh, surrogate, problem)));
}

}  // namespace gapsbm
