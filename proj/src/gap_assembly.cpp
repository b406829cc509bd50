#include "gap_assembly.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace gapsbm::detail {

namespace {

Mat2 unit_tensor(int component, const Vec2& grad) {
  Mat2 g = Mat2::Zero();
  g.row(component) = grad.transpose();
  return g;
}

double contract(const Mat2& a, const Mat2& b) { return a.cwiseProduct(b).sum(); }

/// One shape function times one unit component, evaluated at a point.
struct LocalShape {
  int dof = 0;
  int component = 0;
  double value = 0.0;
  Mat2 grad = Mat2::Zero();
  Mat2 flux = Mat2::Zero();
};

class Assembler {
 public:
  Assembler(const Mesh& mesh, const SurrogateModel& surrogate, const GapForm& form)
      : mesh_(mesh),
        surrogate_(surrogate),
        form_(form),
        builder_(form.components * static_cast<int>(surrogate.active_nodes.size())) {}

  SparseSystem run() {
    bulk();
    for (const SurrogateEdge& se : surrogate_.edges) edge(se);
    for (const SurrogateNode& sn : surrogate_.nodes) {
      if (sn.has_jump()) node(sn);
    }
    SparseSystem system = builder_.finalize();
    if (!form_.eliminate_outer || surrogate_.outer_dirichlet_nodes.empty()) return system;

    std::vector<int> dofs;
    std::vector<double> values;
    for (int n : surrogate_.outer_dirichlet_nodes) {
      const Vec2 g = form_.outer(mesh_.node(n));
      for (int i = 0; i < form_.components; ++i) {
        dofs.push_back(form_.components * surrogate_.node_dof[n] + i);
        values.push_back(g[i]);
      }
    }
    return apply_strong_dirichlet(system, dofs, values);
  }

 private:
  std::vector<LocalShape> shapes(int cell, const BasisValues& bv) const {
    std::vector<LocalShape> out;
    const auto cn = mesh_.cell_nodes(cell);
    for (int k = 0; k < bv.count; ++k) {
      for (int i = 0; i < form_.components; ++i) {
        LocalShape s;
        s.dof = form_.components * surrogate_.node_dof[cn[k]] + i;
        s.component = i;
        s.value = bv.value[k];
        s.grad = unit_tensor(i, bv.grad[k]);
        s.flux = form_.flux(s.grad);
        out.push_back(s);
      }
    }
    return out;
  }

  void bulk() {
    const QuadratureRule rule = cell_quadrature(mesh_.cell_kind(), 3);
    for (int c : surrogate_.active_cells) {
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const BasisValues bv = evaluate_basis(mesh_, c, rule.points[q]);
        const double w = rule.weights[q] * std::abs(bv.det_jacobian);
        const std::vector<LocalShape> local = shapes(c, bv);
        const Vec2 f = form_.source(bv.point);
        for (const LocalShape& a : local) {
          builder_.add_rhs(a.dof, w * a.value * f[a.component]);
          for (const LocalShape& b : local) builder_.add(a.dof, b.dof, w * contract(b.flux, a.grad));
        }
      }
    }
  }

  void edge(const SurrogateEdge& se) {
    const QuadratureRule rule = edge_quadrature(2);
    const CellKind kind = mesh_.cell_kind();
    const int nv = nodes_per_cell(kind);
    const Vec2 r0 = reference_vertex(kind, se.local_edge);
    const Vec2 r1 = reference_vertex(kind, (se.local_edge + 1) % nv);
    const Vec2& a1 = mesh_.node(se.nodes[0]);
    const Vec2& a2 = mesh_.node(se.nodes[1]);

    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double t = 0.5 * (1.0 + rule.points[q].x());
      const double w = 0.5 * se.length * rule.weights[q];
      const BasisValues bv = evaluate_basis(mesh_, se.cell, r0 + t * (r1 - r0));
      const Vec2 x = (1.0 - t) * a1 + t * a2;
      const Vec2 d = (1.0 - t) * se.d[0] + t * se.d[1];
      const std::vector<LocalShape> local = shapes(se.cell, bv);

      // Gap volume term, collapsed onto the surrogate edge.
      const Vec2 f = form_.source(x);
      for (const LocalShape& a : local) {
        builder_.add_rhs(a.dof, w * se.H * a.value * f[a.component]);
        for (const LocalShape& b : local) builder_.add(a.dof, b.dof, w * se.H * contract(b.flux, a.grad));
      }

      Vec2 y = x + d;
      Vec2 n = se.chord_normal;
      if (form_.placement == Placement::projected) {
        const ProjectionResult pr = project(surrogate_.shape, x);
        y = pr.point;
        n = pr.normal;
      }
      const double wj = w * se.j;

      std::vector<Vec2> shifted(local.size());
      for (std::size_t k = 0; k < local.size(); ++k) {
        Vec2 s = Vec2::Zero();
        s[local[k].component] = local[k].value;
        shifted[k] = s + local[k].grad * d;
      }

      if (se.bc == BoundaryKind::neumann) {
        const Vec2 h = form_.neumann(y, n);
        for (std::size_t k = 0; k < local.size(); ++k) builder_.add_rhs(local[k].dof, wj * shifted[k].dot(h));
        continue;
      }

      const Vec2 g = form_.dirichlet(y);
      const double penalty = form_.gamma / se.h;
      for (std::size_t ka = 0; ka < local.size(); ++ka) {
        const LocalShape& a = local[ka];
        const Vec2 traction_a = a.flux * n;
        builder_.add_rhs(a.dof, wj * (-form_.theta * traction_a.dot(g) + penalty * shifted[ka].dot(g)));
        for (std::size_t kb = 0; kb < local.size(); ++kb) {
          const LocalShape& b = local[kb];
          const double value = -shifted[ka].dot(b.flux * n) - form_.theta * traction_a.dot(shifted[kb]) +
                               penalty * shifted[ka].dot(shifted[kb]);
          builder_.add(a.dof, b.dof, wj * value);
        }
      }
    }
  }

  /// Gradients at `node_index` of the shape functions of `cell`.
  void node_gradients(int cell, int node_index, std::vector<int>& nodes, std::vector<Vec2>& grads) const {
    const auto cn = mesh_.cell_nodes(cell);
    const auto it = std::find(cn.begin(), cn.end(), node_index);
    const int local = static_cast<int>(it - cn.begin());
    const BasisValues bv = evaluate_basis(mesh_, cell, reference_vertex(mesh_.cell_kind(), local));
    nodes.assign(cn.begin(), cn.end());
    grads.assign(bv.grad.begin(), bv.grad.begin() + bv.count);
  }

  void node(const SurrogateNode& sn) {
    std::vector<int> plus_nodes, minus_nodes;
    std::vector<Vec2> plus_grads, minus_grads;
    node_gradients(sn.cells[0], sn.node, plus_nodes, plus_grads);
    node_gradients(sn.cells[1], sn.node, minus_nodes, minus_grads);

    // Union of the two cells' nodes with the gradient of each shape function
    // on either side (zero where the node does not belong to the cell).
    std::vector<int> nodes = plus_nodes;
    for (int m : minus_nodes) {
      if (std::find(nodes.begin(), nodes.end(), m) == nodes.end()) nodes.push_back(m);
    }
    const double dn = sn.d.norm();
    const double penalty = form_.gamma / (4.0 * sn.h) * dn;

    struct JumpShape {
      int dof;
      Vec2 jump;          ///< (G+ - G-) d
      Vec2 avg_traction;  ///< flux of the average gradient times n+
    };
    std::vector<JumpShape> local;
    for (int node_index : nodes) {
      Vec2 gp = Vec2::Zero(), gm = Vec2::Zero();
      for (std::size_t k = 0; k < plus_nodes.size(); ++k) {
        if (plus_nodes[k] == node_index) gp = plus_grads[k];
      }
      for (std::size_t k = 0; k < minus_nodes.size(); ++k) {
        if (minus_nodes[k] == node_index) gm = minus_grads[k];
      }
      const JumpAverage ja = node_jump_average(sn, gp, gm);
      for (int i = 0; i < form_.components; ++i) {
        Vec2 jump = Vec2::Zero();
        jump[i] = ja.jump;
        local.push_back({form_.components * surrogate_.node_dof[node_index] + i, jump,
                         form_.flux(unit_tensor(i, ja.average)) * sn.normal_plus});
      }
    }
    for (const JumpShape& a : local) {
      for (const JumpShape& b : local) {
        const double value = -0.5 * dn * (a.jump.dot(b.avg_traction) + form_.theta * a.avg_traction.dot(b.jump)) +
                             penalty * a.jump.dot(b.jump);
        builder_.add(a.dof, b.dof, value);
      }
    }
  }

  const Mesh& mesh_;
  const SurrogateModel& surrogate_;
  const GapForm& form_;
  SystemBuilder builder_;
};

}  // namespace

SparseSystem assemble_gap_form(const Mesh& mesh, const SurrogateModel& surrogate, const GapForm& form) {
  if (!surrogate.matches(mesh)) throw std::invalid_argument("assemble: surrogate was built from a different mesh");
  if (!form.flux || !form.source || !form.dirichlet || !form.neumann || !form.outer) {
    throw std::invalid_argument("assemble: problem data not provided");
  }
  return Assembler(mesh, surrogate, form).run();
}

}  // namespace gapsbm::detail
