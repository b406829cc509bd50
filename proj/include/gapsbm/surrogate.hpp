#pragma once

#include "gapsbm/geometry.hpp"
#include "gapsbm/mesh.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace gapsbm {

/// Surrogate boundary edge with the geometry of its extension quad
/// (a1, a2, M(a2), M(a1)) bridging the gap to the true boundary.
struct SurrogateEdge {
  int edge_index = kNone;
  int cell = kNone;        ///< attached active cell
  int local_edge = 0;      ///< local edge index of `edge_index` in `cell`
  std::array<int, 2> nodes{};  ///< a1 -> a2 in the counter-clockwise order of `cell`
  std::array<Vec2, 2> d{};     ///< distance vectors M(a) - a at the endpoints
  std::array<Vec2, 2> ext_points{};
  double length = 0.0;
  double ext_area = 0.0;  ///< shoelace area of the extension quad, made nonnegative
  double H = 0.0;         ///< ext_area / length
  double j = 1.0;         ///< |e_ext| / length
  double h = 0.0;         ///< diameter of the attached cell
  BoundaryKind bc = BoundaryKind::neumann;
  Vec2 n_tilde = Vec2::Zero();       ///< outward unit normal of the surrogate edge
  Vec2 chord_normal = Vec2::Zero();  ///< outward unit normal of e_ext
};

/// Junction of two consecutive surrogate edges at a boundary node, carrying
/// the jump/average data of the lateral gap edge from a to M(a). A node where
/// the active region touches itself at a vertex yields one record per pair.
struct SurrogateNode {
  int node = kNone;
  Vec2 d = Vec2::Zero();
  int incident_count = 0;  ///< embedded surrogate edges meeting at the node
  /// Surrogate edge indices (into SurrogateModel::edges) labelled + and -.
  /// normal_plus is the outward normal of the + side across the lateral edge.
  std::array<int, 2> edges{kNone, kNone};
  std::array<int, 2> cells{kNone, kNone};
  Vec2 normal_plus = Vec2::Zero();
  double h = 0.0;

  /// Jump terms vanish when the node lies on the true boundary.
  bool has_jump() const { return d.norm() > 0.0; }
};

struct SurrogateDiagnostics {
  int inverted_ext_quads = 0;  ///< extension quads whose projections cross (vertices swapped)
  int floating_cells = 0;      ///< cells inside the domain dropped as unanchored islands
  int irregular_nodes = 0;     ///< nodes with other than two incident surrogate edges
  int unpaired_edge_ends = 0;  ///< edge ends left without a partner (no jump term)
  int zero_gap_nodes = 0;
};

struct SurrogateModel {
  int mesh_nodes = 0;
  int mesh_cells = 0;
  std::vector<char> active;        ///< per cell
  std::vector<int> active_cells;
  std::vector<int> active_nodes;   ///< sorted nodes of active cells
  std::vector<int> node_dof;       ///< per mesh node: position in active_nodes or kNone
  std::vector<SurrogateEdge> edges;
  std::vector<SurrogateNode> nodes;
  std::vector<int> outer_dirichlet_nodes;
  SurrogateDiagnostics diagnostics;
  Shape shape;  ///< embedded shape, kept for boundary-data projection

  bool matches(const Mesh& mesh) const {
    return mesh.num_nodes() == mesh_nodes && mesh.num_cells() == mesh_cells;
  }
};

/// Active cells are those with every node in the closed domain. Boundary
/// edges of the active region are either embedded surrogate edges or, when
/// the inactive side leaves the strong box or the mesh, outer perimeter edges.
SurrogateModel build_surrogate(const Mesh& mesh, const Domain& domain);

struct JumpAverage {
  double jump = 0.0;         ///< (g+ - g-).d, coefficient of n+
  Vec2 average = Vec2::Zero();
};

/// Jump of the directional derivative along d and the average gradient from
/// the gradients of the + and - cells at a surrogate node.
JumpAverage node_jump_average(const SurrogateNode& node, const Vec2& grad_plus, const Vec2& grad_minus);

/// Per-edge CSV: edge, cell, endpoints, H, j, bc.
void write_surrogate_csv(const Mesh& mesh, const SurrogateModel& model, std::ostream& out);

}  // namespace gapsbm
