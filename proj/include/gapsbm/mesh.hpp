#pragma once

#include "gapsbm/types.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace gapsbm {

enum class CellKind { tri3, quad4 };

inline int nodes_per_cell(CellKind kind) { return kind == CellKind::tri3 ? 3 : 4; }

/// Mesh edge. `left_cell` traverses the edge from nodes[0] to nodes[1] in
/// its counter-clockwise orientation; `right_cell` is kNone on the boundary.
struct Edge {
  std::array<int, 2> nodes{};
  int left_cell = kNone;
  int right_cell = kNone;

  bool on_boundary() const { return right_cell == kNone; }
};

/// Conforming 2D grid of triangles or quadrilaterals. Immutable once built.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Vec2> nodes, std::vector<int> cell_connectivity, CellKind kind);

  CellKind cell_kind() const { return kind_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()) / nodes_per_cell(kind_); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Vec2& node(int i) const { return nodes_[i]; }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  std::span<const int> cell_nodes(int cell) const;
  /// Edge index of local edge k (from local node k to k+1).
  int cell_edge(int cell, int k) const { return cell_edges_[cell * nodes_per_cell(kind_) + k]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& outer_boundary_edges() const { return boundary_edges_; }

  double cell_area(int cell) const;
  double cell_diameter(int cell) const;
  Vec2 cell_centroid(int cell) const;
  /// Maximum cell diameter.
  double h_global() const { return h_global_; }

 private:
  void build_edges();

  std::vector<Vec2> nodes_;
  std::vector<int> cells_;
  std::vector<int> cell_edges_;
  std::vector<Edge> edges_;
  std::vector<int> boundary_edges_;
  CellKind kind_ = CellKind::tri3;
  double h_global_ = 0.0;
};

/// Structured nx-by-ny grid on the axis-aligned box [lower, upper]. Triangles
/// split each square along alternating diagonals (criss-cross pattern).
Mesh build_rect_grid(CellKind kind, const Vec2& lower, const Vec2& upper, int nx, int ny);

/// Criss-cross triangulation with spacing 1/n, rigidly rotated by `angle`
/// about `pivot`. Unrotated, it is exactly the 2n^2 triangles of [0,1]^2;
/// otherwise the underlying square is enlarged so the rotated grid still
/// covers [0,1]^2 with a margin of one cell.
Mesh build_tri_grid(int n, const Vec2& pivot, double angle);

/// n-by-n unit squares of side 1/n on [0,1]^2.
Mesh build_quad_grid(int n);

double edge_length(const Mesh& mesh, int edge_index);

/// Plain-text listing: node records then cell records, one per line.
void write_mesh_text(const Mesh& mesh, std::ostream& out);

}  // namespace gapsbm
