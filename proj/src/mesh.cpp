#include "gapsbm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace gapsbm {

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<int> cell_connectivity, CellKind kind)
    : nodes_(std::move(nodes)), cells_(std::move(cell_connectivity)), kind_(kind) {
  const int npc = nodes_per_cell(kind_);
  if (cells_.size() % npc != 0) {
    throw std::invalid_argument("Mesh: connectivity size is not a multiple of the cell size");
  }
  for (int idx : cells_) {
    if (idx < 0 || idx >= num_nodes()) throw std::invalid_argument("Mesh: node index out of range");
  }
  for (int c = 0; c < num_cells(); ++c) {
    if (!(cell_area(c) > 0.0)) throw std::invalid_argument("Mesh: cell with non-positive area");
    h_global_ = std::max(h_global_, cell_diameter(c));
  }
  build_edges();
}

std::span<const int> Mesh::cell_nodes(int cell) const {
  const int npc = nodes_per_cell(kind_);
  return {cells_.data() + static_cast<std::size_t>(cell) * npc, static_cast<std::size_t>(npc)};
}

double Mesh::cell_area(int cell) const {
  const auto cn = cell_nodes(cell);
  double twice = 0.0;
  for (std::size_t k = 0; k < cn.size(); ++k) {
    twice += cross(nodes_[cn[k]], nodes_[cn[(k + 1) % cn.size()]]);
  }
  return 0.5 * twice;
}

double Mesh::cell_diameter(int cell) const {
  const auto cn = cell_nodes(cell);
  double diam = 0.0;
  for (std::size_t a = 0; a < cn.size(); ++a) {
    for (std::size_t b = a + 1; b < cn.size(); ++b) {
      diam = std::max(diam, (nodes_[cn[a]] - nodes_[cn[b]]).norm());
    }
  }
  return diam;
}

Vec2 Mesh::cell_centroid(int cell) const {
  Vec2 sum = Vec2::Zero();
  const auto cn = cell_nodes(cell);
  for (int n : cn) sum += nodes_[n];
  return sum / static_cast<double>(cn.size());
}

void Mesh::build_edges() {
  const int npc = nodes_per_cell(kind_);
  cell_edges_.assign(cells_.size(), kNone);
  std::map<std::pair<int, int>, int> lookup;
  for (int c = 0; c < num_cells(); ++c) {
    const auto cn = cell_nodes(c);
    for (int k = 0; k < npc; ++k) {
      const int a = cn[k];
      const int b = cn[(k + 1) % npc];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, num_edges());
      if (inserted) {
        edges_.push_back(Edge{{a, b}, c, kNone});
      } else {
        Edge& e = edges_[it->second];
        if (e.right_cell != kNone) throw std::invalid_argument("Mesh: edge shared by more than two cells");
        e.right_cell = c;
      }
      cell_edges_[c * npc + k] = it->second;
    }
  }
  for (int e = 0; e < num_edges(); ++e) {
    if (edges_[e].on_boundary()) boundary_edges_.push_back(e);
  }
}

Mesh build_rect_grid(CellKind kind, const Vec2& lower, const Vec2& upper, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_rect_grid: need at least one cell per side");
  std::vector<Vec2> nodes;
  nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x = lower.x() + (upper.x() - lower.x()) * i / nx;
      const double y = lower.y() + (upper.y() - lower.y()) * j / ny;
      nodes.emplace_back(x, y);
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<int> cells;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n11 = id(i + 1, j + 1), n01 = id(i, j + 1);
      if (kind == CellKind::quad4) {
        cells.insert(cells.end(), {n00, n10, n11, n01});
      } else if ((i + j) % 2 == 0) {
        cells.insert(cells.end(), {n00, n10, n11, n00, n11, n01});
      } else {
        cells.insert(cells.end(), {n00, n10, n01, n10, n11, n01});
      }
    }
  }
  return Mesh(std::move(nodes), std::move(cells), kind);
}

Mesh build_tri_grid(int n, const Vec2& pivot, double angle) {
  if (n < 2) throw std::invalid_argument("build_tri_grid: n must be at least 2");
  const double spacing = 1.0 / n;
  // Half-extent, in the rotated frame, needed to contain the unit square.
  double half = 0.0;
  for (const Vec2& corner : {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}}) {
    const Vec2 local = rotate_about(corner, pivot, -angle) - pivot;
    half = std::max({half, std::abs(local.x()), std::abs(local.y())});
  }
  int cells_per_side = n;
  const bool aligned = std::abs(2.0 * half - 1.0) < 1e-12 && std::abs(std::sin(2.0 * angle)) < 1e-14;
  if (!aligned) {
    // Grow by whole cells on each side so that, for a pivot at the square's
    // center, the cover contains the unrotated grid's nodes.
    const int needed = static_cast<int>(std::ceil(2.0 * half / spacing - 1e-9)) + 2;
    cells_per_side = n + 2 * ((std::max(needed - n, 0) + 1) / 2);
  }
  const double side = cells_per_side * spacing;
  const Vec2 lower = pivot - Vec2{0.5 * side, 0.5 * side};
  const Mesh flat = build_rect_grid(CellKind::tri3, lower, lower + Vec2{side, side}, cells_per_side,
                                    cells_per_side);
  if (angle == 0.0) return flat;
  std::vector<Vec2> nodes = flat.nodes();
  for (Vec2& p : nodes) p = rotate_about(p, pivot, angle);
  std::vector<int> cells;
  for (int c = 0; c < flat.num_cells(); ++c) {
    const auto cn = flat.cell_nodes(c);
    cells.insert(cells.end(), cn.begin(), cn.end());
  }
  return Mesh(std::move(nodes), std::move(cells), CellKind::tri3);
}

Mesh build_quad_grid(int n) {
  if (n < 2) throw std::invalid_argument("build_quad_grid: n must be at least 2");
  return build_rect_grid(CellKind::quad4, {0.0, 0.0}, {1.0, 1.0}, n, n);
}

double edge_length(const Mesh& mesh, int edge_index) {
  if (edge_index < 0 || edge_index >= mesh.num_edges()) {
    throw std::out_of_range("edge_length: edge index out of range");
  }
  const Edge& e = mesh.edge(edge_index);
  return (mesh.node(e.nodes[1]) - mesh.node(e.nodes[0])).norm();
}

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  out << "nodes " << mesh.num_nodes() << '\n';
  out.precision(17);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    out << i << ' ' << mesh.node(i).x() << ' ' << mesh.node(i).y() << '\n';
  }
  out << "cells " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) {
    out << c;
    for (int n : mesh.cell_nodes(c)) out << ' ' << n;
    out << '\n';
  }
}

}  // namespace gapsbm
