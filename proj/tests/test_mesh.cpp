#include "gapsbm/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace gapsbm;

namespace {

double min_angle(const Mesh& mesh) {
  double worst = std::numbers::pi;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto cn = mesh.cell_nodes(c);
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = mesh.node(cn[(k + 1) % 3]) - mesh.node(cn[k]);
      const Vec2 b = mesh.node(cn[(k + 2) % 3]) - mesh.node(cn[k]);
      worst = std::min(worst, std::acos(a.dot(b) / (a.norm() * b.norm())));
    }
  }
  return worst;
}

bool has_node_near(const Mesh& mesh, const Vec2& p, double tol = 1e-12) {
  for (const Vec2& q : mesh.nodes()) {
    if ((q - p).norm() <= tol) return true;
  }
  return false;
}

}  // namespace

TEST(TriGrid, UnrotatedCounts) {
  const Mesh mesh = build_tri_grid(2, {0.5, 0.5}, 0.0);
  EXPECT_EQ(mesh.num_cells(), 8);
  EXPECT_EQ(mesh.num_nodes(), 9);
  for (const Vec2& p : mesh.nodes()) {
    EXPECT_GE(p.minCoeff(), -1e-15);
    EXPECT_LE(p.maxCoeff(), 1.0 + 1e-15);
  }
}

TEST(TriGrid, RotationMapsOriginAboutPivot) {
  const Mesh mesh = build_tri_grid(2, {0.5, 0.5}, std::numbers::pi / 4);
  EXPECT_TRUE(has_node_near(mesh, {0.5, 0.5 - std::sqrt(2.0) / 2.0}));
}

TEST(TriGrid, RotatedGridCoversUnitSquare) {
  const Mesh mesh = build_tri_grid(16, {0.5, 0.5}, 0.26);
  // Every corner of the unit square lies in some cell.
  for (const Vec2& corner : {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}}) {
    bool covered = false;
    for (int c = 0; c < mesh.num_cells() && !covered; ++c) {
      const auto cn = mesh.cell_nodes(c);
      bool inside = true;
      for (int k = 0; k < 3; ++k) {
        inside = inside && cross(mesh.node(cn[(k + 1) % 3]) - mesh.node(cn[k]), corner - mesh.node(cn[k])) >= -1e-14;
      }
      covered = inside;
    }
    EXPECT_TRUE(covered);
  }
}

TEST(TriGrid, HGlobalIsCellDiagonal) {
  const Mesh mesh = build_tri_grid(64, {0.3, 0.7}, 0.26);
  // Criss-cross cells are right triangles whose diameter is the diagonal.
  EXPECT_NEAR(mesh.h_global(), std::sqrt(2.0) / 64.0, 0.05 * std::sqrt(2.0) / 64.0);
}

TEST(TriGrid, RotationIsRigid) {
  const Mesh flat = build_tri_grid(8, {0.5, 0.5}, 0.0);
  const Mesh rotated = build_tri_grid(8, {0.5, 0.5}, 0.4);
  // Same structured family: identical sets of edge lengths and cell areas.
  double min_len = 1e9, max_len = 0;
  for (int e = 0; e < rotated.num_edges(); ++e) {
    min_len = std::min(min_len, edge_length(rotated, e));
    max_len = std::max(max_len, edge_length(rotated, e));
  }
  EXPECT_NEAR(min_len, 1.0 / 8, 1e-12);
  EXPECT_NEAR(max_len, std::sqrt(2.0) / 8, 1e-12);
  for (int c = 0; c < rotated.num_cells(); ++c) EXPECT_NEAR(rotated.cell_area(c), 1.0 / 128, 1e-12 / 128);
  EXPECT_NEAR(min_angle(rotated), min_angle(flat), 1e-12);
}

TEST(TriGrid, RejectsTooFewCells) {
  EXPECT_THROW(build_tri_grid(1, {0.5, 0.5}, 0.0), std::invalid_argument);
}

TEST(QuadGrid, Counts) {
  const Mesh mesh = build_quad_grid(20);
  EXPECT_EQ(mesh.num_cells(), 400);
  EXPECT_EQ(mesh.num_nodes(), 441);
  EXPECT_NEAR(mesh.h_global(), std::sqrt(2.0) / 20, 1e-15);
  EXPECT_EQ(build_quad_grid(2).num_edges(), 12);
  EXPECT_THROW(build_quad_grid(1), std::invalid_argument);
}

TEST(QuadGrid, InteriorEdgesHaveTwoNeighbors) {
  const Mesh mesh = build_quad_grid(40);
  int boundary = 0;
  for (const Edge& e : mesh.edges()) {
    const Vec2 mid = 0.5 * (mesh.node(e.nodes[0]) + mesh.node(e.nodes[1]));
    const bool on_perimeter = mid.x() < 1e-12 || mid.y() < 1e-12 || mid.x() > 1 - 1e-12 || mid.y() > 1 - 1e-12;
    EXPECT_EQ(e.on_boundary(), on_perimeter);
    boundary += e.on_boundary() ? 1 : 0;
  }
  EXPECT_EQ(boundary, 160);
  EXPECT_EQ(static_cast<int>(mesh.outer_boundary_edges().size()), 160);
}

TEST(MeshInvariants, OrientationAdjacencyAndEuler) {
  for (const Mesh& mesh : {build_tri_grid(7, {0.5, 0.5}, 0.3), build_quad_grid(9)}) {
    const int npc = nodes_per_cell(mesh.cell_kind());
    for (int c = 0; c < mesh.num_cells(); ++c) EXPECT_GT(mesh.cell_area(c), 0.0);

    // Each edge is referenced by one or two cells, consistently with its neighbor list.
    std::vector<int> refs(mesh.num_edges(), 0);
    for (int c = 0; c < mesh.num_cells(); ++c) {
      for (int k = 0; k < npc; ++k) ++refs[mesh.cell_edge(c, k)];
    }
    int interior = 0, boundary = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      EXPECT_EQ(refs[e], mesh.edge(e).on_boundary() ? 1 : 2);
      (mesh.edge(e).on_boundary() ? boundary : interior)++;
    }
    EXPECT_EQ(mesh.num_cells() * npc, 2 * interior + boundary);
    EXPECT_EQ(mesh.num_nodes() - mesh.num_edges() + mesh.num_cells(), 1);
  }
}

TEST(MeshInvariants, LeftCellTraversesEdgeCounterClockwise) {
  const Mesh mesh = build_tri_grid(5, {0.5, 0.5}, 0.2);
  for (const Edge& e : mesh.edges()) {
    const Vec2 a = mesh.node(e.nodes[0]);
    const Vec2 b = mesh.node(e.nodes[1]);
    EXPECT_GT(cross(b - a, mesh.cell_centroid(e.left_cell) - a), 0.0);
    if (!e.on_boundary()) EXPECT_LT(cross(b - a, mesh.cell_centroid(e.right_cell) - a), 0.0);
  }
}

TEST(EdgeLength, HorizontalEdgeAndBadIndex) {
  const Mesh mesh = build_quad_grid(2);
  bool seen = false;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (std::abs(mesh.node(edge.nodes[0]).y() - mesh.node(edge.nodes[1]).y()) < 1e-15) {
      EXPECT_DOUBLE_EQ(edge_length(mesh, e), 0.5);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
  EXPECT_THROW(edge_length(Mesh{}, 0), std::out_of_range);
}

TEST(MeshConstruction, RejectsClockwiseCells) {
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}}, {0, 2, 1}, CellKind::tri3), std::invalid_argument);
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}}, {0, 1}, CellKind::tri3), std::invalid_argument);
}

TEST(MeshText, OneRecordPerLine) {
  const Mesh mesh = build_quad_grid(2);
  std::ostringstream out;
  write_mesh_text(mesh, out);
  int lines = 0;
  for (char ch : out.str()) lines += ch == '\n' ? 1 : 0;
  // Two headers, 9 nodes, 4 cells.
  EXPECT_EQ(lines, 2 + 9 + 4);
}
