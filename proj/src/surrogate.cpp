#include "gapsbm/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace gapsbm {

namespace {

double shoelace(const std::array<Vec2, 4>& v) {
  double twice = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) twice += cross(v[k], v[(k + 1) % v.size()]);
  return 0.5 * twice;
}

bool leaves_box(const Mesh& mesh, const Domain& domain, int cell) {
  if (!domain.strong_box) return false;
  for (int n : mesh.cell_nodes(cell)) {
    if (!domain.strong_box->contains(mesh.node(n))) return true;
  }
  return false;
}

/// Union-find over cells.
class CellSets {
 public:
  explicit CellSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void join(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

/// Deactivates groups of active cells that touch neither the strong
/// Dirichlet perimeter nor a Dirichlet part of the shape. Cells are grouped
/// through shared edges: a group hanging on a single node carries a free
/// constant (Poisson) or a free rotation about that node (elasticity).
/// Returns the number of cells removed; nothing is removed when no group is
/// anchored at all.
int drop_floating_components(const Mesh& mesh, const Domain& domain, std::vector<char>& active) {
  CellSets sets(mesh.num_cells());
  std::vector<int> anchors;
  for (const Edge& edge : mesh.edges()) {
    const bool left = active[edge.left_cell] != 0;
    const bool right = edge.right_cell != kNone && active[edge.right_cell] != 0;
    if (left && right) {
      sets.join(edge.left_cell, edge.right_cell);
      continue;
    }
    if (!left && !right) continue;
    const int inside = left ? edge.left_cell : edge.right_cell;
    const int other = left ? edge.right_cell : edge.left_cell;
    bool anchor = other == kNone || leaves_box(mesh, domain, other);
    if (!anchor && !domain.shape.empty()) {
      const Vec2 mid = 0.5 * (mesh.node(edge.nodes[0]) + mesh.node(edge.nodes[1]));
      anchor = project(domain.shape, mid).bc == BoundaryKind::dirichlet;
    }
    if (anchor) anchors.push_back(inside);
  }
  if (anchors.empty()) return 0;
  std::vector<char> anchored(mesh.num_cells(), 0);
  for (int c : anchors) anchored[sets.find(c)] = 1;
  int removed = 0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (active[c] && !anchored[sets.find(c)]) {
      active[c] = 0;
      ++removed;
    }
  }
  return removed;
}

}  // namespace

SurrogateModel build_surrogate(const Mesh& mesh, const Domain& domain) {
  SurrogateModel model;
  model.mesh_nodes = mesh.num_nodes();
  model.mesh_cells = mesh.num_cells();
  model.shape = domain.shape;

  std::vector<char> node_in(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) node_in[i] = domain.contains(mesh.node(i)) ? 1 : 0;

  std::vector<char> active(mesh.num_cells(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto cn = mesh.cell_nodes(c);
    active[c] = std::all_of(cn.begin(), cn.end(), [&](int n) { return node_in[n] != 0; }) ? 1 : 0;
  }
  model.diagnostics.floating_cells = drop_floating_components(mesh, domain, active);
  model.active = active;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (model.active[c]) model.active_cells.push_back(c);
  }
  if (model.active_cells.empty()) throw EmptyDomainError("build_surrogate: no cell lies inside the domain");
  model.node_dof.assign(mesh.num_nodes(), kNone);
  for (int c : model.active_cells) {
    for (int n : mesh.cell_nodes(c)) model.node_dof[n] = 0;
  }
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (model.node_dof[i] == kNone) continue;
    model.node_dof[i] = static_cast<int>(model.active_nodes.size());
    model.active_nodes.push_back(i);
  }

  std::vector<char> outer_node(mesh.num_nodes(), 0);
  std::map<int, Vec2> projected;  // node -> distance vector
  std::map<int, std::vector<int>> incident;

  auto distance_at = [&](int node) -> Vec2 {
    auto it = projected.find(node);
    if (it != projected.end()) return it->second;
    const Vec2 d = project(domain.shape, mesh.node(node)).distance_vec;
    projected.emplace(node, d);
    return d;
  };

  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const bool left = model.active[edge.left_cell] != 0;
    const bool right = edge.right_cell != kNone && model.active[edge.right_cell] != 0;
    if (left == right) continue;
    const int cell = left ? edge.left_cell : edge.right_cell;
    const int other = left ? edge.right_cell : edge.left_cell;

    if (other == kNone || leaves_box(mesh, domain, other)) {
      outer_node[edge.nodes[0]] = 1;
      outer_node[edge.nodes[1]] = 1;
      continue;
    }

    SurrogateEdge se;
    se.edge_index = e;
    se.cell = cell;
    se.nodes = left ? edge.nodes : std::array<int, 2>{edge.nodes[1], edge.nodes[0]};
    for (int k = 0; k < nodes_per_cell(mesh.cell_kind()); ++k) {
      if (mesh.cell_edge(cell, k) == e) se.local_edge = k;
    }
    const Vec2& a1 = mesh.node(se.nodes[0]);
    const Vec2& a2 = mesh.node(se.nodes[1]);
    se.d = {distance_at(se.nodes[0]), distance_at(se.nodes[1])};
    se.ext_points = {a1 + se.d[0], a2 + se.d[1]};
    se.length = (a2 - a1).norm();
    const Vec2 t = (a2 - a1) / se.length;
    se.n_tilde = {t.y(), -t.x()};
    se.ext_area = shoelace({a2, a1, se.ext_points[0], se.ext_points[1]});
    if (se.ext_area < 0.0) {
      // Crossing projections: swap the extension vertices to untwist the quad.
      ++model.diagnostics.inverted_ext_quads;
      se.ext_area = std::abs(shoelace({a2, a1, se.ext_points[1], se.ext_points[0]}));
    }
    se.H = se.ext_area / se.length;
    const Vec2 chord = se.ext_points[1] - se.ext_points[0];
    se.j = chord.norm() / se.length;
    const ProjectionResult mid = project(domain.shape, 0.5 * (a1 + a2));
    se.bc = mid.bc;
    se.chord_normal = chord.norm() > 1e-14 * se.length ? Vec2(Vec2{chord.y(), -chord.x()}.normalized())
                                                      : mid.normal;
    se.h = mesh.cell_diameter(cell);
    incident[se.nodes[0]].push_back(static_cast<int>(model.edges.size()));
    incident[se.nodes[1]].push_back(static_cast<int>(model.edges.size()));
    model.edges.push_back(se);
  }

  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (outer_node[i]) model.outer_dirichlet_nodes.push_back(i);
  }

  for (const auto& [node, edge_ids] : incident) {
    const Vec2 d = projected.at(node);
    if (d.norm() == 0.0) ++model.diagnostics.zero_gap_nodes;

    // Around the node, each incoming surrogate edge (node is its end point)
    // has the inactive sector on its counter-clockwise side; that sector is
    // closed by the next edge counter-clockwise, which must be outgoing. The
    // two extension quads filling the sector share the lateral edge along d.
    struct Ray {
      int id;
      double angle;
      bool incoming;
    };
    std::vector<Ray> rays;
    for (int id : edge_ids) {
      const SurrogateEdge& se = model.edges[id];
      const bool incoming = se.nodes[1] == node;
      const Vec2 dir = mesh.node(incoming ? se.nodes[0] : se.nodes[1]) - mesh.node(node);
      rays.push_back({id, std::atan2(dir.y(), dir.x()), incoming});
    }
    std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) { return a.angle < b.angle; });
    if (rays.size() != 2) ++model.diagnostics.irregular_nodes;

    int paired = 0;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      const Ray& in = rays[k];
      const Ray& out = rays[(k + 1) % rays.size()];
      if (!in.incoming || out.incoming || in.id == out.id) continue;
      paired += 2;

      SurrogateNode sn;
      sn.node = node;
      sn.d = d;
      sn.incident_count = static_cast<int>(rays.size());
      sn.edges = {in.id, out.id};
      // Traversing each extension quad counter-clockwise, the incoming
      // edge's quad runs down the lateral edge (against d), so rot90(d) is
      // its outward normal: it is the + side.
      if (d.norm() > 0.0) sn.normal_plus = rot90(d.normalized());
      sn.cells = {model.edges[sn.edges[0]].cell, model.edges[sn.edges[1]].cell};
      sn.h = std::max(model.edges[sn.edges[0]].h, model.edges[sn.edges[1]].h);
      model.nodes.push_back(sn);
    }
    model.diagnostics.unpaired_edge_ends += static_cast<int>(rays.size()) - paired;
  }
  return model;
}

JumpAverage node_jump_average(const SurrogateNode& node, const Vec2& grad_plus, const Vec2& grad_minus) {
  return {(grad_plus - grad_minus).dot(node.d), 0.5 * (grad_plus + grad_minus)};
}

void write_surrogate_csv(const Mesh& mesh, const SurrogateModel& model, std::ostream& out) {
  out << "edge,cell,x1,y1,x2,y2,H,j,bc\n";
  out.precision(12);
  for (const SurrogateEdge& se : model.edges) {
    const Vec2& a = mesh.node(se.nodes[0]);
    const Vec2& b = mesh.node(se.nodes[1]);
    out << se.edge_index << ',' << se.cell << ',' << a.x() << ',' << a.y() << ',' << b.x() << ','
        << b.y() << ',' << se.H << ',' << se.j << ',' << to_string(se.bc) << '\n';
  }
}

}  // namespace gapsbm
