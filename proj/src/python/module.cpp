#include "gapsbm/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace gapsbm;

namespace {

std::string csv_text(const StudyResult& result) {
  std::ostringstream out;
  emit_csv(result, out);
  return out.str();
}

std::vector<Vec2> mesh_nodes(const Mesh& mesh) { return mesh.nodes(); }

std::vector<std::vector<int>> mesh_cells(const Mesh& mesh) {
  std::vector<std::vector<int>> out;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto cn = mesh.cell_nodes(c);
    out.emplace_back(cn.begin(), cn.end());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_gapsbm, m) {
  m.doc() = "Gap shifted boundary method solvers and study harness";

  py::enum_<Variant>(m, "Variant")
      .value("symmetric", Variant::symmetric)
      .value("antisymmetric", Variant::antisymmetric)
      .value("fitted_reference", Variant::fitted_reference);
  py::enum_<Side>(m, "Side").value("interior", Side::interior).value("exterior", Side::exterior);
  py::enum_<BoundaryKind>(m, "BoundaryKind")
      .value("dirichlet", BoundaryKind::dirichlet)
      .value("neumann", BoundaryKind::neumann);
  py::enum_<CellKind>(m, "CellKind").value("tri3", CellKind::tri3).value("quad4", CellKind::quad4);

  m.def("parse_variant", &parse_variant, py::arg("text"));
  m.def("case_names", &case_names);
  m.def("is_quad_case", &is_quad_case, py::arg("case_name"));
  m.def("log_log_slope",
        [](const std::vector<double>& x, const std::vector<double>& y) { return log_log_slope(x, y); },
        py::arg("x"), py::arg("y"));

  // Geometry and mesh, enough to inspect a surrogate boundary.
  py::class_<Shape>(m, "Shape").def_property_readonly("side", &Shape::side);
  m.def("make_circle", &make_circle, py::arg("center"), py::arg("radius"), py::arg("side") = Side::exterior);
  m.def("make_square", &make_square, py::arg("center"), py::arg("side_length"), py::arg("angle") = 0.0,
        py::arg("side") = Side::exterior);
  m.def("make_star", &make_star, py::arg("center"), py::arg("outer_radius"), py::arg("inner_radius"),
        py::arg("n_points"), py::arg("side") = Side::exterior);
  m.def("make_flower", &make_flower, py::arg("n_samples") = 16384, py::arg("side") = Side::exterior);
  m.def("is_inside", &is_inside, py::arg("shape"), py::arg("point"));
  m.def(
      "project",
      [](const Shape& shape, const Vec2& p) {
        const ProjectionResult r = project(shape, p);
        return py::make_tuple(r.point, r.normal, r.bc);
      },
      py::arg("shape"), py::arg("point"), "Closest boundary point, outward normal and boundary kind.");

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("cell_kind", &Mesh::cell_kind)
      .def_property_readonly("num_nodes", &Mesh::num_nodes)
      .def_property_readonly("num_cells", &Mesh::num_cells)
      .def_property_readonly("num_edges", &Mesh::num_edges)
      .def_property_readonly("h", &Mesh::h_global)
      .def_property_readonly("nodes", &mesh_nodes)
      .def_property_readonly("cells", &mesh_cells);
  m.def("build_tri_grid", &build_tri_grid, py::arg("n"), py::arg("pivot") = Vec2(0.5, 0.5), py::arg("angle") = 0.0);
  m.def("build_quad_grid", &build_quad_grid, py::arg("n"));

  py::class_<SurrogateEdge>(m, "SurrogateEdge")
      .def_readonly("cell", &SurrogateEdge::cell)
      .def_readonly("nodes", &SurrogateEdge::nodes)
      .def_readonly("d", &SurrogateEdge::d)
      .def_readonly("length", &SurrogateEdge::length)
      .def_readonly("H", &SurrogateEdge::H)
      .def_readonly("j", &SurrogateEdge::j)
      .def_readonly("bc", &SurrogateEdge::bc);
  py::class_<SurrogateModel>(m, "SurrogateModel")
      .def_readonly("active_cells", &SurrogateModel::active_cells)
      .def_readonly("active_nodes", &SurrogateModel::active_nodes)
      .def_readonly("edges", &SurrogateModel::edges)
      .def_property_readonly("inverted_ext_quads",
                             [](const SurrogateModel& s) { return s.diagnostics.inverted_ext_quads; })
      .def_property_readonly("floating_cells", [](const SurrogateModel& s) { return s.diagnostics.floating_cells; });
  m.def(
      "build_surrogate",
      [](const Mesh& mesh, const Shape& shape, bool unit_box) {
        std::optional<Box> box;
        if (unit_box) box = Box{{0.0, 0.0}, {1.0, 1.0}};
        return build_surrogate(mesh, Domain{shape, box});
      },
      py::arg("mesh"), py::arg("shape"), py::arg("unit_box") = true,
      "Active cells and surrogate edges; the unit-square perimeter carries strong data when unit_box is set.");

  // Study harness.
  py::class_<StudyConfig>(m, "StudyConfig")
      .def(py::init<>())
      .def_readwrite("case_name", &StudyConfig::case_name)
      .def_readwrite("variant", &StudyConfig::variant)
      .def_readwrite("rotations_deg", &StudyConfig::rotations_deg)
      .def_readwrite("levels", &StudyConfig::levels)
      .def_readwrite("gamma", &StudyConfig::gamma)
      .def_readwrite("theta", &StudyConfig::theta)
      .def_readwrite("output", &StudyConfig::output)
      .def_readwrite("threads", &StudyConfig::threads)
      .def_readwrite("compute_kappa", &StudyConfig::compute_kappa)
      .def_readwrite("timing", &StudyConfig::timing)
      .def("validate", &StudyConfig::validate)
      .def("effective_rotations", &StudyConfig::effective_rotations);

  py::class_<StudyRow>(m, "StudyRow")
      .def_readonly("case_name", &StudyRow::case_name)
      .def_readonly("variant", &StudyRow::variant)
      .def_readonly("rotation_deg", &StudyRow::rotation_deg)
      .def_readonly("level", &StudyRow::level)
      .def_readonly("n", &StudyRow::n)
      .def_readonly("h", &StudyRow::h)
      .def_readonly("dofs", &StudyRow::dofs)
      .def_readonly("l2", &StudyRow::l2)
      .def_readonly("h1semi", &StudyRow::h1semi)
      .def_readonly("kappa", &StudyRow::kappa)
      .def_readonly("wall_ms", &StudyRow::wall_ms)
      .def_readonly("symmetric", &StudyRow::symmetric)
      .def_readonly("positive_definite", &StudyRow::positive_definite)
      .def_readonly("min_H", &StudyRow::min_H)
      .def_readonly("min_j", &StudyRow::min_j)
      .def_readonly("error", &StudyRow::error);

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("rotation_deg", &RateFit::rotation_deg)
      .def_readonly("l2_rate", &RateFit::l2_rate)
      .def_readonly("h1_rate", &RateFit::h1_rate)
      .def_readonly("kappa_rate", &RateFit::kappa_rate);

  py::class_<StudyResult>(m, "StudyResult")
      .def_readonly("rows", &StudyResult::rows)
      .def_readonly("slopes", &StudyResult::slopes)
      .def("to_csv", &csv_text);

  m.def("run_convergence", &run_convergence, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("run_single", &run_single, py::arg("config"), py::arg("rotation_deg"), py::arg("level"), py::arg("n"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_patch", &run_patch, py::arg("case_name"), py::arg("variant") = Variant::antisymmetric,
        py::arg("n") = 20, py::call_guard<py::gil_scoped_release>());
  m.def("run_affine", &run_affine, py::arg("case_name"), py::arg("variant") = Variant::antisymmetric,
        py::arg("n") = 20, py::call_guard<py::gil_scoped_release>());

  py::class_<CantileverLevel>(m, "CantileverLevel")
      .def_readonly("target_segments", &CantileverLevel::target_segments)
      .def_readonly("segments", &CantileverLevel::segments)
      .def_readonly("spacing", &CantileverLevel::spacing)
      .def_readonly("dofs", &CantileverLevel::dofs)
      .def_readonly("tip_deflection", &CantileverLevel::tip_deflection);
  py::class_<CantileverResult>(m, "CantileverResult")
      .def_readonly("levels", &CantileverResult::levels)
      .def_readonly("reference", &CantileverResult::reference);
  m.def("run_cantilever", &run_cantilever, py::arg("levels"), py::call_guard<py::gil_scoped_release>());
}
