#include "gapsbm/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace gapsbm {

QuadratureRule cell_quadrature(CellKind kind, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("cell_quadrature: order must be 1, 2 or 3");
  QuadratureRule rule;
  if (kind == CellKind::tri3) {
    if (order == 1) {
      rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {0.5};
    } else if (order == 2) {
      rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
      rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    } else {
      // Six-point symmetric rule, exact to degree 4.
      const double a = 0.445948490915965, wa = 0.223381589678011 / 2.0;
      const double b = 0.091576213509771, wb = 0.109951743655322 / 2.0;
      rule.points = {{a, a}, {1 - 2 * a, a}, {a, 1 - 2 * a}, {b, b}, {1 - 2 * b, b}, {b, 1 - 2 * b}};
      rule.weights = {wa, wa, wa, wb, wb, wb};
    }
    return rule;
  }
  if (order == 1) {
    rule.points = {{0.0, 0.0}};
    rule.weights = {4.0};
    return rule;
  }
  const double g = 1.0 / std::sqrt(3.0);
  rule.points = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  rule.weights = {1.0, 1.0, 1.0, 1.0};
  return rule;
}

QuadratureRule edge_quadrature(int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("edge_quadrature: order must be at most 3");
  const double g = 1.0 / std::sqrt(3.0);
  return QuadratureRule{{{-g, 0.0}, {g, 0.0}}, {1.0, 1.0}};
}

Vec2 reference_vertex(CellKind kind, int k) {
  static const std::array<Vec2, 3> tri{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  static const std::array<Vec2, 4> quad{Vec2{-1, -1}, Vec2{1, -1}, Vec2{1, 1}, Vec2{-1, 1}};
  return kind == CellKind::tri3 ? tri.at(k) : quad.at(k);
}

void reference_basis(CellKind kind, const Vec2& ref, std::span<double> values, std::span<Vec2> grads) {
  const double x = ref.x(), y = ref.y();
  if (kind == CellKind::tri3) {
    values[0] = 1.0 - x - y;
    values[1] = x;
    values[2] = y;
    grads[0] = {-1.0, -1.0};
    grads[1] = {1.0, 0.0};
    grads[2] = {0.0, 1.0};
    return;
  }
  for (int k = 0; k < 4; ++k) {
    const Vec2 v = reference_vertex(kind, k);
    values[k] = 0.25 * (1.0 + v.x() * x) * (1.0 + v.y() * y);
    grads[k] = {0.25 * v.x() * (1.0 + v.y() * y), 0.25 * v.y() * (1.0 + v.x() * x)};
  }
}

BasisValues evaluate_basis(const Mesh& mesh, int cell, const Vec2& ref) {
  BasisValues out;
  const auto cn = mesh.cell_nodes(cell);
  out.count = static_cast<int>(cn.size());
  std::array<Vec2, 4> ref_grad{};
  reference_basis(mesh.cell_kind(), ref, std::span(out.value.data(), cn.size()),
                  std::span(ref_grad.data(), cn.size()));
  Mat2 jac = Mat2::Zero();
  for (int k = 0; k < out.count; ++k) {
    const Vec2& x = mesh.node(cn[k]);
    out.point += out.value[k] * x;
    jac += x * ref_grad[k].transpose();
  }
  out.det_jacobian = jac.determinant();
  const Mat2 inv_t = jac.inverse().transpose();
  for (int k = 0; k < out.count; ++k) out.grad[k] = inv_t * ref_grad[k];
  return out;
}

namespace {

constexpr int kSubdivisions = 4;

/// Degree-2 points and weights covering the reference cell split kSubdivisions
/// times per direction.
QuadratureRule subdivided_rule(CellKind kind) {
  QuadratureRule out;
  const QuadratureRule base = cell_quadrature(kind, 2);
  const double s = 1.0 / kSubdivisions;
  if (kind == CellKind::tri3) {
    auto add_triangle = [&](const Vec2& a, const Vec2& b, const Vec2& c) {
      const double jac = std::abs(cross(b - a, c - a));
      for (std::size_t q = 0; q < base.size(); ++q) {
        const Vec2& r = base.points[q];
        out.points.push_back(a + r.x() * (b - a) + r.y() * (c - a));
        out.weights.push_back(base.weights[q] * jac);
      }
    };
    for (int i = 0; i < kSubdivisions; ++i) {
      for (int j = 0; i + j < kSubdivisions; ++j) {
        const Vec2 p{i * s, j * s};
        add_triangle(p, p + Vec2{s, 0}, p + Vec2{0, s});
        if (i + j < kSubdivisions - 1) add_triangle(p + Vec2{s, 0}, p + Vec2{s, s}, p + Vec2{0, s});
      }
    }
    return out;
  }
  const double w = 2.0 / kSubdivisions;
  for (int i = 0; i < kSubdivisions; ++i) {
    for (int j = 0; j < kSubdivisions; ++j) {
      const Vec2 center{-1.0 + (i + 0.5) * w, -1.0 + (j + 0.5) * w};
      for (std::size_t q = 0; q < base.size(); ++q) {
        out.points.push_back(center + 0.5 * w * base.points[q]);
        out.weights.push_back(base.weights[q] * 0.25 * w * w);
      }
    }
  }
  return out;
}

template <class Accumulate>
void for_each_error_point(const Mesh& mesh, std::span<const int> cells, Accumulate&& accumulate) {
  const QuadratureRule rule = subdivided_rule(mesh.cell_kind());
  for (int c : cells) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const BasisValues bv = evaluate_basis(mesh, c, rule.points[q]);
      accumulate(c, bv, rule.weights[q] * std::abs(bv.det_jacobian));
    }
  }
}

}  // namespace

ErrorNorms error_norms(const Mesh& mesh, std::span<const int> cells, std::span<const double> nodal,
                       const ScalarField& exact, const GradientField& exact_grad) {
  if (!exact || !exact_grad) throw std::invalid_argument("error_norms: exact solution not provided");
  if (nodal.size() != static_cast<std::size_t>(mesh.num_nodes())) {
    throw std::invalid_argument("error_norms: nodal vector size does not match the mesh");
  }
  double l2 = 0.0, h1 = 0.0;
  for_each_error_point(mesh, cells, [&](int c, const BasisValues& bv, double w) {
    const auto cn = mesh.cell_nodes(c);
    double uh = 0.0;
    Vec2 guh = Vec2::Zero();
    for (int k = 0; k < bv.count; ++k) {
      uh += bv.value[k] * nodal[cn[k]];
      guh += bv.grad[k] * nodal[cn[k]];
    }
    const double e = exact(bv.point) - uh;
    l2 += w * e * e;
    h1 += w * (exact_grad(bv.point) - guh).squaredNorm();
  });
  return {std::sqrt(l2), std::sqrt(h1)};
}

ErrorNorms error_norms(const Mesh& mesh, std::span<const int> cells, std::span<const Vec2> nodal,
                       const VectorField& exact, const TensorField& exact_grad) {
  if (!exact || !exact_grad) throw std::invalid_argument("error_norms: exact solution not provided");
  if (nodal.size() != static_cast<std::size_t>(mesh.num_nodes())) {
    throw std::invalid_argument("error_norms: nodal vector size does not match the mesh");
  }
  double l2 = 0.0, h1 = 0.0;
  for_each_error_point(mesh, cells, [&](int c, const BasisValues& bv, double w) {
    const auto cn = mesh.cell_nodes(c);
    Vec2 uh = Vec2::Zero();
    Mat2 guh = Mat2::Zero();
    for (int k = 0; k < bv.count; ++k) {
      uh += bv.value[k] * nodal[cn[k]];
      guh += nodal[cn[k]] * bv.grad[k].transpose();
    }
    l2 += w * (exact(bv.point) - uh).squaredNorm();
    h1 += w * (exact_grad(bv.point) - guh).squaredNorm();
  });
  return {std::sqrt(l2), std::sqrt(h1)};
}

}  // namespace gapsbm
