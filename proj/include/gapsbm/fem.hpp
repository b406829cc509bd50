#pragma once

#include "gapsbm/mesh.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace gapsbm {

/// Points in reference coordinates. Cell rules live on the unit triangle
/// (measure 1/2) or on [-1,1]^2 (measure 4); segment rules on [-1,1] use x().
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

QuadratureRule cell_quadrature(CellKind kind, int order);
QuadratureRule edge_quadrature(int order);

/// Reference coordinates of local vertex k.
Vec2 reference_vertex(CellKind kind, int k);

/// P1 (triangle) or Q1 (quadrilateral) shape functions and reference gradients.
void reference_basis(CellKind kind, const Vec2& ref, std::span<double> values, std::span<Vec2> grads);

/// Shape functions of one cell evaluated at a reference point, with
/// gradients pushed forward to physical coordinates.
struct BasisValues {
  int count = 0;
  std::array<double, 4> value{};
  std::array<Vec2, 4> grad{};
  Vec2 point = Vec2::Zero();
  double det_jacobian = 0.0;
};

BasisValues evaluate_basis(const Mesh& mesh, int cell, const Vec2& ref);

/// First-order Taylor extension v + grad(v).d of a field known at a point.
inline double shift_eval(double value, const Vec2& grad, const Vec2& d) { return value + grad.dot(d); }

using ScalarField = std::function<double(const Vec2&)>;
using GradientField = std::function<Vec2(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using TensorField = std::function<Mat2(const Vec2&)>;

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

/// L2 norm and H1 seminorm of (exact - u_h) over `cells`. `nodal` is indexed
/// by mesh node. Each cell is split 4x4 and integrated with a degree-2 rule
/// per piece.
ErrorNorms error_norms(const Mesh& mesh, std::span<const int> cells, std::span<const double> nodal,
                       const ScalarField& exact, const GradientField& exact_grad);

/// Vector version; `exact_grad` returns the displacement gradient
/// (row i = gradient of component i).
ErrorNorms error_norms(const Mesh& mesh, std::span<const int> cells, std::span<const Vec2> nodal,
                       const VectorField& exact, const TensorField& exact_grad);

}  // namespace gapsbm
