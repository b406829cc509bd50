#pragma once

#include "gapsbm/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace gapsbm {

/// Which side of the embedded curve is the computational domain.
enum class Side { interior, exterior };

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

/// Closed simple polygon, counter-clockwise vertices.
struct Polygon {
  std::vector<Vec2> vertices;
};

/// Closed parametric curve x(t), t in [-pi, pi), with a dense sample table
/// used for the coarse nearest-point scan and for the winding-number test.
struct ParametricCurve {
  std::function<Vec2(double)> point;
  std::function<Vec2(double)> tangent;
  std::vector<double> params;
  std::vector<Vec2> samples;
};

/// Covers the whole plane: nothing is cut away.
struct Everywhere {};

using BcRule = std::function<BoundaryKind(const Vec2&)>;

struct ProjectionResult {
  Vec2 point;         ///< closest point on the curve
  Vec2 distance_vec;  ///< point - query
  Vec2 normal;        ///< unit outward normal of the computational domain
  BoundaryKind bc = BoundaryKind::neumann;
};

/// Embedded boundary curve together with the side that forms the domain and
/// the rule labelling boundary points as Dirichlet or Neumann.
class Shape {
 public:
  using Geometry = std::variant<Everywhere, Circle, Polygon, ParametricCurve>;

  Shape();
  Shape(Geometry geometry, Side side, BcRule bc_rule = {});

  const Geometry& geometry() const { return geometry_; }
  Side side() const { return side_; }
  bool empty() const { return std::holds_alternative<Everywhere>(geometry_); }
  BoundaryKind classify(const Vec2& boundary_point) const;
  Shape with_bc_rule(BcRule rule) const;
  const BcRule& bc_rule() const { return bc_rule_; }

  /// Inside the closed region bounded by the curve (ignores `side`).
  bool curve_encloses(const Vec2& p) const;

 private:
  Geometry geometry_;
  Side side_ = Side::exterior;
  BcRule bc_rule_;
};

/// True iff p lies in the closure of the computational side of the shape.
bool is_inside(const Shape& shape, const Vec2& p);

ProjectionResult project(const Shape& shape, const Vec2& p);

Shape rotate_shape(const Shape& shape, const Vec2& pivot, double angle);

Shape make_circle(const Vec2& center, double radius, Side side = Side::exterior);
Shape make_polygon(std::vector<Vec2> ccw_vertices, Side side = Side::exterior);
/// Axis-aligned square of the given side length, optionally rotated about its center.
Shape make_square(const Vec2& center, double side_length, double angle = 0.0,
                  Side side = Side::exterior);
Shape make_star(const Vec2& center, double outer_radius, double inner_radius, int n_points,
                Side side = Side::exterior);
/// Seven-lobed polar curve r(t) = 0.05 + 0.24 sin(7t) about (0.5, 0.5).
Shape make_flower(int n_samples = 16384, Side side = Side::exterior);
Shape make_everywhere();

double polygon_perimeter(const std::vector<Vec2>& vertices);
/// Exhaustive O(n^2) check that no two non-adjacent segments intersect.
bool polygon_is_simple(const std::vector<Vec2>& vertices);

/// Computational domain: an embedded shape, optionally clipped to an
/// axis-aligned box whose perimeter carries strong Dirichlet conditions.
struct Box {
  Vec2 lower;
  Vec2 upper;
  bool contains(const Vec2& p, double tol = 1e-12) const {
    return p.x() >= lower.x() - tol && p.y() >= lower.y() - tol && p.x() <= upper.x() + tol &&
           p.y() <= upper.y() + tol;
  }
};

struct Domain {
  Shape shape;
  std::optional<Box> strong_box;

  bool contains(const Vec2& p) const {
    return (!strong_box || strong_box->contains(p)) && is_inside(shape, p);
  }
};

}  // namespace gapsbm
