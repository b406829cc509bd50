#include "gapsbm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gapsbm {

namespace {

constexpr double kOnCurveTol = 1e-12;

struct SegmentHit {
  Vec2 point;
  double t = 0.0;
  double dist2 = 0.0;
};

SegmentHit closest_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  // Snap to the vertices so corner projections are bitwise exact.
  const Vec2 q = t == 0.0 ? a : (t == 1.0 ? b : Vec2(a + t * ab));
  return {q, t, (p - q).squaredNorm()};
}

/// Winding number of a closed polyline around p.
int winding_number(const std::vector<Vec2>& poly, const Vec2& p) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double side = cross(b - a, p - a);
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && side > 0.0) ++wn;
    } else if (b.y() <= p.y() && side < 0.0) {
      --wn;
    }
  }
  return wn;
}

double polyline_distance(const std::vector<Vec2>& poly, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    best = std::min(best, closest_on_segment(poly[i], poly[(i + 1) % poly.size()], p).dist2);
  }
  return std::sqrt(best);
}

/// Outward unit normal of a counter-clockwise polygon edge.
Vec2 edge_normal(const Vec2& a, const Vec2& b) {
  const Vec2 t = (b - a).normalized();
  return {t.y(), -t.x()};
}

enum class Location { inside, on, outside };

Location locate(const Shape::Geometry& g, const Vec2& p) {
  struct Visitor {
    const Vec2& p;
    Location operator()(const Everywhere&) const { return Location::outside; }
    Location operator()(const Circle& c) const {
      const double gap = (p - c.center).norm() - c.radius;
      if (std::abs(gap) <= kOnCurveTol) return Location::on;
      return gap < 0.0 ? Location::inside : Location::outside;
    }
    Location operator()(const Polygon& poly) const {
      if (polyline_distance(poly.vertices, p) <= kOnCurveTol) return Location::on;
      return winding_number(poly.vertices, p) != 0 ? Location::inside : Location::outside;
    }
    Location operator()(const ParametricCurve& curve) const {
      if (polyline_distance(curve.samples, p) <= kOnCurveTol) return Location::on;
      return winding_number(curve.samples, p) != 0 ? Location::inside : Location::outside;
    }
  };
  return std::visit(Visitor{p}, g);
}

ProjectionResult project_circle(const Circle& c, const Vec2& p) {
  Vec2 dir = p - c.center;
  const double len = dir.norm();
  dir = len > 0.0 ? Vec2(dir / len) : Vec2{1.0, 0.0};
  ProjectionResult r;
  r.point = c.center + c.radius * dir;
  r.normal = dir;
  return r;
}

ProjectionResult project_polygon(const Polygon& poly, const Vec2& p) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  SegmentHit best{Vec2::Zero(), 0.0, std::numeric_limits<double>::infinity()};
  std::size_t best_seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const SegmentHit hit = closest_on_segment(v[i], v[(i + 1) % n], p);
    if (hit.dist2 < best.dist2) {
      best = hit;
      best_seg = i;
    }
  }
  ProjectionResult r;
  r.point = best.point;
  if (best.t > 0.0 && best.t < 1.0) {
    r.normal = edge_normal(v[best_seg], v[(best_seg + 1) % n]);
  } else {
    // Corner: bisector of the two adjacent edge normals.
    const std::size_t corner = best.t == 0.0 ? best_seg : (best_seg + 1) % n;
    const Vec2& prev = v[(corner + n - 1) % n];
    const Vec2& next = v[(corner + 1) % n];
    const Vec2 sum = edge_normal(prev, v[corner]) + edge_normal(v[corner], next);
    r.normal = sum.norm() > 0.0 ? Vec2(sum.normalized()) : edge_normal(prev, v[corner]);
  }
  return r;
}

/// Golden-section minimum of |x(t) - p|^2 on [lo, hi].
double refine_parameter(const ParametricCurve& curve, const Vec2& p, double lo, double hi) {
  auto f = [&](double t) { return (curve.point(t) - p).squaredNorm(); };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

ProjectionResult project_parametric(const ParametricCurve& curve, const Vec2& p) {
  const std::size_t n = curve.samples.size();
  std::vector<double> dist(n);
  double best = std::numeric_limits<double>::infinity();
  double max_gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = (curve.samples[i] - p).norm();
    best = std::min(best, dist[i]);
    max_gap = std::max(max_gap, (curve.samples[(i + 1) % n] - curve.samples[i]).norm());
  }
  // Where branches pass close to each other the nearest sample may sit on the
  // wrong one, so every sampled local minimum that could still win is refined.
  const double dt = 2.0 * std::numbers::pi / static_cast<double>(n);
  double t = curve.params[0];
  double best_refined = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i] > best + max_gap) continue;
    if (dist[i] > dist[(i + n - 1) % n] || dist[i] > dist[(i + 1) % n]) continue;
    const double candidate = refine_parameter(curve, p, curve.params[i] - dt, curve.params[i] + dt);
    const double d2 = (curve.point(candidate) - p).squaredNorm();
    if (d2 < best_refined) {
      best_refined = d2;
      t = candidate;
    }
  }
  ProjectionResult r;
  r.point = curve.point(t);
  const Vec2 tangent = curve.tangent(t).normalized();
  Vec2 normal{tangent.y(), -tangent.x()};
  // Orient away from the enclosed region.
  const Vec2 offset = p - r.point;
  if (offset.norm() > 1e-9) {
    const bool p_enclosed = winding_number(curve.samples, p) != 0;
    if ((normal.dot(offset) > 0.0) == p_enclosed) normal = -normal;
  } else if (winding_number(curve.samples, r.point + 1e-6 * normal) != 0) {
    normal = -normal;
  }
  r.normal = normal;
  return r;
}

}  // namespace

Shape::Shape() : geometry_(Everywhere{}), side_(Side::exterior) {}

Shape::Shape(Geometry geometry, Side side, BcRule bc_rule)
    : geometry_(std::move(geometry)), side_(side), bc_rule_(std::move(bc_rule)) {}

BoundaryKind Shape::classify(const Vec2& boundary_point) const {
  return bc_rule_ ? bc_rule_(boundary_point) : BoundaryKind::neumann;
}

Shape Shape::with_bc_rule(BcRule rule) const { return Shape(geometry_, side_, std::move(rule)); }

bool Shape::curve_encloses(const Vec2& p) const { return locate(geometry_, p) != Location::outside; }

bool is_inside(const Shape& shape, const Vec2& p) {
  if (shape.empty()) return true;
  const Location loc = locate(shape.geometry(), p);
  if (loc == Location::on) return true;
  return shape.side() == Side::interior ? loc == Location::inside : loc == Location::outside;
}

ProjectionResult project(const Shape& shape, const Vec2& p) {
  struct Visitor {
    const Vec2& p;
    ProjectionResult operator()(const Everywhere&) const {
      throw std::invalid_argument("project: shape has no boundary");
    }
    ProjectionResult operator()(const Circle& c) const { return project_circle(c, p); }
    ProjectionResult operator()(const Polygon& poly) const {
      if (poly.vertices.size() < 3) throw std::invalid_argument("project: polygon has fewer than 3 vertices");
      return project_polygon(poly, p);
    }
    ProjectionResult operator()(const ParametricCurve& c) const {
      if (c.samples.empty()) throw std::invalid_argument("project: empty parametric sample table");
      return project_parametric(c, p);
    }
  };
  ProjectionResult r = std::visit(Visitor{p}, shape.geometry());
  // Normals above point out of the enclosed region; flip when the domain is outside it.
  if (shape.side() == Side::exterior) r.normal = -r.normal;
  r.distance_vec = r.point - p;
  r.bc = shape.classify(r.point);
  return r;
}

Shape rotate_shape(const Shape& shape, const Vec2& pivot, double angle) {
  struct Visitor {
    const Vec2& pivot;
    double angle;
    Shape::Geometry operator()(const Everywhere& e) const { return e; }
    Shape::Geometry operator()(const Circle& c) const {
      return Circle{rotate_about(c.center, pivot, angle), c.radius};
    }
    Shape::Geometry operator()(const Polygon& poly) const {
      Polygon out;
      for (const Vec2& v : poly.vertices) out.vertices.push_back(rotate_about(v, pivot, angle));
      return out;
    }
    Shape::Geometry operator()(const ParametricCurve& c) const {
      ParametricCurve out;
      const Vec2 pv = pivot;
      const double a = angle;
      out.point = [f = c.point, pv, a](double t) { return rotate_about(f(t), pv, a); };
      out.tangent = [f = c.tangent, a](double t) { return rotate_about(f(t), Vec2::Zero(), a); };
      out.params = c.params;
      for (const Vec2& s : c.samples) out.samples.push_back(rotate_about(s, pivot, angle));
      return out;
    }
  };
  return Shape(std::visit(Visitor{pivot, angle}, shape.geometry()), shape.side(), shape.bc_rule());
}

Shape make_circle(const Vec2& center, double radius, Side side) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_circle: radius must be positive");
  return Shape(Circle{center, radius}, side);
}

Shape make_polygon(std::vector<Vec2> ccw_vertices, Side side) {
  if (ccw_vertices.size() < 3) throw std::invalid_argument("make_polygon: need at least 3 vertices");
  double twice_area = 0.0;
  for (std::size_t i = 0; i < ccw_vertices.size(); ++i) {
    twice_area += cross(ccw_vertices[i], ccw_vertices[(i + 1) % ccw_vertices.size()]);
  }
  if (twice_area < 0.0) std::reverse(ccw_vertices.begin(), ccw_vertices.end());
  return Shape(Polygon{std::move(ccw_vertices)}, side);
}

Shape make_square(const Vec2& center, double side_length, double angle, Side side) {
  if (!(side_length > 0.0)) throw std::invalid_argument("make_square: side must be positive");
  const double h = 0.5 * side_length;
  std::vector<Vec2> v{center + Vec2{-h, -h}, center + Vec2{h, -h}, center + Vec2{h, h},
                      center + Vec2{-h, h}};
  if (angle != 0.0) {
    for (Vec2& p : v) p = rotate_about(p, center, angle);
  }
  return make_polygon(std::move(v), side);
}

Shape make_star(const Vec2& center, double outer_radius, double inner_radius, int n_points, Side side) {
  if (!(outer_radius > 0.0) || !(inner_radius > 0.0)) {
    throw std::invalid_argument("make_star: radii must be positive");
  }
  if (inner_radius >= outer_radius) throw std::invalid_argument("make_star: inner radius must be below outer");
  if (n_points < 2) throw std::invalid_argument("make_star: need at least two points");
  std::vector<Vec2> v;
  const double step = std::numbers::pi / n_points;
  for (int k = 0; k < 2 * n_points; ++k) {
    const double a = 0.5 * std::numbers::pi + k * step;
    const double r = k % 2 == 0 ? outer_radius : inner_radius;
    v.push_back(center + r * Vec2{std::cos(a), std::sin(a)});
  }
  return make_polygon(std::move(v), side);
}

Shape make_flower(int n_samples, Side side) {
  if (n_samples < 8) throw std::invalid_argument("make_flower: too few samples");
  const Vec2 c{0.5, 0.5};
  ParametricCurve curve;
  curve.point = [c](double t) {
    const double r = 0.05 + 0.24 * std::sin(7.0 * t);
    return Vec2(c + r * Vec2{std::cos(t), std::sin(t)});
  };
  curve.tangent = [](double t) {
    const double r = 0.05 + 0.24 * std::sin(7.0 * t);
    const double dr = 1.68 * std::cos(7.0 * t);
    return Vec2{dr * std::cos(t) - r * std::sin(t), dr * std::sin(t) + r * std::cos(t)};
  };
  const double pi = std::numbers::pi;
  for (int k = 0; k < n_samples; ++k) {
    const double t = -pi + 2.0 * pi * k / n_samples;
    curve.params.push_back(t);
    curve.samples.push_back(curve.point(t));
  }
  return Shape(std::move(curve), side);
}

Shape make_everywhere() { return Shape(); }

double polygon_perimeter(const std::vector<Vec2>& vertices) {
  double sum = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    sum += (vertices[(i + 1) % vertices.size()] - vertices[i]).norm();
  }
  return sum;
}

bool polygon_is_simple(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); };
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent segments share a vertex
      const Vec2& c = v[j];
      const Vec2& d = v[(j + 1) % n];
      const double o1 = orient(a, b, c), o2 = orient(a, b, d);
      const double o3 = orient(c, d, a), o4 = orient(c, d, b);
      if (o1 * o2 <= 0.0 && o3 * o4 <= 0.0) return false;
    }
  }
  return true;
}

}  // namespace gapsbm
