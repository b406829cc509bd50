#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gapsbm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr int kNone = -1;

enum class BoundaryKind { dirichlet, neumann };

inline const char* to_string(BoundaryKind kind) {
  return kind == BoundaryKind::dirichlet ? "D" : "N";
}

/// 90 degree counter-clockwise rotation.
inline Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }

inline Vec2 rotate_about(const Vec2& p, const Vec2& pivot, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec2 r = p - pivot;
  return pivot + Vec2{c * r.x() - s * r.y(), s * r.x() + c * r.y()};
}

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Raised when the active region of a surrogate build is empty.
class EmptyDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the direct solver when a pivot vanishes.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gapsbm
