#pragma once

// Shared assembly of the gap-shifted boundary form for scalar and vector
// unknowns. Scalar fields use row 0 of every gradient tensor and component 0
// of every data vector.

#include "gapsbm/fem.hpp"
#include "gapsbm/linalg.hpp"
#include "gapsbm/surrogate.hpp"

#include <functional>

namespace gapsbm::detail {

enum class Placement { chord, projected };

struct GapForm {
  int components = 1;
  /// Linear flux of a gradient tensor: the gradient itself or the stress.
  std::function<Mat2(const Mat2&)> flux;
  std::function<Vec2(const Vec2&)> source;
  std::function<Vec2(const Vec2&)> dirichlet;
  std::function<Vec2(const Vec2&, const Vec2&)> neumann;  ///< (point, outward normal)
  std::function<Vec2(const Vec2&)> outer;
  double theta = -1.0;
  double gamma = 0.0;
  Placement placement = Placement::chord;
  bool eliminate_outer = true;
};

SparseSystem assemble_gap_form(const Mesh& mesh, const SurrogateModel& surrogate, const GapForm& form);

}  // namespace gapsbm::detail
