#pragma once

#include "gapsbm/elasticity.hpp"
#include "gapsbm/poisson.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gapsbm {

enum class Variant { symmetric, antisymmetric, fitted_reference };

/// Accepts sym|symmetric, antisym|antisymmetric, fitted|fitted_reference.
Variant parse_variant(const std::string& text);
std::string to_string(Variant variant);

/// Every study case name, in a fixed order.
const std::vector<std::string>& case_names();
bool is_quad_case(const std::string& case_name);

struct StudyConfig {
  std::string case_name;
  Variant variant = Variant::antisymmetric;
  std::vector<double> rotations_deg;  ///< empty: 9 angles 0..45 (tri) or 0,10,..,40 (quad)
  int levels = 5;                     ///< tri n = 8, 16, ...; quad n = 20, 40, ...
  std::optional<double> gamma;
  std::optional<double> theta;
  std::string output;
  int threads = 1;
  bool compute_kappa = true;
  bool timing = false;  ///< record wall_ms; otherwise 0 so reruns are byte-identical
  DataPlacement placement = DataPlacement::chord;

  void validate() const;
  std::vector<double> effective_rotations() const;
};

struct StudyRow {
  std::string case_name;
  std::string variant;
  double rotation_deg = 0.0;
  int level = 0;
  int n = 0;  ///< background cells per unit length
  double h = 0.0;
  int dofs = 0;
  double l2 = 0.0;
  double h1semi = 0.0;
  double kappa = 0.0;
  double wall_ms = 0.0;
  bool symmetric = false;           ///< max|A - A^T| <= 1e-12 max|A|
  bool positive_definite = false;   ///< symmetric part admits a Cholesky factor
  int inverted_ext_quads = 0;
  double min_H = 0.0;
  double min_j = 0.0;
  std::string error;                ///< solver failure message, empty on success
};

struct RateFit {
  double rotation_deg = 0.0;
  double l2_rate = 0.0;
  double h1_rate = 0.0;
  double kappa_rate = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  std::vector<RateFit> slopes;  ///< per rotation, over the finest three levels
};

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Max nodal error of an affine solution (patch_circle: x+y, patch_square:
/// x, patch_star: y) on an n = 20 triangle grid with Neumann data on the
/// shape and strong Dirichlet data on the unit-square perimeter.
double run_patch(const std::string& case_name, Variant variant = Variant::antisymmetric, int n = 20);

/// Max nodal error when a study case's geometry and grid type (n = 20,
/// unrotated) carry an affine solution: 0.3 + x - 2y for Poisson cases, a
/// fixed affine displacement for elasticity cases. Patch cases solve Poisson.
double run_affine(const std::string& case_name, Variant variant = Variant::antisymmetric, int n = 20);

/// One solve of a study case at grid size n.
StudyRow run_single(const StudyConfig& config, double rotation_deg, int level, int n);

StudyResult run_convergence(const StudyConfig& config);

struct CantileverLevel {
  int target_segments = 0;
  int segments = 0;  ///< surrogate boundary edges
  double spacing = 0.0;
  int dofs = 0;
  double tip_deflection = 0.0;  ///< downward deflection at the free end, mid-height
};

struct CantileverResult {
  std::vector<CantileverLevel> levels;
  double reference = 0.0;  ///< q L^4 / (8 E I)
};

/// Beam [0,20] x [0,1], E = 1e5, nu = 0.3 (plane stress), clamped at x = 0,
/// downward traction q = 1e-3 on the top face. Level k targets 120 * 2^k
/// boundary segments.
CantileverResult run_cantilever(int levels);

/// Header then one row per solve, sorted by (case, rotation, level).
void emit_csv(const StudyResult& result, std::ostream& out);
void emit_csv(const StudyResult& result, const std::string& path);

}  // namespace gapsbm
