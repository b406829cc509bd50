// Command-line driver for the study cases: convergence sweeps, patch tests
// and the cantilever beam.

#include "gapsbm/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

using namespace gapsbm;

bool in_window(double value, double lo, double hi) { return value >= lo && value <= hi; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

int run_command(const StudyConfig& config, bool check) {
  const StudyResult result = run_convergence(config);
  if (config.output.empty()) emit_csv(result, std::cout);

  bool ok = true;
  for (const StudyRow& row : result.rows) {
    if (!row.error.empty()) {
      std::fprintf(stderr, "rotation %g level %d failed: %s\n", row.rotation_deg, row.level, row.error.c_str());
      ok = false;
    }
  }
  for (const RateFit& fit : result.slopes) {
    const bool pass = in_window(fit.l2_rate, 1.8, 2.2) && in_window(fit.h1_rate, 0.9, 1.1) &&
                      (!config.compute_kappa || in_window(fit.kappa_rate, -2.4, -1.6));
    ok = ok && pass;
    std::fprintf(stderr, "rotation %6.3f  l2 %.3f  h1 %.3f  kappa %.3f  %s\n", fit.rotation_deg, fit.l2_rate,
                 fit.h1_rate, fit.kappa_rate, pass ? "ok" : "out of range");
  }
  return check && !ok ? 1 : 0;
}

int patch_command(const std::string& case_name, bool check) {
  const double error = run_patch(case_name);
  std::printf("%s max nodal error %.3e\n", case_name.c_str(), error);
  return check && !(error <= 1e-9) ? 1 : 0;
}

int beam_command(int levels, bool check) {
  const CantileverResult result = run_cantilever(levels);
  std::printf("segments,spacing,dofs,tip_deflection,relative_error\n");
  for (const CantileverLevel& level : result.levels) {
    std::printf("%d,%.6g,%d,%.8g,%.4e\n", level.segments, level.spacing, level.dofs, level.tip_deflection,
                level.tip_deflection / result.reference - 1.0);
  }
  std::printf("reference,%.8g\n", result.reference);
  const std::size_t n = result.levels.size();
  const auto err = [&](std::size_t k) { return std::abs(result.levels[k].tip_deflection - result.reference); };
  const bool ok = err(n - 1) <= 0.01 * result.reference && err(n - 1) < err(n - 2) && err(n - 2) < err(n - 3);
  return check && !ok ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gap shifted boundary method studies"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI or TOML file with one section per subcommand; command-line flags win");

  StudyConfig config;
  std::string variant = "antisym";
  std::string rotations;
  std::string placement = "chord";
  double gamma = 0.0, theta = 0.0;
  bool check = false;
  bool no_kappa = false;

  CLI::App* run = app.add_subcommand("run", "Convergence sweep over rotations and refinement levels");
  run->add_option("--case", config.case_name, "Study case")->required()->check(CLI::IsMember(case_names()));
  run->add_option("--variant", variant, "sym | antisym | fitted");
  run->add_option("--levels", config.levels, "Number of refinement levels")->check(CLI::Range(2, 8));
  run->add_option("--rotations", rotations, "Comma-separated angles in degrees");
  auto* gamma_opt = run->add_option("--gamma", gamma, "Penalty override");
  auto* theta_opt = run->add_option("--theta", theta, "Symmetry sign override (+1 or -1)");
  run->add_option("--out", config.output, "CSV output path (stdout when omitted)");
  run->add_option("--threads", config.threads, "Parallel solves")->check(CLI::PositiveNumber);
  run->add_option("--placement", placement, "Boundary data placement: chord | projected")
      ->check(CLI::IsMember({"chord", "projected"}));
  run->add_flag("--no-kappa", no_kappa, "Skip condition numbers");
  run->add_flag("--timing", config.timing, "Record wall-clock time per solve");
  run->add_flag("--check", check, "Exit nonzero if any rate falls outside its window");

  std::string patch_case;
  CLI::App* patch = app.add_subcommand("patch", "Affine patch test");
  patch->add_option("--case", patch_case, "patch_circle | patch_square | patch_star")
      ->required()
      ->check(CLI::IsMember({"patch_circle", "patch_square", "patch_star"}));
  patch->add_flag("--check", check, "Exit nonzero if the error exceeds 1e-9");

  int beam_levels = 5;
  CLI::App* beam = app.add_subcommand("beam", "Cantilever beam tip deflection");
  beam->add_option("--levels", beam_levels, "Number of levels (120 * 2^k segments)")->check(CLI::Range(3, 7));
  beam->add_flag("--check", check, "Exit nonzero unless within 1% and converging");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      config.variant = parse_variant(variant);
      config.rotations_deg = parse_list(rotations);
      if (*gamma_opt) config.gamma = gamma;
      if (*theta_opt) config.theta = theta;
      config.compute_kappa = !no_kappa;
      config.placement = placement == "chord" ? DataPlacement::chord : DataPlacement::projected;
      return run_command(config, check);
    }
    if (*patch) return patch_command(patch_case, check);
    return beam_command(beam_levels, check);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
