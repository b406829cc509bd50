#include "gapsbm/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gapsbm;

namespace {

std::string csv(const StudyResult& result) {
  std::ostringstream out;
  emit_csv(result, out);
  return out.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

StudyConfig small_config() {
  StudyConfig config;
  config.case_name = "poisson_circle";
  config.levels = 3;
  config.rotations_deg = {0.0, 22.5};
  config.compute_kappa = false;
  return config;
}

}  // namespace

TEST(ParseVariant, AcceptsShortAndLongNames) {
  EXPECT_EQ(parse_variant("sym"), Variant::symmetric);
  EXPECT_EQ(parse_variant("symmetric"), Variant::symmetric);
  EXPECT_EQ(parse_variant("antisym"), Variant::antisymmetric);
  EXPECT_EQ(parse_variant("fitted"), Variant::fitted_reference);
  EXPECT_EQ(to_string(Variant::antisymmetric), "antisymmetric");
  EXPECT_THROW(parse_variant("nitsche"), std::invalid_argument);
}

TEST(CaseNames, QuadSuffix) {
  EXPECT_EQ(case_names().size(), 12u);
  EXPECT_TRUE(is_quad_case("poisson_flower_quad"));
  EXPECT_FALSE(is_quad_case("poisson_circle"));
  EXPECT_FALSE(is_quad_case("quad"));
}

TEST(StudyConfig, Validate) {
  StudyConfig config = small_config();
  EXPECT_NO_THROW(config.validate());
  config.case_name = "cantilever";
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = small_config();
  config.case_name = "disk";
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = small_config();
  config.levels = 1;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = small_config();
  config.threads = 0;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = small_config();
  config.theta = 0.0;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = small_config();
  config.gamma = -1.0;
  EXPECT_THROW(config.validate(), std::invalid_argument);
}

TEST(StudyConfig, DefaultRotations) {
  StudyConfig config;
  config.case_name = "poisson_star";
  const std::vector<double> tri = config.effective_rotations();
  ASSERT_EQ(tri.size(), 9u);
  EXPECT_DOUBLE_EQ(tri[1], 5.625);
  EXPECT_DOUBLE_EQ(tri.back(), 45.0);
  config.case_name = "elasticity_flower_quad";
  EXPECT_EQ(config.effective_rotations(), (std::vector<double>{0, 10, 20, 30, 40}));
}

TEST(LogLogSlope, PowerLaws) {
  const std::vector<double> h{0.1, 0.05, 0.025};
  std::vector<double> quadratic, inverse;
  for (double x : h) {
    quadratic.push_back(3.0 * x * x);
    inverse.push_back(7.0 / x);
  }
  EXPECT_NEAR(log_log_slope(h, quadratic), 2.0, 1e-12);
  EXPECT_NEAR(log_log_slope(h, inverse), -1.0, 1e-12);
  const std::vector<double> one{1.0};
  EXPECT_THROW(log_log_slope(one, one), std::invalid_argument);
}

TEST(EmitCsv, EmptyResultIsHeaderOnly) {
  EXPECT_EQ(csv(StudyResult{}), "case,variant,rotation_deg,level,h,dofs,l2,h1semi,kappa,wall_ms\n");
}

TEST(EmitCsv, RowsAreSortedByRotationThenLevel) {
  StudyResult result;
  for (double r : {30.0, 0.0}) {
    for (int level : {2, 0, 1}) {
      StudyRow row;
      row.case_name = "poisson_circle";
      row.variant = "antisymmetric";
      row.rotation_deg = r;
      row.level = level;
      result.rows.push_back(row);
    }
  }
  const std::vector<std::string> out = lines(csv(result));
  ASSERT_EQ(out.size(), 7u);
  EXPECT_EQ(out[1].substr(0, 35), "poisson_circle,antisymmetric,0,0,0,");
  EXPECT_EQ(out[6].substr(0, 36), "poisson_circle,antisymmetric,30,2,0,");
}

TEST(RunConvergence, RatesAndRerunsAreStable) {
  StudyConfig config = small_config();
  config.levels = 4;
  const StudyResult first = run_convergence(config);
  ASSERT_EQ(first.rows.size(), 8u);
  ASSERT_EQ(first.slopes.size(), 2u);
  for (const StudyRow& row : first.rows) {
    EXPECT_TRUE(row.error.empty()) << row.error;
    EXPECT_GE(row.min_H, 0.0);
    EXPECT_GT(row.min_j, 0.0);
  }
  for (const RateFit& fit : first.slopes) {
    EXPECT_GT(fit.l2_rate, 1.7);
    EXPECT_GT(fit.h1_rate, 0.8);
    EXPECT_TRUE(std::isnan(fit.kappa_rate));
  }
  config.threads = 3;
  EXPECT_EQ(csv(first), csv(run_convergence(config)));
}

TEST(RunConvergence, WritesTheOutputFile) {
  StudyConfig config = small_config();
  config.levels = 2;
  config.rotations_deg = {0.0};
  config.output = (std::filesystem::temp_directory_path() / "gapsbm_harness_test.csv").string();
  const StudyResult result = run_convergence(config);
  std::ifstream in(config.output);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), csv(result));
  std::filesystem::remove(config.output);
}

TEST(RunConvergence, SymmetricVariantReportsSymmetry) {
  StudyConfig config = small_config();
  config.case_name = "poisson_star";
  config.variant = Variant::symmetric;
  config.levels = 2;
  config.rotations_deg = {11.25};
  for (const StudyRow& row : run_convergence(config).rows) {
    EXPECT_TRUE(row.symmetric);
    EXPECT_TRUE(row.positive_definite);
  }
}

TEST(RunPatch, AffineFieldsAreExact) {
  for (const char* name : {"patch_circle", "patch_square", "patch_star"}) {
    for (Variant v : {Variant::antisymmetric, Variant::symmetric}) EXPECT_LE(run_patch(name, v), 1e-9) << name;
  }
  EXPECT_THROW(run_patch("poisson_circle"), std::invalid_argument);
}

TEST(RunSingle, FittedReferenceHasNoEmbeddedBoundary) {
  StudyConfig config = small_config();
  config.variant = Variant::fitted_reference;
  const StudyRow coarse = run_single(config, 0.0, 0, 16);
  const StudyRow fine = run_single(config, 0.0, 1, 32);
  EXPECT_TRUE(coarse.error.empty());
  EXPECT_TRUE(std::isinf(coarse.min_H));
  EXPECT_NEAR(coarse.l2 / fine.l2, 4.0, 0.4);
}

TEST(Cantilever, ReferenceAndSegmentCounts) {
  const CantileverResult result = run_cantilever(3);
  EXPECT_NEAR(result.reference, 0.0024, 1e-15);
  ASSERT_EQ(result.levels.size(), 3u);
  for (const CantileverLevel& level : result.levels) {
    EXPECT_NEAR(level.segments, level.target_segments, 0.05 * level.target_segments);
    EXPECT_GT(level.tip_deflection, 0.0);
  }
  EXPECT_LT(std::abs(result.levels[2].tip_deflection / result.reference - 1.0), 0.02);
  EXPECT_THROW(run_cantilever(2), std::invalid_argument);
}
