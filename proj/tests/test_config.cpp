#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "ambtalk/config.hpp"

using namespace ambtalk;

namespace {

std::string error_of(std::string_view text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, "run.cfg", overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, Empty) {
  const RunConfig cfg = parse_config("", "run.cfg");
  EXPECT_FALSE(cfg.density.has_value());
  EXPECT_FALSE(cfg.beta.has_value());
  EXPECT_EQ(cfg.samples, 512);
  EXPECT_EQ(cfg.origin_of("beta"), "<default>");
}

TEST(Config, FullExample) {
  const RunConfig cfg = parse_config(
      "# comment\n"
      "density = piecewise-linear\n"
      "density.knots = 0:0 1:2   # rising\n"
      "\n"
      "beta = 1\n"
      "d = 0.1\n"
      "N = max\n",
      "run.cfg");
  ASSERT_TRUE(cfg.density.has_value());
  EXPECT_NEAR((*cfg.density)(0.25), 0.5, 1e-14);
  EXPECT_EQ(cfg.beta->beta(), 1.0);
  EXPECT_EQ(*cfg.d, 0.1);
  EXPECT_TRUE(cfg.intervals_max);
  EXPECT_EQ(cfg.origin_of("beta"), "run.cfg:5");
  EXPECT_EQ(cfg.entries.at("density.knots").value, "0:0 1:2");
}

TEST(Config, BetaKeywords) {
  EXPECT_EQ(parse_config("beta = zero", "c").beta->mode(), AmbiguityLevel::Mode::full_ambiguity);
  EXPECT_EQ(parse_config("beta = 0", "c").beta->mode(), AmbiguityLevel::Mode::full_ambiguity);
  EXPECT_EQ(parse_config("beta = infinity", "c").beta->mode(), AmbiguityLevel::Mode::bayesian);
  EXPECT_EQ(parse_config("beta = inf", "c").beta->mode(), AmbiguityLevel::Mode::bayesian);
}

TEST(Config, OverridesWinAndCarryOrigin) {
  const RunConfig cfg = parse_config("d = 0.1\n", "run.cfg", {"d=0.2", "N = 3"});
  EXPECT_EQ(*cfg.d, 0.2);
  EXPECT_EQ(*cfg.intervals, 3);
  EXPECT_EQ(cfg.origin_of("d"), "--set d");
}

TEST(Config, Logspace) {
  const RunConfig cfg = parse_config("betas = logspace(1e-3, 1e4, 8)", "c");
  ASSERT_EQ(cfg.betas.size(), 8u);
  EXPECT_NEAR(cfg.betas.front(), 1e-3, 1e-18);
  EXPECT_NEAR(cfg.betas[3], 1.0, 1e-14);
  EXPECT_NEAR(cfg.betas.back(), 1e4, 1e-9);
  const RunConfig listed = parse_config("betas = 0.1, 1, 10", "c");
  EXPECT_EQ(listed.betas, (std::vector<double>{0.1, 1.0, 10.0}));
}

TEST(Config, Densities) {
  EXPECT_EQ(parse_config("density = uniform\ndensity.lo = 0.2\ndensity.hi = 0.6", "c").density->support().lo(), 0.2);
  EXPECT_EQ(parse_config("density = counterexample\ndensity.epsilon = 0.01", "c").density->kind(),
            DensityKind::counterexample);
  const RunConfig tn = parse_config("density = truncated-normal\ndensity.h = 0.3\ndensity.sigma = 0.2\n"
                                    "prior = uniform",
                                    "c");
  EXPECT_EQ(tn.density->kind(), DensityKind::truncated_normal);
  EXPECT_EQ(tn.prior->kind(), DensityKind::uniform);
}

TEST(Config, ErrorsNameOriginAndKey) {
  EXPECT_EQ(error_of("d = 0.1\nbeta = -1\n"), "run.cfg:2: beta: must be >= 0, got -1");
  EXPECT_EQ(error_of("colour = red"), "run.cfg:1: colour: unknown key");
  EXPECT_EQ(error_of("d ="), "run.cfg:1: d: empty value");
  EXPECT_EQ(error_of("just words"), "run.cfg:1: expected key = value, got 'just words'");
  EXPECT_EQ(error_of("", {"d=abc"}), "--set d: d: expected a finite number, got 'abc'");
  EXPECT_NE(error_of("betas = logspace(1, 2)").find("logspace takes"), std::string::npos);
  EXPECT_NE(error_of("betas = 1, 0").find("every beta must be > 0"), std::string::npos);
  EXPECT_NE(error_of("density = truncated-normal\ndensity.h = 0.3\ndensity.sigma = 0").find("density.sigma"),
            std::string::npos);
  EXPECT_NE(error_of("density = counterexample\ndensity.epsilon = 0.2").find("(0, 1/8)"), std::string::npos);
  EXPECT_NE(error_of("density.h = 0.3").find("without a density kind"), std::string::npos);
  EXPECT_NE(error_of("density = triangle").find("density"), std::string::npos);
  EXPECT_NE(error_of("N = 0").find("N:"), std::string::npos);
  EXPECT_NE(error_of("N = 2.5").find("expected an integer"), std::string::npos);
  EXPECT_NE(error_of("lo = 0.6\nhi = 0.4").find("lo < hi"), std::string::npos);
  EXPECT_NE(error_of("thresholds = 0, 0.5, 0.5, 1").find("strictly increasing"), std::string::npos);
  EXPECT_NE(error_of("thresholds = 0.1, 1").find("start at 0"), std::string::npos);
  EXPECT_NE(error_of("which = everything").find("unknown scenario"), std::string::npos);
  EXPECT_NE(error_of("samples = 1").find(">= 2"), std::string::npos);
  EXPECT_NE(error_of("quad.nodes = 1").find("quad.nodes"), std::string::npos);
  EXPECT_NE(error_of("d = nan").find("finite number"), std::string::npos);
}
