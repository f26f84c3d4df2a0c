#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ambtalk/density.hpp"
#include "ambtalk/errors.hpp"
#include "ambtalk/oracle.hpp"
#include "helpers.hpp"

using namespace ambtalk;
using ambtalk::testing::falling;
using ambtalk::testing::kUnit;
using ambtalk::testing::rising;

namespace {

double simpson_mass(const Density& f) {
  return oracle::simpson([&](double t) { return f(t); }, f.support(), f.breakpoints(), 2048);
}

}  // namespace

TEST(Interval, RejectsDegenerateAndOutOfRange) {
  EXPECT_THROW(Interval(0.3, 0.3), InvalidArgument);
  EXPECT_THROW(Interval(0.5, 0.2), InvalidArgument);
  EXPECT_THROW(Interval(-0.1, 0.5), InvalidArgument);
  EXPECT_THROW(Interval(0.5, 1.1), InvalidArgument);
  EXPECT_THROW(Interval(0.0, std::nan("")), InvalidArgument);
  EXPECT_EQ(Interval(0.2, 0.6).reflect(0.3), 0.5);
}

TEST(Uniform, UnitInterval) {
  const Density u = make_uniform(kUnit);
  for (double t : {0.0, 0.1, 0.5, 1.0}) EXPECT_DOUBLE_EQ(u(t), 1.0);
  EXPECT_EQ(u(1.5), 0.0);
}

TEST(Uniform, HalfInterval) {
  const Density u = make_uniform(Interval(0.25, 0.75));
  EXPECT_DOUBLE_EQ(u(0.4), 2.0);
  EXPECT_EQ(u(0.1), 0.0);
  EXPECT_EQ(u.log_value(0.1), -std::numeric_limits<double>::infinity());
}

TEST(PiecewiseLinear, AlreadyNormalized) {
  const Density g = rising();
  for (double t : {0.0, 0.25, 0.7, 1.0}) EXPECT_NEAR(g(t), 2.0 * t, 1e-14);
}

TEST(PiecewiseLinear, Rescaled) {
  const Density g = make_piecewise_linear(std::array<Knot, 2>{{{0.0, 1.0}, {1.0, 3.0}}}, kUnit);
  for (double t : {0.0, 0.3, 1.0}) EXPECT_NEAR(g(t), (1.0 + 2.0 * t) / 2.0, 1e-14);
}

TEST(PiecewiseLinear, Errors) {
  EXPECT_THROW(make_piecewise_linear(std::array<Knot, 2>{{{0.0, -1.0}, {1.0, 1.0}}}, kUnit), InvalidArgument);
  EXPECT_THROW(make_piecewise_linear(std::array<Knot, 2>{{{0.0, 0.0}, {1.0, 0.0}}}, kUnit), InvalidArgument);
  EXPECT_THROW(make_piecewise_linear(std::array<Knot, 2>{{{0.2, 1.0}, {1.0, 1.0}}}, kUnit), InvalidArgument);
  EXPECT_THROW(make_piecewise_linear(std::array<Knot, 3>{{{0.0, 1.0}, {0.6, 1.0}, {0.5, 1.0}}}, kUnit),
               InvalidArgument);
}

TEST(PiecewisePolynomial, Quadratic) {
  // 3 theta^2 on [0, 1]
  const PolynomialPiece piece{0.0, 1.0, {0.0, 0.0, 1.0}};
  const Density g = make_piecewise_polynomial(std::span(&piece, 1), kUnit);
  EXPECT_NEAR(g(0.5), 0.75, 1e-12);
  EXPECT_NEAR(mean(g), 0.75, 1e-12);
}

TEST(TruncatedNormal, SymmetricMean) {
  const Density g = make_truncated_normal(0.5, 0.2, kUnit);
  EXPECT_NEAR(mean(g), 0.5, 1e-12);
  EXPECT_NEAR(g(0.3), g(0.7), 1e-12);
}

TEST(TruncatedNormal, TruncationPullsMeanInward) {
  const Density g = make_truncated_normal(0.3, 0.2, kUnit);
  const double m = mean(g);
  EXPECT_GT(m, 0.3);
  EXPECT_LT(m, 0.5);
  const double oracle_mean = oracle::simpson([&](double t) { return t * g(t); }, kUnit, {}, 4096);
  EXPECT_NEAR(m, oracle_mean, 1e-10);
}

TEST(TruncatedNormal, Errors) {
  EXPECT_THROW(make_truncated_normal(0.5, 0.0, kUnit), InvalidArgument);
  EXPECT_THROW(make_truncated_normal(0.5, -1.0, kUnit), InvalidArgument);
}

TEST(Counterexample, MeanNearHalf) { EXPECT_NEAR(mean(make_counterexample(0.01)), 0.5, 1e-3); }

TEST(Counterexample, ZeroOnEmptyPlateau) { EXPECT_EQ(make_counterexample(0.01)(0.6), 0.0); }

TEST(Counterexample, EpsilonRange) {
  EXPECT_THROW(make_counterexample(0.2), InvalidArgument);
  EXPECT_THROW(make_counterexample(0.0), InvalidArgument);
  EXPECT_THROW(make_counterexample(0.125), InvalidArgument);
}

TEST(Counterexample, ConvergesToStepOutsideWindows) {
  for (double eps : {0.05, 0.01, 0.002}) {
    const Density g = make_counterexample(eps);
    EXPECT_NEAR(simpson_mass(g), 1.0, 1e-10);
    double sup = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      const double t = k / 4000.0;
      const bool in_window = std::abs(t - 0.25) < eps || std::abs(t - 0.5) < eps || std::abs(t - 0.75) < eps;
      if (!in_window) sup = std::max(sup, std::abs(g(t) - counterexample_limit(t)));
    }
    // Only the renormalization constant separates g from the limit here.
    EXPECT_LT(sup, 3.0 * eps) << eps;
  }
}

TEST(Counterexample, SmoothAcrossWindowEdges) {
  const double eps = 0.01;
  const Density g = make_counterexample(eps);
  const double h = 1e-5;
  for (double edge : {0.25 - eps, 0.25 + eps, 0.5 - eps, 0.5 + eps, 0.75 - eps, 0.75 + eps}) {
    const double left_slope = (g(edge) - g(edge - h)) / h;
    const double right_slope = (g(edge + h) - g(edge)) / h;
    EXPECT_NEAR(left_slope, right_slope, 1.0) << edge;
    const double curvature_left = (g(edge) - 2 * g(edge - h) + g(edge - 2 * h)) / (h * h);
    const double curvature_right = (g(edge + 2 * h) - 2 * g(edge + h) + g(edge)) / (h * h);
    EXPECT_NEAR(curvature_left, curvature_right, 2e3) << edge;
  }
}

TEST(Restrict, UniformSubinterval) {
  const Density r = restrict(make_uniform(kUnit), Interval(0.2, 0.6));
  EXPECT_NEAR(r(0.3), 2.5, 1e-12);
  EXPECT_EQ(r(0.7), 0.0);
}

TEST(Restrict, RisingUpperHalf) {
  const Density r = restrict(rising(), Interval(0.5, 1.0));
  for (double t : {0.5, 0.8, 1.0}) EXPECT_NEAR(r(t), 2.0 * t / 0.75, 1e-12);
}

TEST(Restrict, ZeroMass) {
  EXPECT_THROW(restrict(make_counterexample(0.01), Interval(0.55, 0.7)), ZeroMassError);
}

TEST(Restrict, Idempotent) {
  const Interval iv(0.2, 0.7);
  const Density once = restrict(make_truncated_normal(0.3, 0.2, kUnit), iv);
  const Density twice = restrict(once, iv);
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.2 + 0.5 * k / 100.0;
    EXPECT_NEAR(once(t), twice(t), 1e-12);
  }
}

TEST(Mean, Examples) {
  EXPECT_NEAR(mean(make_uniform(kUnit)), 0.5, 1e-14);
  EXPECT_NEAR(mean(rising()), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(variance(make_uniform(kUnit)), 1.0 / 12.0, 1e-14);
}

TEST(KlDivergence, SelfIsZero) {
  for (const Density& g : {make_uniform(kUnit), rising(), make_truncated_normal(0.3, 0.1, kUnit)}) {
    EXPECT_NEAR(kl_divergence(g, g), 0.0, 1e-12);
  }
}

TEST(KlDivergence, UniformAgainstRising) {
  EXPECT_NEAR(kl_divergence(make_uniform(kUnit), rising()), 1.0 - std::log(2.0), 1e-9);
}

TEST(KlDivergence, MassWhereReferenceVanishes) {
  EXPECT_EQ(kl_divergence(make_uniform(kUnit), make_counterexample(0.01)), std::numeric_limits<double>::infinity());
}

TEST(KlDivergence, MismatchedSupports) {
  EXPECT_THROW(kl_divergence(make_uniform(kUnit), make_uniform(Interval(0, 0.5))), InvalidArgument);
}

TEST(Mirror, Examples) {
  const Density u = mirror(make_uniform(kUnit));
  EXPECT_NEAR(u(0.3), 1.0, 1e-14);
  const Density m = mirror(rising());
  const Density f = falling();
  for (double t : {0.0, 0.2, 0.9}) EXPECT_NEAR(m(t), f(t), 1e-14);
}

TEST(Mirror, InvolutionAndMeanReflection) {
  const Density g = make_counterexample(0.01);
  const Density mm = mirror(mirror(g));
  for (int k = 0; k <= 1000; ++k) EXPECT_NEAR(mm(k / 1000.0), g(k / 1000.0), 1e-12);
  const Interval iv(0.2, 0.9);
  const Density h = restrict(make_truncated_normal(0.3, 0.15, kUnit), iv);
  const Density hm = mirror(h);
  EXPECT_NEAR(simpson_mass(hm), 1.0, 1e-10);
  EXPECT_NEAR(mean(hm), 1.1 - mean(h), 1e-10);
}

TEST(DensityInvariant, EveryFamilyIntegratesToOne) {
  std::mt19937_64 rng(7);
  std::vector<Density> all = {make_uniform(Interval(0.1, 0.4)), rising(), falling(),
                              make_truncated_normal(0.2, 0.05, kUnit), make_counterexample(0.01),
                              restrict(make_counterexample(0.01), Interval(0.2, 0.8))};
  for (int k = 0; k < 10; ++k) all.push_back(ambtalk::testing::random_piecewise_linear(rng));
  for (const Density& g : all) {
    EXPECT_NEAR(simpson_mass(g), 1.0, 1e-10) << g.description();
    const auto bp = g.breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i) {
      EXPECT_TRUE(g.support().contains(bp[i]));
      if (i) EXPECT_LT(bp[i - 1], bp[i]);
    }
  }
}

TEST(DensityInvariant, GibbsInequality) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const Density f = ambtalk::testing::random_piecewise_linear(rng);
    const Density g = ambtalk::testing::random_piecewise_linear(rng);
    EXPECT_GT(kl_divergence(f, g), 0.0);
    EXPECT_NEAR(kl_divergence(f, f), 0.0, 1e-12);
  }
}
