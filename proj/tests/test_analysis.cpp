#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ambtalk/analysis.hpp"
#include "ambtalk/errors.hpp"
#include "helpers.hpp"

using namespace ambtalk;
using ambtalk::testing::falling;
using ambtalk::testing::kUnit;
using ambtalk::testing::rising;

namespace {

const AmbiguityLevel kOne = AmbiguityLevel::finite(1.0);

}  // namespace

TEST(SenderWelfare, BabblingUniform) {
  const auto eq = solve_partition(make_uniform(kUnit), 0.1, 1, AmbiguityLevel::bayesian());
  ASSERT_TRUE(eq.has_value());
  EXPECT_NEAR(sender_welfare(*eq, make_uniform(kUnit), 0.1), -(1.0 / 12.0 + 0.01), 1e-12);
}

TEST(CompareRegimes, FallingIsBetter) {
  const WelfareReport r = compare_regimes(falling(), falling(), 0.1, kOne);
  EXPECT_EQ(r.verdict, Verdict::better);
  EXPECT_GT(r.u_amb, r.u_bayes);
  for (double s : r.per_interval_action_shift) EXPECT_GT(s, 0.0);
  EXPECT_EQ(r.per_interval_action_shift.size(), r.amb_equilibrium.size());
}

TEST(CompareRegimes, RisingIsWorse) {
  const WelfareReport r = compare_regimes(rising(), rising(), 0.1, kOne);
  EXPECT_EQ(r.verdict, Verdict::worse);
  for (double s : r.per_interval_action_shift) EXPECT_LT(s, 0.0);
}

TEST(CompareRegimes, FixedSizeMissingThrows) {
  EXPECT_THROW(compare_regimes(make_uniform(kUnit), make_uniform(kUnit), 0.1, kOne, 5), NumericalError);
}

TEST(CompareRegimes, UniformIsEqual) {
  const WelfareReport r = compare_regimes(make_uniform(kUnit), make_uniform(kUnit), 0.05, kOne);
  EXPECT_EQ(r.verdict, Verdict::equal);
  for (double s : r.per_interval_action_shift) EXPECT_NEAR(s, 0.0, 1e-9);
}

TEST(MirrorPairing, Families) {
  for (const Density& g : {make_uniform(kUnit), rising(), falling(), make_truncated_normal(0.3, 0.2, kUnit),
                           make_truncated_normal(0.7, 0.2, kUnit), make_counterexample(0.01)}) {
    const MirrorPairing p = mirror_pairing(g, g, 0.1, 1.0);
    EXPECT_TRUE(p.holds) << g.description() << " error " << p.max_error;
    EXPECT_LE(p.max_error, 1e-6);
  }
}

TEST(Example1, CaseTable) {
  const Example1Result below = example1_signs(0.3, 0.2, 0.2, kUnit);
  EXPECT_EQ(below.location, Relation::below);
  EXPECT_EQ(below.penalty, Relation::above);
  EXPECT_EQ(below.predicted_sign, 1);
  EXPECT_EQ(below.sign, 1);
  const Example1Result above = example1_signs(0.7, 0.2, 0.2, kUnit);
  EXPECT_EQ(above.location, Relation::above);
  EXPECT_EQ(above.sign, -1);
  EXPECT_NEAR(below.action + above.action, 1.0, 1e-8);
}

TEST(Example1, CenteredLocation) {
  const Example1Result r = example1_signs(0.5, 0.2, 0.2, kUnit);
  EXPECT_EQ(r.location, Relation::at);
  EXPECT_NEAR(r.action, 0.5, 1e-8);
  EXPECT_EQ(r.sign, 0);
}

TEST(ExAnte, SingleInterval) {
  const auto eq = solve_partition(rising(), 0.4, 1, kOne);
  ASSERT_TRUE(eq.has_value());
  const ExAnteSolution s = solve_ex_ante(rising(), *eq, 1.0);
  ASSERT_EQ(s.c_star.size(), 1u);
  EXPECT_EQ(s.worst_interval, 0u);
  EXPECT_EQ(s.p_hat, std::vector<double>{1.0});
  EXPECT_NEAR(s.value, s.posterior[0].value, 1e-12);
}

TEST(ExAnte, UniformWorstIsWideInterval) {
  const auto eq = solve_partition(make_uniform(kUnit), 0.1, 2, kOne);
  ASSERT_TRUE(eq.has_value());
  const ExAnteSolution s = solve_ex_ante(make_uniform(kUnit), *eq, 1.0);
  EXPECT_EQ(s.worst_interval, 1u);
  EXPECT_NEAR(eq->thresholds[1], 0.3, 1e-9);
  EXPECT_EQ(s.p_hat, (std::vector<double>{0.0, 1.0}));
  EXPECT_FALSE(s.tie);
  EXPECT_NEAR(s.value, 1.0 * s.c_star[1], 1e-15);
  for (std::size_t i = 0; i < s.conditional_actions.size(); ++i) {
    EXPECT_NEAR(s.conditional_actions[i], s.posterior[i].action, 1e-8);
  }
  const double half[] = {0.5, 0.5};
  EXPECT_GE(ex_ante_objective(s, half), s.value - 1e-12);
}

TEST(ExAnte, RejectsNonFiniteBeta) {
  const auto eq = solve_partition(make_uniform(kUnit), 0.1, 2, kOne);
  ASSERT_TRUE(eq.has_value());
  EXPECT_THROW(solve_ex_ante(make_uniform(kUnit), *eq, 0.0), InvalidArgument);
}

TEST(KlDecomposition, UniformHalves) {
  const Interval left(0.0, 0.5);
  const Interval right(0.5, 1.0);
  const std::vector<Density> f = {make_uniform(left), make_uniform(right)};
  const std::vector<Density> g = {restrict(rising(), left), restrict(rising(), right)};
  const double w[] = {0.3, 0.7};
  const auto [lhs, rhs] = kl_decomposition_check(w, f, g);
  EXPECT_NEAR(lhs, rhs, 1e-10);
  EXPECT_GT(lhs, 0.0);
}

TEST(KlDecomposition, RejectsOverlap) {
  const std::vector<Density> f = {make_uniform(Interval(0.0, 0.6)), make_uniform(Interval(0.5, 1.0))};
  const double w[] = {0.5, 0.5};
  EXPECT_THROW(kl_decomposition_check(w, f, f), InvalidArgument);
}
