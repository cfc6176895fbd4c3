#include <gtest/gtest.h>

#include <cmath>

#include "degen/degiorgi.hpp"
#include "degen/errors.hpp"

using namespace degen;

TEST(Cutoff, RadiiDecreaseToHalf) {
  double gamma = 1.5;
  CutoffRadii c = cutoff_radii(1.0, gamma, 20000);
  EXPECT_NEAR(c.c, cutoff_constant(gamma), 1e-15);
  EXPECT_DOUBLE_EQ(c.radii.front(), 1.0);
  for (std::size_t i = 1; i < c.radii.size(); ++i) EXPECT_LT(c.radii[i], c.radii[i - 1]);
  EXPECT_GT(c.radii.back(), 0.5);
  // the tail of zeta(gamma) beyond K is about K^{1-gamma}/(gamma-1)
  EXPECT_NEAR(c.radii.back(), 0.5, 0.02);
}

TEST(Cutoff, RejectsGammaAtMostOne) {
  EXPECT_THROW(cutoff_constant(1.0), DomainError);
  EXPECT_THROW(cutoff_radii(1.0, 0.9, 10), DomainError);
}

TEST(Iteration, ParamsValidate) {
  IterationParams p;
  p.eps = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  IterationParams q;
  q.tau = -1.0;
  EXPECT_THROW(q.validate(), DomainError);
}

TEST(Iteration, ThresholdIsSharp) {
  YoungFunction yf(2.0);
  IterationParams p;
  Threshold th = b0_threshold(yf, p, 100000);
  EXPECT_GT(th.b0, 0.0);
  EXPECT_GE(induction_margin(p, th.b0 + 1e-9, th.argmax_k), -1e-9);
  EXPECT_LT(induction_margin(p, th.b0 - 1e-3, th.argmax_k), 0.0);
}

TEST(Iteration, GrowsLinearlyAboveThreshold) {
  YoungFunction yf(2.0);
  IterationParams p;
  Threshold th = b0_threshold(yf, p, 100000);
  IterationRun run = degiorgi_iterate_b(yf, p, th.b0 + 1.0, 2000);
  EXPECT_EQ(run.status, IterStatus::Ok);
  EXPECT_TRUE(run.linear_growth);
  ASSERT_EQ(run.states.size(), 2001u);
  for (const auto& s : run.states) EXPECT_GE(s.b, th.b0 + 1.0 + s.k - 1e-9);
}

TEST(Iteration, UAndLogFormAgree) {
  YoungFunction yf(2.0);
  IterationParams p;
  double b0 = 40.0;
  IterationRun a = degiorgi_iterate(yf, p, std::exp(-b0), 50);
  IterationRun b = degiorgi_iterate_b(yf, p, b0, 50);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) EXPECT_NEAR(a.states[i].b, b.states[i].b, 1e-9 * b.states[i].b);
}

TEST(Iteration, EstimateVariantDominates) {
  // Gamma is below its explicit estimate, so the estimate recursion lags behind
  YoungFunction yf(2.0);
  IterationParams p;
  IterationRun a = degiorgi_iterate_b(yf, p, 60.0, 100);
  IterationRun e = degiorgi_iterate_estimate(yf, p, 60.0, 100);
  ASSERT_EQ(a.states.size(), e.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) EXPECT_GE(a.states[i].b, e.states[i].b - 1e-9);
}

TEST(Iteration, ThresholdGrowsWithRatio) {
  YoungFunction yf(2.0);
  IterationParams p;
  ThresholdFit f = threshold_fit(yf, p, {1.0, 4.0, 16.0});
  ASSERT_EQ(f.thresholds.size(), 3u);
  EXPECT_LT(f.thresholds[0], f.thresholds[1]);
  EXPECT_LT(f.thresholds[1], f.thresholds[2]);
}

TEST(MaxPrinciple, ConditionAtThreshold) {
  YoungFunction yf(2.0);
  double b0 = max_principle_b0(yf, 100.0, 0.3);
  EXPECT_GT(b0, 0.0);
  EXPECT_TRUE(max_principle_condition(yf, 100.0, 0.3, b0 + 1e-6));
  EXPECT_FALSE(max_principle_condition(yf, 100.0, 0.3, b0 - 1e-3));
  IterationRun run = max_principle_iterate_b(yf, 100.0, 0.3, b0 + 1e-6, 500);
  EXPECT_EQ(run.status, IterStatus::DivergedB);
  EXPECT_TRUE(run.linear_growth);
}

TEST(MaxPrinciple, BelowThresholdFails) {
  YoungFunction yf(2.0);
  IterationRun run = max_principle_iterate_b(yf, 100.0, 0.3, 1.0, 500);
  EXPECT_FALSE(run.linear_growth);
}

TEST(MaxPrinciple, EasyCaseHasZeroThreshold) {
  YoungFunction yf(2.0);
  EXPECT_EQ(max_principle_b0(yf, 1.0, 1e-3), 0.0);
}
