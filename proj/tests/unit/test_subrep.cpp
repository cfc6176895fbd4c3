#include <gtest/gtest.h>

#include <cmath>

#include "degen/errors.hpp"
#include "degen/subrep.hpp"

using namespace degen;

namespace {
const double kPi = std::acos(-1.0);
}

TEST(Radii, StandardSequenceDecreases) {
  Geometry g = make_power_geometry(1.0);
  RadiiOptions opt;
  opt.K = 40;
  RadiiSequence s = radii_sequence(g, 0.0, 0.125, RadiiMode::Standard, opt);
  ASSERT_GE(s.radii.size(), 3u);
  EXPECT_DOUBLE_EQ(s.radii.front(), 0.125);
  ASSERT_EQ(s.q.size(), s.radii.size() - 1);
  for (std::size_t k = 0; k + 1 < s.radii.size(); ++k) {
    EXPECT_LT(s.radii[k + 1], s.radii[k]);
    EXPECT_GE(s.radii[k + 1], 0.5 * s.radii[k] * (1 - 1e-12));
    double a = s.radii[k], b = s.radii[k + 1];
    EXPECT_NEAR(s.q[k], std::sqrt(a * a - b * b), 1e-14);
  }
  EXPECT_GT(s.ball_ratio_min, 1.0);
  EXPECT_LT(s.ball_ratio_max, 1e3);
}

TEST(Radii, IndexOf) {
  Geometry g = make_power_geometry(1.0);
  RadiiSequence s = radii_sequence(g, 0.0, 0.125, RadiiMode::Standard);
  double mid = 0.5 * (s.radii[2] + s.radii[3]);
  EXPECT_EQ(s.index_of(mid), 2);
  EXPECT_EQ(s.index_of(1.0), -1);
  EXPECT_EQ(s.index_of(s.radii[1]), 0);
}

TEST(Radii, GammaModeGuarded) {
  Geometry g = make_power_geometry(1.0);
  RadiiOptions opt;
  opt.gamma = 0.5;
  RadiiSequence s = radii_sequence(g, 0.0, 0.125, RadiiMode::Gamma, opt);
  for (std::size_t k = 0; k + 1 < s.radii.size(); ++k) EXPECT_GE(s.radii[k + 1], 0.5 * s.radii[k] * (1 - 1e-12));
}

TEST(Radii, RejectsBadInput) {
  Geometry g = make_power_geometry(1.0);
  EXPECT_THROW(radii_sequence(g, 0.0, 0.0, RadiiMode::Standard), DomainError);
  EXPECT_THROW(radii_sequence(g, 0.0, 2.0, RadiiMode::Standard), DomainError);
}

TEST(UnitBall, Volumes) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(0), 1.0);
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * kPi / 3.0, 1e-14);
}

TEST(Kernel, VanishesOutsideCusp) {
  Geometry g = make_power_geometry(1.0);
  KernelSpec spec{0.125, 2, KernelVariant::DHat};
  // y left of x is never in the cusp
  EXPECT_EQ(kernel_eval(g, spec, {0.05, 0.0}, {0.01, 0.0}), 0.0);
  EXPECT_EQ(kernel_log_eval(g, spec, {0.05, 0.0}, {0.01, 0.0}), -std::numeric_limits<double>::infinity());
}

TEST(Kernel, SpecValidation) {
  Geometry g = make_power_geometry(1.0);
  KernelSpec bad{0.0, 2, KernelVariant::DHat};
  EXPECT_THROW(bad.validate(g), DomainError);
  KernelSpec bad_dim{0.125, 1, KernelVariant::DHat};
  EXPECT_THROW(bad_dim.validate(g), DomainError);
}

TEST(Kernel, DHatRowIntegralBounded) {
  Geometry g = make_power_geometry(1.0);
  for (int k : {4, 6}) {
    double r = std::ldexp(1.0, -k);
    RowIntegral ri = kernel_row_integral(g, 0.125, {r, 0.0});
    EXPECT_GT(ri.dhat / r, 0.5);
    EXPECT_LT(ri.dhat / r, 5.0);
    EXPECT_GT(ri.naive, ri.dhat);
  }
}

TEST(TestFamily, GradientMatchesDefinition) {
  Geometry g = make_power_geometry(1.0);
  auto fam = standard_test_family(g, 0.125);
  ASSERT_FALSE(fam.empty());
  for (const auto& tf : fam) {
    double x = 0.07, y = 1e-4;
    double expect = std::hypot(tf.wx(x, y), g.f(x) * tf.wy(x, y));
    EXPECT_NEAR(grad_A_norm(g, tf, x, y), expect, 1e-12 * (1 + expect)) << tf.name;
    double h = 1e-6;
    EXPECT_NEAR((tf.w(x + h, y) - tf.w(x - h, y)) / (2 * h), tf.wx(x, y), 1e-5 * (1 + std::fabs(tf.wx(x, y))))
        << tf.name;
  }
}

TEST(Endpoint, GrowthConditionBySigma) {
  EndpointResult a = sobolev_endpoint_integral(make_power_geometry(0.4), 2.0, 0.125, 0.05, 2);
  EXPECT_TRUE(a.gammacond_ok);
  EXPECT_GT(a.I / a.bound, 1e-2);
  EXPECT_LT(a.I / a.bound, 1e2);
  EXPECT_LE(a.I_small, a.small_cap * (1 + 1e-9));
  EndpointResult b = sobolev_endpoint_integral(make_power_geometry(0.6), 2.0, 0.125, 0.05, 2);
  EXPECT_FALSE(b.gammacond_ok);
  EXPECT_NEAR(b.q_max, 1.6, 1e-9);
}

TEST(Division, ConstantHolds) {
  ComparabilityReport r = division_of_regions_check(3, 200);
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_LE(r.ratio_max, 1.0 + 1e-12);
}

TEST(AverageControl, NormalizedControlAndOverlap) {
  Geometry g = make_power_geometry(1.0);
  auto reps = average_control_check(g, {0.0625}, {}, 8, 5);
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_TRUE(reps[0].pass) << reps[0].ratio_max;
  EXPECT_TRUE(reps[1].pass) << reps[1].ratio_min;
  // the end at x is never larger than the reference end
  EXPECT_LE(reps[2].ratio_max, 1.0);
  EXPECT_GT(reps[2].ratio_min, 0.0);
}

TEST(AverageControl, RejectsBadInput) {
  Geometry g = make_power_geometry(1.0);
  EXPECT_THROW(average_control_check(g, {}, {}, 4, 1), DomainError);
  EXPECT_THROW(average_control_check(g, {0.6}, {}, 4, 1), DomainError);
}
