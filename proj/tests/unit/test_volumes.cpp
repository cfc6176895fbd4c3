#include <gtest/gtest.h>

#include <cmath>

#include "degen/errors.hpp"
#include "degen/volumes.hpp"

using namespace degen;

namespace {
const double kPi = std::acos(-1.0);
}

TEST(Volumes, SmallBallIsEllipse) {
  // far from the degeneracy a small ball is an ellipse with semi-axes r and f(x1) r
  Geometry g = make_power_geometry(1.0);
  double x1 = 0.5, r = 1e-4;
  BallVolumeResult v = area_2d(g, x1, r, true);
  ASSERT_TRUE(v.has_oracle);
  EXPECT_NEAR(v.oracle() / (kPi * r * r * g.f(x1)), 1.0, 2e-3);
}

TEST(Volumes, FormulaComparableToOracle) {
  for (double s : {0.5, 1.0}) {
    Geometry g = make_power_geometry(s);
    for (double x1 : {0.0, 0.1, 0.3})
      for (int k = 3; k <= 7; ++k) {
        double r = std::ldexp(1.0, -k);
        BallVolumeResult v = area_2d(g, x1, r, true);
        EXPECT_GT(v.ratio(), 1e-2) << s << " " << x1 << " " << r;
        EXPECT_LT(v.ratio(), 1e2) << s << " " << x1 << " " << r;
      }
  }
}

TEST(Volumes, OracleRefinementStable) {
  Geometry g = make_power_geometry(1.0);
  OracleGrid base;
  double a = area_2d(g, 0.05, 0.1, true, base).log_oracle;
  double b = area_2d(g, 0.05, 0.1, true, base.refine()).log_oracle;
  EXPECT_NEAR(a, b, 1e-6);
}

TEST(Volumes, ColumnAreaSplitsAdd) {
  Geometry g = make_power_geometry(1.0);
  ColumnArea c = column_area(g, 0.1, 0.08, 0.12);
  EXPECT_NEAR(std::exp(c.log_left - c.log_total) + std::exp(c.log_right - c.log_total), 1.0, 1e-9);
}

TEST(Volumes, ThickPartsSumToOne) {
  Geometry g = make_power_geometry(1.0);
  ThickParts t = thick_part_measures(g, 0.1, 0.05);
  EXPECT_NEAR(t.b_plus + t.b_minus, 1.0, 1e-12);
  EXPECT_GT(t.b_plus, 0.0);
  EXPECT_GT(t.b_minus, 0.0);
}

TEST(Volumes, NdComparable) {
  Geometry g = make_power_geometry(1.0);
  BallVolumeResult v = volume_nd(g, 0.5, std::ldexp(1.0, -6), 3, true);
  EXPECT_GT(v.ratio(), 1e-2);
  EXPECT_LT(v.ratio(), 1e2);
}

TEST(Volumes, DomainErrors) {
  Geometry g = make_power_geometry(1.0);
  EXPECT_THROW(log_formula_2d(g, 0.1, 0.0), DomainError);
  EXPECT_THROW(log_formula_nd(g, 0.1, 0.1, 1), DomainError);
}

TEST(Volumes, RadialIntegralOfConstant) {
  Geometry g = make_power_geometry(1.0);
  double v = radial_integral(g, [](double) { return 1.0; }, 0.1);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
}

TEST(Volumes, JacobianForms) {
  Geometry g = make_power_geometry(1.0);
  JacobianProbe p = jacobian_probe(g, 0.05, 1e-3);
  EXPECT_NEAR(p.jacobian / p.fd_det, 1.0, 1e-3);
  EXPECT_GT(p.ratio(), 1e-2);
  EXPECT_LT(p.ratio(), 1e2);
}

TEST(Volumes, ColumnHeightMatchesMembership) {
  Geometry g = make_power_geometry(1.0);
  double x1 = 0.05, r = 0.1;
  for (double u : {-0.03, 0.0, 0.05, 0.1, 0.14}) {
    double h = std::exp(ball_column_log_height(g, x1, r, u));
    EXPECT_LT(control_distance_2d(g, {x1, 0.0}, {u, 0.99 * h}).d, r) << u;
    EXPECT_GT(control_distance_2d(g, {x1, 0.0}, {u, 1.01 * h}).d, r) << u;
  }
}
