#include <gtest/gtest.h>

#include <cmath>

#include "degen/errors.hpp"
#include "degen/geodesics.hpp"
#include "degen/rng.hpp"

using namespace degen;

TEST(Geodesic, TurningAbscissaPower) {
  Geometry g = make_power_geometry(1.0);
  // f(X) = lambda gives X = 1/ln(1/lambda)
  for (double lam : {1e-2, 1e-5, 1e-12}) {
    GeodesicRecord rec = turning_data(g, lam, 16);
    EXPECT_NEAR(rec.X * std::log(1.0 / lam), 1.0, 1e-10);
    EXPECT_GE(rec.R_len, rec.X);
    EXPECT_GT(rec.Y, 0.0);
    EXPECT_NEAR(rec.Y_prime / rec.Y_prime_fd, 1.0, 1e-3);
  }
}

TEST(Geodesic, SamplesMonotone) {
  Geometry g = make_power_geometry(0.5);
  GeodesicRecord rec = turning_data(g, 1e-3, 32);
  ASSERT_GE(rec.samples.size(), 2u);
  for (std::size_t i = 1; i < rec.samples.size(); ++i) {
    EXPECT_GE(rec.samples[i].x, rec.samples[i - 1].x);
    EXPECT_GE(rec.samples[i].y, rec.samples[i - 1].y);
    EXPECT_GE(rec.samples[i].t, rec.samples[i - 1].t);
  }
}

TEST(Geodesic, ArcDominatesAbscissa) {
  Geometry g = make_power_geometry(1.0);
  double lam = 1e-4, X = 1.0 / std::log(1.0 / lam);
  for (double x : {0.25 * X, 0.5 * X}) {
    double t = arc_length(g, lam, x);
    EXPECT_GE(t, x);
    EXPECT_LT(t, x * (1.0 + 1e-6));  // (f/lambda)^2 <= lambda^2 for x <= X/2
  }
  double near_turn = arc_length(g, lam, 0.9 * X);
  EXPECT_GT(near_turn, 0.9 * X * (1.0 + 1e-3));
}

TEST(Distance, HorizontalIsEuclidean) {
  Geometry g = make_power_geometry(1.0);
  DistanceResult r = control_distance_2d(g, {-0.2, 0.3}, {0.35, 0.3});
  EXPECT_NEAR(r.d, 0.55, 1e-13);
  EXPECT_EQ(r.kind, DistanceKind::Horizontal);
}

TEST(Distance, BoundsAndSymmetry) {
  Geometry g = make_power_geometry(1.0);
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    Point2 p{rng.uniform(-0.5, 0.5), rng.uniform(-0.05, 0.05)};
    Point2 q{rng.uniform(-0.5, 0.5), rng.uniform(-0.05, 0.05)};
    DistanceResult a = control_distance_2d(g, p, q), b = control_distance_2d(g, q, p);
    EXPECT_NEAR(a.d, b.d, 1e-9 * (1.0 + a.d));
    EXPECT_GE(a.d, a.lower_bound * (1.0 - 1e-9));
    EXPECT_LE(a.d, a.upper_bound * (1.0 + 1e-9));
  }
}

TEST(Distance, TriangleInequality) {
  Geometry g = make_power_geometry(1.0);
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    Point2 p{rng.uniform(-0.4, 0.4), rng.uniform(-0.02, 0.02)};
    Point2 q{rng.uniform(-0.4, 0.4), rng.uniform(-0.02, 0.02)};
    Point2 s{rng.uniform(-0.4, 0.4), rng.uniform(-0.02, 0.02)};
    double pq = control_distance_2d(g, p, q).d, qs = control_distance_2d(g, q, s).d,
           ps = control_distance_2d(g, p, s).d;
    EXPECT_LE(ps, (pq + qs) * (1.0 + 1e-7));
  }
}

TEST(Distance, LogHeightMatchesPlain) {
  Geometry g = make_power_geometry(1.0);
  double dy = 3e-4;
  DistanceResult a = control_distance_2d(g, {0.1, 0.0}, {0.2, dy});
  DistanceResult b = control_distance_2d_log(g, 0.1, 0.2, std::log(dy));
  EXPECT_NEAR(a.d / b.d, 1.0, 1e-12);
  DistanceResult h = control_distance_2d_log(g, 0.1, 0.2, -std::numeric_limits<double>::infinity());
  EXPECT_NEAR(h.d, 0.1, 1e-14);
  EXPECT_THROW(control_distance_2d_log(g, 0.1, 0.2, std::nan("")), DomainError);
}

TEST(Distance, UnderflowingHeightStaysFinite) {
  Geometry g = make_power_geometry(1.0);
  // f(2^-10) = e^-1024 is below the double range
  double r = std::ldexp(1.0, -10);
  DistanceResult d = control_distance_2d_log(g, 0.0, r, -1024.0 + std::log(r));
  EXPECT_TRUE(std::isfinite(d.d));
  EXPECT_GE(d.d, r * (1.0 - 1e-12));
  EXPECT_LE(d.d, 3.0 * r);
}

TEST(Distance, SameColumnIsFinite) {
  Geometry g = make_power_geometry(1.0);
  for (double x : {0.05, 0.2, -0.1}) {
    double dy = 1e-3 * g.f(x);
    DistanceResult d = control_distance_2d(g, {x, 0.0}, {x, dy});
    EXPECT_TRUE(std::isfinite(d.d)) << x;
    EXPECT_GT(d.d, 0.0);
    EXPECT_LE(d.d, d.upper_bound * (1.0 + 1e-9));
    EXPECT_NEAR(d.d, control_distance_2d(g, {x, dy}, {x, 0.0}).d, 1e-9 * d.d);
  }
}

TEST(Distance, NdReducesToPlane) {
  Geometry g = make_power_geometry(1.0);
  double d2 = control_distance_2d(g, {0.1, 0.0}, {0.3, 0.01}).d;
  double d3 = control_distance_nd(g, {0.1, 0.0, 0.0}, {0.3, 0.0, 0.01});
  EXPECT_NEAR(d2, d3, 1e-10);
  EXPECT_GE(control_distance_nd(g, {0.1, 0.0, 0.0}, {0.1, 0.2, 0.0}), 0.0);
}

TEST(BallShape, GapAndHeight) {
  Geometry g = make_power_geometry(1.0);
  for (double r : {0.01, 0.05, 0.1}) {
    BallShape b = ball_shape(g, 0.2, r);
    EXPECT_GT(b.r_star, 0.0);
    EXPECT_LT(b.r_star, r);
    EXPECT_NEAR(b.gap, r - b.r_star, 1e-12);
    EXPECT_NEAR(std::log(b.h), b.log_h, 1e-10);
    EXPECT_GT(b.height_ratio, 0.1);
    EXPECT_LT(b.height_ratio, 10.0);
  }
}

TEST(BallShape, ColumnHeightOutsideIsMinusInf) {
  Geometry g = make_power_geometry(1.0);
  EXPECT_EQ(ball_column_log_height(g, 0.2, 0.05, 0.3), -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isfinite(ball_column_log_height(g, 0.2, 0.05, 0.21)));
}
