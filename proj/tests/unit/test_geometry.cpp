#include <gtest/gtest.h>

#include <cmath>

#include "degen/errors.hpp"
#include "degen/geometry.hpp"

using namespace degen;

TEST(PowerGeometry, ClosedForms) {
  Geometry g = make_power_geometry(1.0);
  EXPECT_DOUBLE_EQ(g.F(0.5), 2.0);
  EXPECT_NEAR(g.f(0.5), std::exp(-2.0), 1e-16);
  EXPECT_DOUBLE_EQ(g.Fp(0.5), -4.0);
  EXPECT_DOUBLE_EQ(g.Fpp(0.5), 16.0);
  EXPECT_DOUBLE_EQ(g.f(-0.3), g.f(0.3));
  Geometry h = make_power_geometry(0.5);
  EXPECT_NEAR(h.F(0.25), 2.0, 1e-15);
  EXPECT_NEAR(h.Fp(0.25), -0.5 * std::pow(0.25, -1.5), 1e-12);
}

TEST(PowerGeometry, AccurateDifferences) {
  Geometry g = make_power_geometry(1.0);
  // 1/u - 1/w = (w - u)/(uw) without cancellation
  double w = 0.3, du = 1e-12;
  EXPECT_NEAR(g.Fstep(w, du) / (-du / (w * (w + du))), 1.0, 1e-9);
  EXPECT_NEAR(g.Fdiff(0.2, 0.4), 2.5, 1e-14);
  EXPECT_EQ(g.Fdiff(0.0, 0.4), std::numeric_limits<double>::infinity());
}

TEST(PowerGeometry, InverseRoundTrip) {
  for (double s : {0.25, 1.0, 1.5}) {
    Geometry g = make_power_geometry(s);
    for (double x : {0.01, 0.1, 0.7}) EXPECT_NEAR(g.Finv(g.F(x)) / x, 1.0, 1e-13);
  }
}

TEST(PowerGeometry, DomainErrors) {
  EXPECT_THROW(make_power_geometry(0.0), DomainError);
  EXPECT_THROW(make_power_geometry(1.0, 2.0), DomainError);
  Geometry g = make_power_geometry(1.0);
  EXPECT_THROW(g.F(1.0), DomainError);
  EXPECT_THROW(g.f(-1.5), DomainError);
}

TEST(StructureConditions, PassOnDyadics) {
  for (double s : {0.25, 0.5, 0.9, 1.0, 1.5}) {
    Geometry g = make_power_geometry(s);
    auto reps = check_structure_conditions(g, dyadic_grid(g.R(), 3, 20));
    ASSERT_EQ(reps.size(), 5u);
    for (const auto& r : reps) EXPECT_TRUE(r.pass) << "sigma=" << s << " " << r.name << " " << r.detail;
  }
}

TEST(StructureConditions, ConsequencesHold) {
  Geometry g = make_power_geometry(1.0);
  for (const auto& r : consequences_probe(g, dyadic_grid(g.R(), 3, 20))) {
    EXPECT_TRUE(r.pass) << r.name << " " << r.detail;
    EXPECT_TRUE(std::isfinite(r.ratio_max)) << r.name;
    // the decay ratio may underflow to 0, which is the strict inequality
    EXPECT_GE(r.ratio_min, 0.0) << r.name;
  }
}

TEST(CustomGeometry, FiniteDifferenceDerivatives) {
  Geometry g = Geometry::from_function([](double x) { return 1.0 / x; }, 1.0, 1.0, 4.0, 2.0);
  EXPECT_NEAR(g.Fp(0.5), -4.0, 1e-6);
  EXPECT_NEAR(g.Fpp(0.5), 16.0, 1e-3);
  EXPECT_LT(g.derivative_crosscheck({0.1, 0.2, 0.4}), 1e-6);
}

TEST(DyadicGrid, RespectsRadius) {
  auto grid = dyadic_grid(0.3, 1, 4);
  ASSERT_EQ(grid.size(), 3u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.25);
  EXPECT_DOUBLE_EQ(grid.back(), 0.0625);
}
