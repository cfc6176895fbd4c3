#include <gtest/gtest.h>

#include <cmath>

#include "degen/errors.hpp"
#include "degen/spectral.hpp"

using namespace degen;

namespace {
const double kPi = std::acos(-1.0);
}

TEST(Spectral, Mu0MatchesContinuum) {
  for (double a : {0.1, 0.5, 1.0}) EXPECT_NEAR(mu0(a, 4000) / (kPi * kPi / (4 * a * a) + 1.0), 1.0, 1e-5);
}

TEST(Spectral, PotentialShape) {
  ScalarFn g = decay_potential(1.0);
  EXPECT_EQ(g(0.0), 0.0);
  EXPECT_NEAR(g(0.5), std::exp(-2.0), 1e-16);
  EXPECT_DOUBLE_EQ(g(-0.5), g(0.5));
}

TEST(Spectral, FreeLimitWhenPotentialVanishes) {
  // eta tiny: the operator is -v'' on (-1,1)
  EigenResult e = least_eigen(decay_potential(1.0), 1e-8, 1.0, 2000, false);
  EXPECT_NEAR(e.lambda0, kPi * kPi / 4, 1e-4);
  EXPECT_NEAR(e.rayleigh / e.lambda0, 1.0, 1e-9);
}

TEST(Spectral, EigenvectorEvenAndUnimodal) {
  EigenResult e = least_eigen(decay_potential(1.0), 200.0, 1.0, 2000, true);
  ShapeDefect s = eigen_shape_defect(e);
  EXPECT_LT(s.asymmetry, 1e-8);
  EXPECT_LT(s.increase, 1e-8);
  EXPECT_NEAR(e.refined_lambda / e.lambda0, 1.0, 1e-3);
  EXPECT_NEAR(e.value_at(-1.0), 0.0, 1e-15);
  EXPECT_GT(e.value_at(0.0), 0.0);
}

TEST(Spectral, EigenvalueChain) {
  double d0 = 1.0;
  for (double eta : {10.0, 100.0, 1000.0}) {
    double a = a_of_eta(d0, eta);
    EXPECT_NEAR(eta * eta * std::exp(-d0 / a), 1.0, 1e-10);
    double l1 = least_eigen(decay_potential(d0), eta, 1.0, 2000, false).lambda0;
    double la = least_eigen(decay_potential(d0), eta, a, 2000, false).lambda0;
    EXPECT_LE(l1, la * (1 + 1e-9));
    EXPECT_LE(la, mu0(a, 2000) * (1 + 1e-9));
  }
}

TEST(Spectral, CoshSeries) {
  for (double t : {0.0, 0.3, 1.0})
    for (double lam : {0.5, 4.0, 20.0})
      EXPECT_NEAR(cosh_series(t, lam), std::cosh(t * std::sqrt(lam)), 1e-12 * std::cosh(t * std::sqrt(lam)));
}

TEST(Spectral, L4PartialSumsByHand) {
  // B = (1, 2, 3): n=2 -> (B1 B1)^2 = 1, n=3 -> (2 B1 B2)^2 = 16, n=4 -> (2 B1 B3 + B2^2)^2 = 100
  std::vector<double> s = l4_partial_sums({1.0, 2.0, 3.0}, {2, 3, 4});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(s[1], 17.0);
  EXPECT_DOUBLE_EQ(s[2], 117.0);
}

TEST(Spectral, PlancherelAndConvolution) {
  EXPECT_LT(plancherel_defect({1.0, -0.5, 0.25, 0.125}), 1e-12);
  SeriesSpec spec;
  ConvolutionBound c = convolution_lower_bound(spec, 500);
  EXPECT_GT(c.c_min, 0.0);
  EXPECT_EQ(c.violations, 0);
}

TEST(Spectral, SeriesSpecValidation) {
  SeriesSpec bad;
  bad.alpha_prime = -0.1;
  EXPECT_THROW(bad.validate(), DomainError);
  SeriesSpec spec;
  EXPECT_NEAR(spec.coefficient(4), std::pow(4.0, -0.75), 1e-15);
}

TEST(Spectral, DyEnergyDiverges) {
  SeriesSpec spec;
  std::vector<double> e = dy_energy_partial_sums(spec, {10, 100, 1000});
  EXPECT_GT(e[1], 5.0 * e[0]);
  EXPECT_GT(e[2], 5.0 * e[1]);
}

TEST(Spectral, SmallSeriesIsDeterministic) {
  SeriesSpec spec;
  spec.M = 16;
  SeriesData a = series_coefficients(spec, {0.0, 0.5}, {0.0, 0.25}, 400);
  SeriesData b = series_coefficients(spec, {0.0, 0.5}, {0.0, 0.25}, 400);
  ASSERT_EQ(a.lambdas.size(), 16u);
  EXPECT_EQ(a.lambdas, b.lambdas);
  for (std::size_t n = 1; n < a.lambdas.size(); ++n) EXPECT_GT(a.lambdas[n], a.lambdas[n - 1]);
  // t = 0 reduces cosh to 1
  EXPECT_NEAR(a.B_at(3, 0, 0), a.v_at_0[2] * spec.coefficient(3), 1e-12);
}
