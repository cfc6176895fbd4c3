#include <gtest/gtest.h>

#include <cmath>

#include "degen/errors.hpp"
#include "degen/orlicz.hpp"
#include "degen/rng.hpp"

using namespace degen;

TEST(Young, BranchesMeetAtKnot) {
  YoungFunction yf(2.0);
  double E = yf.E();
  EXPECT_NEAR(E, std::exp(4.0), 1e-10);
  EXPECT_NEAR(yf.phi(E * (1 - 1e-12)) / yf.phi(E * (1 + 1e-12)), 1.0, 1e-9);
  EXPECT_NEAR(yf.phi(0.5), 16.0 * 0.5, 1e-14);
  EXPECT_NEAR(yf.phi(1e4), 1e4 * std::pow(std::log(1e4), 2), 1e-6);
  EXPECT_EQ(yf.phi(0.0), 0.0);
}

TEST(Young, InverseRoundTrip) {
  YoungFunction yf(1.5);
  for (double t : {1e-3, 0.7, 30.0, 1e3, 1e8}) {
    EXPECT_NEAR(yf.phi_inverse(yf.phi(t)) / t, 1.0, 1e-10);
    EXPECT_NEAR(yf.log_phi(t), std::log(yf.phi(t)), 1e-10);
  }
}

TEST(Young, ConjugateClosedFormMatchesQuadrature) {
  for (double N : {1.5, 2.0, 3.0}) {
    YoungFunction yf(N, true);
    for (double s : {1.2, 1.5, 2.0, 5.0, 50.0}) {
      double s_scaled = s * yf.knot_slope();
      EXPECT_NEAR(yf.conj(s_scaled) / yf.conj_by_quadrature(s_scaled), 1.0, 1e-6) << "N=" << N << " s=" << s;
    }
    // the linear branch has a flat conjugate below the slope
    EXPECT_EQ(yf.conj(0.5 * yf.knot_slope()), 0.0);
    EXPECT_EQ(yf.conj_by_quadrature(yf.knot_slope()), 0.0);
  }
}

TEST(Young, YoungInequality) {
  YoungFunction yf(2.0);
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    double s = std::exp(rng.uniform(-5.0, 12.0)), t = std::exp(rng.uniform(-3.0, 6.0));
    EXPECT_LE(s * t, (yf.phi(s) + yf.conj(t)) * (1.0 + 1e-12));
  }
}

TEST(Young, GammaIdentity) {
  YoungFunction yf(2.0);
  for (double x : {1e-8, 1e-3, 0.1, 0.5}) {
    EXPECT_NEAR(yf.gamma(x) * yf.conj_inverse(1.0 / x), 1.0, 1e-10);
    ConjInverseGamma cg = conj_inverse_and_gamma(yf, x);
    EXPECT_NEAR(cg.gamma, yf.gamma(x), 1e-12 * yf.gamma(x));
  }
  EXPECT_TRUE(conj_inverse_and_gamma(yf, 1e-12).estimate_ok);
}

TEST(Young, RejectsBadN) {
  EXPECT_THROW(YoungFunction(0.5), DomainError);
  EXPECT_THROW(YoungFunction(1.0), DomainError);
  EXPECT_THROW(YoungFunction(-1.0), DomainError);
  EXPECT_THROW(YoungFunction(std::nan("")), DomainError);
  EXPECT_THROW(YoungFunction(3.0), DomainError);
  EXPECT_NO_THROW(YoungFunction(3.0, true));
}

TEST(Norm, ConstantFunction) {
  // constant c on total mass 1: Phi(c/k) = 1
  YoungFunction yf(2.0);
  double c = 3.0;
  double k = orlicz_norm(yf, {c, c, c, c}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(k, c / yf.phi_inverse(1.0), 1e-10 * k);
  EXPECT_THROW(orlicz_norm(yf, {0.0, 0.0}, {0.5, 0.5}), ZeroFunction);
}

TEST(Norm, HomogeneousAndTriangle) {
  YoungFunction yf(2.0);
  Rng rng(8);
  std::vector<double> f(20), h(20), w(20), sum(20);
  for (int i = 0; i < 20; ++i) {
    f[i] = rng.uniform(-5.0, 5.0);
    h[i] = rng.uniform(-5.0, 5.0);
    w[i] = rng.uniform(0.01, 1.0);
    sum[i] = f[i] + h[i];
  }
  double nf = orlicz_norm(yf, f, w), nh = orlicz_norm(yf, h, w);
  std::vector<double> f3(f);
  for (double& v : f3) v *= 3.0;
  EXPECT_NEAR(orlicz_norm(yf, f3, w), 3.0 * nf, 1e-9 * nf);
  EXPECT_LE(orlicz_norm(yf, sum, w), (nf + nh) * (1.0 + 1e-9));
}

TEST(Algebra, AllFamiliesPass) {
  YoungFunction yf(2.0);
  AlgebraOptions opt;
  opt.submult_trials = 2000;
  opt.young_trials = 500;
  opt.holder_trials = 50;
  opt.gamma_points = 40;
  auto reps = algebra_checks(yf, 7, opt);
  EXPECT_FALSE(reps.empty());
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.name << " " << r.detail;
}
