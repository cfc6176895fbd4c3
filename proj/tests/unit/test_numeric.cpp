#include <gtest/gtest.h>

#include <cmath>

#include "degen/errors.hpp"
#include "degen/numeric.hpp"
#include "degen/rng.hpp"

using namespace degen;

namespace {
const double kPi = std::acos(-1.0);
}

TEST(Integrate, ClosedForms) {
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, kPi), 2.0, 1e-10);
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, 0.0, 1.0), std::exp(1.0) - 1.0, 1e-10);
  EXPECT_NEAR(integrate_gk([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0), kPi / 4, 1e-12);
  EXPECT_EQ(integrate([](double x) { return x; }, 0.3, 0.3), 0.0);
}

TEST(Integrate, Additivity) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    double w = rng.uniform(0.5, 5.0), ph = rng.uniform(0.0, 3.0);
    auto f = [&](double x) { return std::cos(w * x + ph) + x * x; };
    double a = rng.uniform(-2.0, 0.0), b = rng.uniform(1.0, 3.0), c = rng.uniform(a, b);
    QuadratureSpec q;
    double whole = integrate(f, a, b, q), split = integrate(f, a, c, q) + integrate(f, c, b, q);
    EXPECT_NEAR(whole, split, 2.0 * (q.abs_tol + q.rel_tol * std::fabs(whole)) * 10);
  }
}

TEST(Integrate, SqrtSingular) {
  // integral of 1/sqrt(b - u) over [a, b] is 2 sqrt(b - a)
  auto one = [](double) { return 1.0; };
  auto id = [](double u) { return u; };
  EXPECT_NEAR(integrate_sqrt_singular(one, id, 0.2, 1.0), 2.0 * std::sqrt(0.8), 1e-9);
  // no actual singularity: S' bounded below, compare with plain quadrature of the same integrand
  auto S = [](double u) { return u + u * u * u; };
  double plain = integrate([&](double u) { return std::cos(u) / std::sqrt(S(2.0) - S(u)); }, 0.0, 1.0);
  double sing = integrate_sqrt_singular([](double u) { return std::cos(u); }, S, 0.0, 2.0) -
                integrate_sqrt_singular([](double u) { return std::cos(u); },
                                        [&](double u) { return S(u); }, 1.0, 2.0);
  EXPECT_NEAR(plain, sing, 1e-7);
}

TEST(Integrate, BadArguments) {
  EXPECT_THROW(integrate([](double x) { return x; }, 1.0, 0.0), DomainError);
  QuadratureSpec bad;
  bad.abs_tol = -1.0;
  EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, bad), DomainError);
  EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), DomainError);
}

TEST(RootFinding, BisectAndToms) {
  auto h = [](double x) { return x * x - 2.0; };
  EXPECT_NEAR(bisect(h, 0.0, 2.0, 1e-13), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(find_root(h, 0.0, 2.0), std::sqrt(2.0), 1e-13);
  EXPECT_THROW(find_root(h, 2.0, 3.0), BracketError);
}

TEST(Gauss, ExactForPolynomials) {
  const GaussRule& g = gauss_legendre(5);
  double wsum = 0.0;
  for (double w : g.w) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-14);
  // degree 9 is the exactness limit for 5 nodes
  EXPECT_NEAR(gauss_fixed([](double x) { return std::pow(x, 8); }, 0.0, 1.0, 5), 1.0 / 9.0, 1e-14);
}

TEST(Eigen, FreeLaplacian) {
  const int m = 2000;
  double h = 2.0 / (m + 1);
  TridiagonalOperator T;
  T.grid_step = h;
  T.diagonal.assign(m, 2.0 / (h * h));
  T.off_diagonal.assign(m - 1, -1.0 / (h * h));
  Eigenpair ep = smallest_eigenpair(T);
  EXPECT_NEAR(ep.value, kPi * kPi / 4, 1e-5);
  double norm = 0.0;
  for (double v : ep.vector) norm += h * v * v;
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_GT(center_value(ep.vector), 0.0);
  EXPECT_NEAR(rayleigh_quotient(T, ep.vector) / ep.value, 1.0, 1e-10);
}

TEST(Eigen, SecondOrderConvergence) {
  auto lam = [](int m) {
    double h = 2.0 / (m + 1);
    TridiagonalOperator T;
    T.grid_step = h;
    T.diagonal.assign(m, 2.0 / (h * h));
    T.off_diagonal.assign(m - 1, -1.0 / (h * h));
    return smallest_eigenpair(T).value;
  };
  double e1 = std::fabs(lam(199) - kPi * kPi / 4), e2 = std::fabs(lam(399) - kPi * kPi / 4);
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

TEST(Eigen, SturmCountAndValidation) {
  TridiagonalOperator T;
  T.diagonal = {1.0, 2.0, 3.0};
  T.off_diagonal = {0.0, 0.0};
  EXPECT_EQ(sturm_count(T, 2.5), 2);
  EXPECT_EQ(sturm_count(T, 0.5), 0);
  TridiagonalOperator bad;
  bad.diagonal = {1.0, 2.0};
  EXPECT_THROW(smallest_eigenpair(bad), DomainError);
}

TEST(LinearFit, ExactLine) {
  LinearFit f = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
}

TEST(RngTest, Deterministic) {
  Rng a(11), b(11);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
