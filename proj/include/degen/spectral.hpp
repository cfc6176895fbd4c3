#pragma once
#include <string>
#include <vector>

#include "degen/numeric.hpp"
#include "degen/report.hpp"

namespace degen {

struct EigenResult {
  double eta = 0.0;
  double a = 0.0;
  double lambda0 = 0.0;
  std::vector<double> v0;  // interior nodes x_i = -a + (i+1) h
  double grid_step = 0.0;
  double rayleigh = 0.0;
  double refined_lambda = 0.0;  // same problem on 2m nodes (0 when skipped)
  double x(std::size_t i) const { return -a + static_cast<double>(i + 1) * grid_step; }
  // linear interpolation with zero Dirichlet ends
  double value_at(double x) const;
};

// g(x) = exp(-delta0/|x|), g(0) = 0
ScalarFn decay_potential(double delta0);

// Least eigenpair of -v'' + g eta^2 v on (-a,a), Dirichlet ends, m interior nodes.
EigenResult least_eigen(const ScalarFn& g, double eta, double a, int m, bool refine_check = true);
// Least eigenvalue of -v'' + v on (-a,a): pi^2/(4a^2) + 1 in the continuum.
double mu0(double a, int m);
// Half-width where g eta^2 <= 1 for g <= C exp(-delta0/|x|).
double a_of_eta(double delta0, double eta, double C = 1.0);
// max asymmetry and max increase on the right half, relative to max |v|
struct ShapeDefect {
  double asymmetry = 0.0;
  double increase = 0.0;
};
ShapeDefect eigen_shape_defect(const EigenResult& e);

// lambda0(1,eta)/(ln eta)^2 over the sweep; also checks monotonicity in eta and
// the chain lambda0(1,eta) <= lambda0(a(eta),eta) <= mu0(a(eta)).
ComparabilityReport lambda_log_bound_sweep(double delta0, const std::vector<double>& etas, int m = 4000);

struct SeriesSpec {
  double alpha_prime = 0.25;
  double delta0 = 1.0;
  int M = 512;
  double coefficient(int n) const;  // n^{-(1/2 + alpha')} for n >= 1
  void validate() const;
};

struct SeriesData {
  std::vector<double> xs, ts;
  std::vector<double> lambdas;  // index n-1
  std::vector<double> v_at_0;
  // B[n-1][i * ts.size() + j] = cosh(t_j sqrt(lambda_n)) v_n(x_i) a_n
  std::vector<std::vector<double>> B;
  double B_at(int n, std::size_t i, std::size_t j) const { return B[n - 1][i * ts.size() + j]; }
};

// Per-n least eigenpairs for g with eta = n on (-1,1). When cache_dir is
// nonempty, eigenvalues and sampled eigenvectors are kept on disk keyed by a
// hash of the inputs.
SeriesData series_coefficients(const SeriesSpec& spec, const std::vector<double>& xs, const std::vector<double>& ts,
                               int m = 1000, const std::string& cache_dir = {});

// Sum_{k<=terms} (t^2 lambda)^k/(2k)!
double cosh_series(double t, double lambda, int terms = 50);

// S_M = sum_{n=2}^{M} (sum_{k=1}^{n-1} B_{n-k} B_k)^2 for each requested M
// (B given as b[0] = B_1, ...).
std::vector<double> l4_partial_sums(const std::vector<double>& b, const std::vector<int>& Ms);

// min over 2 <= n <= nmax of n^{2 alpha'} sum_{k=1}^{n-1} a_{n-k} a_k
struct ConvolutionBound {
  double c_min = 0.0;
  int argmin = 0;
  int violations = 0;  // entries below c_min (0 by construction, kept for the report)
};
ConvolutionBound convolution_lower_bound(const SeriesSpec& spec, int nmax);

// sqrt(N) alpha^{2N} ||w_N|| / (2N)! for N = 0..N_max from the given eigenvalues.
ComparabilityReport wn_sobolev_norms(const SeriesSpec& spec, const std::vector<double>& lambdas, int N_max,
                                     double alpha);

// Relative defect of |dx w_N|^2 + |sqrt(g) dy w_N|^2 = <w_{N+1}, w_N> with
// grid differences and Parseval in y, using the first M_terms eigenpairs.
double energy_identity_defect(const SeriesSpec& spec, int M_terms, int N, int m = 400);

// Relative defect between a y-grid quadrature of |sum e^{iny} B_n|^2 and
// 2 pi sum B_n^2.
double plancherel_defect(const std::vector<double>& b);

// sum_{n<=M} n^2 a_n^2 for each requested M
std::vector<double> dy_energy_partial_sums(const SeriesSpec& spec, const std::vector<int>& Ms);

}  // namespace degen
