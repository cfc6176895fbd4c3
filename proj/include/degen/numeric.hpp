#pragma once
#include <functional>
#include <utility>
#include <vector>

namespace degen {

using ScalarFn = std::function<double(double)>;

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 60;  // recursion depth limit
  void validate() const;
};

// Adaptive Simpson with Richardson correction.
double integrate(const ScalarFn& f, double a, double b, const QuadratureSpec& spec = {});

// Adaptive Gauss-Kronrod (15 point). Used on hot paths where the integrand is
// smooth after substitution; same error contract as integrate().
double integrate_gk(const ScalarFn& f, double a, double b, const QuadratureSpec& spec = {});

// Integral of rho(u)/sqrt(S(b)-S(u)) over [a,b] with S strictly increasing.
// The substitution u = b - s^2 removes the endpoint singularity.
double integrate_sqrt_singular(const ScalarFn& rho, const ScalarFn& S, double a, double b,
                               const QuadratureSpec& spec = {});

// Plain bisection; result bracketed to width <= tol.
double bisect(const ScalarFn& h, double lo, double hi, double tol);

// Bracketed root via TOMS 748. Throws BracketError when signs agree.
double find_root(const ScalarFn& h, double lo, double hi, double rel_tol = 1e-14,
                 int max_iter = 200);

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// Fixed-order Gauss-Legendre on [a,b].
double gauss_fixed(const ScalarFn& f, double a, double b, int n);

struct TridiagonalOperator {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;
  double grid_step = 1.0;
  void validate() const;
};

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;
};

// Number of eigenvalues of T strictly below x (Sturm count).
int sturm_count(const TridiagonalOperator& T, double x);

// Smallest eigenvalue located by Sturm bisection, eigenvector by shifted inverse
// iteration; value is the Rayleigh quotient of the converged vector.
// Vector normalized so grid_step * sum v^2 = 1, v(center) >= 0.
Eigenpair smallest_eigenpair(const TridiagonalOperator& T);

double rayleigh_quotient(const TridiagonalOperator& T, const std::vector<double>& v);

// Value at the midpoint of the grid (interpolated for even sizes).
double center_value(const std::vector<double>& v);

// Least-squares line y = a + b x; returns {a, b, R^2}.
struct LinearFit {
  double intercept, slope, r2;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace degen
