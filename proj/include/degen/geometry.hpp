#pragma once
#include <string>
#include <vector>

#include "degen/numeric.hpp"
#include "degen/report.hpp"

namespace degen {

// Degeneracy F on (0,R) with f = exp(-F), extended evenly to (-R,R).
// Handles are evaluated at |x|; F(0) = +inf.
class Geometry {
 public:
  struct Handles {
    ScalarFn F, F_prime, F_second;
    // optional accurate F(u) - F(w); falls back to subtraction
    std::function<double(double, double)> F_diff;
    // optional accurate F(w + du) - F(w) for an exactly known offset du
    std::function<double(double, double)> F_step;
    // optional inverse of F on (0,R)
    ScalarFn F_inverse;
  };

  Geometry(Handles h, double R, double eps, double C_struct, double c5, std::string name);

  // Finite-difference derivatives for a bare F.
  static Geometry from_function(ScalarFn F, double R, double eps, double C_struct, double c5,
                                std::string name = "custom");

  double F(double x) const;
  double Fp(double x) const;   // F'(|x|) < 0
  double Fpp(double x) const;  // F''(|x|) > 0
  double absFp(double x) const { return -Fp(x); }
  double f(double x) const;
  double Fdiff(double u, double w) const;  // F(|u|) - F(|w|)
  double Fstep(double w, double du) const; // F(w + du) - F(w), w > 0, w + du >= 0
  // x in (0,R) with F(x) = L; DomainError if F(x) = L has no root below R
  double Finv(double L) const;

  double R() const { return R_; }
  double eps() const { return eps_; }
  double C_struct() const { return C_; }
  double c5() const { return c5_; }
  const std::string& name() const { return name_; }
  double sigma() const { return sigma_; }  // 0 unless a power geometry

  // max relative mismatch of central differences of F against F' on samples
  double derivative_crosscheck(const std::vector<double>& xs) const;

 private:
  friend Geometry make_power_geometry(double, double);
  double check(double x) const;
  Handles h_;
  double R_, eps_, C_, c5_;
  std::string name_;
  double sigma_ = 0.0;
};

// F(x) = x^-sigma; eps = min(sigma, 1), C = 2^(sigma+1), c5 = 1+sigma.
Geometry make_power_geometry(double sigma, double R = 1.0);

// {2^-k : k = kmin..kmax} intersected with (0,R)
std::vector<double> dyadic_grid(double R, int kmin = 3, int kmax = 20);

// One report per structure condition (1)..(5).
std::vector<ComparabilityReport> check_structure_conditions(const Geometry& g, const std::vector<double>& grid,
                                                            double tol = 1e-10);

// Consequences of the structure conditions: strict decay inequality, f(x1) ~ f(x2) on
// neighbouring points, F''/F'^2 ~ 1/(-xF').
std::vector<ComparabilityReport> consequences_probe(const Geometry& g, const std::vector<double>& grid);

}  // namespace degen
