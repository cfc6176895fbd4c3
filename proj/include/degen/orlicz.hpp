#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

#include "degen/numeric.hpp"
#include "degen/report.hpp"

namespace degen {

// Phi_N(t) = (2N)^N t below E = e^{2N}, t (ln t)^N above.
class YoungFunction {
 public:
  explicit YoungFunction(double N, bool allow_large_N = false);

  double N() const { return N_; }
  double E() const { return E_; }
  double knot_slope() const { return c_; }  // (2N)^N

  double phi(double t) const;
  double log_phi(double t) const;
  double phi_prime(double t) const;  // right derivative; jumps at E
  double phi_inverse(double y) const;

  // closed form via the Legendre identity
  double conj(double s) const;
  // integral of (Phi')^{-1}; verification path
  double conj_by_quadrature(double s) const;
  double conj_inverse(double y) const;
  // h(T) = ln conj_inverse(e^T), valid for any real T
  double h(double T) const;
  // ln Gamma(x) = -h(ln 1/x), Gamma(x) = 1/conj_inverse(1/x)
  double log_gamma(double x) const { return -h(-std::log(x)); }
  double gamma(double x) const { return std::exp(log_gamma(x)); }

  // (Phi')^{-1}(s) (generalized inverse of the right derivative)
  double phi_prime_inverse(double s) const;

 private:
  // L >= 2N with L^N + N L^{N-1} = s
  double top_branch_L(double s) const;
  double N_, E_, c_;
};

struct DiscreteMeasureSpace {
  std::vector<double> weights;
  double total() const;
};

// Luxemburg norm inf{k : sum w_i Phi(|f_i|/k) <= 1} for any Young function handle.
double orlicz_norm(const ScalarFn& Phi, const std::vector<double>& f, const std::vector<double>& w);
double orlicz_norm(const YoungFunction& yf, const std::vector<double>& f, const std::vector<double>& w);
double conj_orlicz_norm(const YoungFunction& yf, const std::vector<double>& f, const std::vector<double>& w);

struct ConjInverseGamma {
  double conj_inv = 0.0;
  double gamma = 0.0;
  bool estimate_ok = true;  // Gamma(t) <= 2^N / (ln 1/t)^N where it applies
};
ConjInverseGamma conj_inverse_and_gamma(const YoungFunction& yf, double t);

struct AlgebraOptions {
  int submult_trials = 100000;
  int young_trials = 10000;
  int holder_trials = 1000;
  int gamma_points = 100;
};

// Submultiplicativity, Young, Hölder (factor 2), the Gamma estimate and the
// growth of h. One report per family.
std::vector<ComparabilityReport> algebra_checks(const YoungFunction& yf, std::uint64_t seed,
                                                const AlgebraOptions& opt = {});

}  // namespace degen
