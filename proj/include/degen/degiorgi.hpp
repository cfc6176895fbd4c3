#pragma once
#include <functional>
#include <vector>

#include "degen/orlicz.hpp"

namespace degen {

struct CutoffRadii {
  double c = 0.0;  // 1 / (2 zeta(gamma))
  std::vector<double> radii;
};
// r_1 = r, r_j - r_{j+1} = c r / j^gamma, decreasing to r/2.
CutoffRadii cutoff_radii(double r, double gamma, int K);
// c of the cutoff family with exponent gamma
double cutoff_constant(double gamma);

struct IterationParams {
  double N = 2.0;
  double eps = 1.0;
  double C_iter = 1.0;
  double c_cutoff = 0.0;  // 0 selects cutoff_constant(1 + eps/2)
  double tau = 1.0;
  double phi_norm = 1.0;
  double superradius_ratio = 1.0;
  void validate() const;
  double cutoff() const;
  // ln(4 / (c^2 tau^2 |phi|^2 eps^2))
  double gamma0() const;
};

enum class IterStatus { Ok, Blown, DivergedB };
const char* to_string(IterStatus s);

struct IterationState {
  int k = 0;
  double U = 0.0;
  double b = 0.0;  // ln(1/U), kept exactly; U underflows long before b overflows
};

struct IterationRun {
  std::vector<IterationState> states;
  IterStatus status = IterStatus::Ok;
  int blown_at = -1;
  // b_k >= b_0 + k for every computed k
  bool linear_growth = true;
};

IterationRun degiorgi_iterate(const YoungFunction& yf, const IterationParams& p, double U0, int K);
// Same recursion driven by b_0 directly (U_0 = e^{-b_0} underflows for large b_0).
IterationRun degiorgi_iterate_b(const YoungFunction& yf, const IterationParams& p, double b0, int K);
// Variant with Gamma replaced by its explicit estimate 2^N/(ln 1/x)^N.
IterationRun degiorgi_iterate_estimate(const YoungFunction& yf, const IterationParams& p, double b0, int K);

struct Threshold {
  double b0 = 0.0;
  long long argmax_k = 0;  // step where the induction condition is tight
  long long horizon = 0;
};
// Smallest b_0 for which the induction condition holds at every k.
Threshold b0_threshold(const YoungFunction& yf, const IterationParams& p, long long horizon = 1000000);
// Induction condition at step k for a given b_0 (>= 0 means satisfied).
double induction_margin(const IterationParams& p, double b0, long long k);

struct ThresholdFit {
  std::vector<double> ratios, thresholds;
  LinearFit fit;  // b0 = intercept + slope * ratio^{1/N}
};
ThresholdFit threshold_fit(const YoungFunction& yf, IterationParams p, const std::vector<double>& ratios);

struct InnerBallConstants {
  double ratio = 0.0;     // phi(r)/r
  double A_N = 0.0;
  double eta_N = 0.0;
  double ratio_3r = 0.0;
  double A_N_3r = 0.0;
  double C1 = 0.0, C2 = 0.0;
};
InnerBallConstants inner_ball_constants(const YoungFunction& yf, const IterationParams& p, double r,
                                        const ScalarFn& superradius);

IterationRun max_principle_iterate(const YoungFunction& yf, double C, double c, double U0, int K);
IterationRun max_principle_iterate_b(const YoungFunction& yf, double C, double c, double b0, int K);
// h(b_0 + min_k(k - 3 ln(k+2)) - ln 4c^2) > ln C + 1; the minimum sits at k = 1.
bool max_principle_condition(const YoungFunction& yf, double C, double c, double b0);
// Smallest b_0 meeting max_principle_condition; 0 when every b_0 > 0 does.
double max_principle_b0(const YoungFunction& yf, double C, double c);

}  // namespace degen
