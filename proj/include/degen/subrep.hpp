#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "degen/geodesics.hpp"
#include "degen/orlicz.hpp"
#include "degen/report.hpp"

namespace degen {

enum class RadiiMode { Standard, Gamma };
const char* to_string(RadiiMode m);

struct RadiiSequence {
  double x1 = 0.0;
  double r0 = 0.0;
  RadiiMode mode = RadiiMode::Standard;
  double gamma = 1.0;
  std::vector<double> radii;  // r_0 > r_1 > ...
  std::vector<double> q;      // q_k = sqrt(r_k^2 - r_{k+1}^2), one shorter than radii
  int main_steps = 0;         // steps taken on the first (non-halving) branch
  int guarded_steps = 0;      // GAMMA steps that would have dropped below r_k/2
  // verification, filled when requested
  double ball_ratio_min = 0.0, ball_ratio_max = 0.0;  // |B(r_k)|/|B(r_{k+1})|
  double growth_C = 0.0;        // max r_k/r_{k+1} - 1
  double second_diff_c = 0.0;   // max |d2 r_k| r_{k+1}/(d r_k)^2 on the first branch
  double dq_c = 0.0;            // max |d q_k|/d r_k
  // k with r_{k+1} <= t < r_k, or -1
  int index_of(double t) const;
};

struct RadiiOptions {
  int K = 64;           // maximal number of steps
  double r_min = 0.0;   // stop once r_k < r_min
  double gamma = 1.0;   // GAMMA mode parameter
  bool verify = true;
};

RadiiSequence radii_sequence(const Geometry& g, double x1, double r0, RadiiMode mode, const RadiiOptions& opt = {});

// Lebesgue measure of the unit ball in R^k (1 for k = 0).
double unit_ball_volume(int k);

struct EndMeasures {
  double log_E = 0.0;        // curved end
  double log_E_tilde = 0.0;  // box end
  double log_E_hat = 0.0;    // box end with width q_{k+1}
  double log_ball = 0.0;     // |B(x, r_k)| from the volume formula
};
// Ends of the k-th shell (k >= 0, k + 2 < radii.size()).
EndMeasures end_measures(const Geometry& g, const RadiiSequence& seq, int k, int dim);

enum class KernelVariant { DHat, NaiveD };
const char* to_string(KernelVariant v);

struct KernelSpec {
  double r0 = 0.0;
  int dim = 2;
  KernelVariant variant = KernelVariant::DHat;
  void validate(const Geometry& g) const;
};

// y in the box-end cusp of x: t = y1 - x1 in [r_{k+1}, r_k) with k >= 1,
// |middle| < q_k, |last| < h*(x1, r_k). Points are (x1, middle..., last).
bool in_cusp(const Geometry& g, const RadiiSequence& seq, const std::vector<double>& x, const std::vector<double>& y);
// log K(x,y); -inf outside the cusp.
double kernel_log_eval(const Geometry& g, const KernelSpec& spec, const std::vector<double>& x,
                       const std::vector<double>& y);
double kernel_eval(const Geometry& g, const KernelSpec& spec, const std::vector<double>& x, const std::vector<double>& y);
// log K from a known distance; x1 >= 0
double kernel_log_from_distance(const Geometry& g, KernelVariant v, double x1, double d, int dim);

struct RowIntegral {
  double dhat = 0.0;   // integral of the d-hat kernel over x
  double naive = 0.0;  // integral of the d kernel over x
  double value(KernelVariant v) const { return v == KernelVariant::DHat ? dhat : naive; }
};
struct RowOptions {
  int levels = 12;     // geometric levels toward y1 - x1 = 0
  int order = 4;       // Gauss order per panel
  int inner = 6;       // Gauss order across the end height
  RowOptions refine() const { return {levels + 4, 2 * order, 2 * inner}; }
};
// Integral over x of K(x,y) for a 2D point y in the right half plane. Both
// kernel variants come from the same distance solves.
RowIntegral kernel_row_integral(const Geometry& g, double r0, std::array<double, 2> y, const RowOptions& opt = {});

struct TestFunction {
  std::string name;
  std::function<double(double, double)> w, wx, wy;
};
// |grad_A w| = sqrt(w_x^2 + f(x)^2 w_y^2)
double grad_A_norm(const Geometry& g, const TestFunction& tf, double x, double y);
// Polynomials, sinusoids and y-oscillating functions scaled to B(0, r0).
std::vector<TestFunction> standard_test_family(const Geometry& g, double r0);

struct ResidualOptions {
  int samples = 50;
  std::uint64_t seed = 1;
  int box_nodes = 4;     // Gauss order per direction on each cusp box
  int end_nodes = 24;    // Gauss order per direction for the end average
  double r_min_factor = 1e-6;
  int max_boxes = 20000;
  ResidualOptions refine() const {
    ResidualOptions o = *this;
    o.box_nodes *= 2;
    o.end_nodes *= 2;
    o.r_min_factor *= 0.1;
    return o;
  }
};
struct ResidualSample {
  double x1 = 0.0, x2 = 0.0;
  int boxes = 0;
  bool truncated = false;
  std::vector<double> left, right;  // per test function
};
struct ResidualResult {
  std::vector<ComparabilityReport> per_function;  // ratio = left/right
  double C = 0.0;                                  // max ratio over the family
  std::vector<ResidualSample> samples;
};
ResidualResult subrep_residual_check(const Geometry& g, double r0, const std::vector<TestFunction>& family,
                                     const ResidualOptions& opt = {});

struct EndpointResult {
  double I = 0.0;
  double bound = 0.0;        // phi(r0) |F'(r0)| with phi(r) = |F'(r)|^N r^{N+1}
  bool gammacond_ok = false;
  double q_max = 0.0;        // max of r F''(r)/|F'(r)| on the grid
  double I_small = 0.0;      // part where the Psi argument is <= E
  double small_cap = 0.0;    // (ln E)^N r0 / omega(r0)
  double t_N = 2.0;
  double omega = 0.0;
};
EndpointResult sobolev_endpoint_integral(const Geometry& g, double N, double r0, double y1, int dim,
                                         double t_N = 2.0);

struct PoincareOptions {
  int levels = 8;   // graded column panels per end
  int order = 6;
  int inner = 8;    // Gauss order across a column
  int inclusion_samples = 200;
  PoincareOptions refine() const { return {2 * levels, 2 * order, 2 * inner, inclusion_samples}; }
};
// Reports: sobolev11 (bump, LHS/(r RHS)), poincare_half, poincare_full,
// inclusion, division_of_regions.
std::vector<ComparabilityReport> poincare_sobolev11_check(const Geometry& g, const std::vector<double>& radii,
                                                          const std::vector<TestFunction>& family, std::uint64_t seed,
                                                          const PoincareOptions& opt = {});
// Averaged-end control on the half ball HB(0,r), 2D, for x with 0 < x1 <= r*(0,r):
// avg over E~(x, r - r*) cap HB(0,r) (normalized by |E~(x, r - r*)|) minus the
// average over E~(0,r), against r times the average of |grad_A w| over HB(0,r).
// Reports: avg_control (left/right), avg_control_overlap (|E~ cap HB|/|E~|),
// avg_control_ends (|E~(x, r - r*)|/|E~(0,r)|).
std::vector<ComparabilityReport> average_control_check(const Geometry& g, const std::vector<double>& radii,
                                                       const std::vector<TestFunction>& family, int samples,
                                                       std::uint64_t seed, const PoincareOptions& opt = {});
// S11 + 2 S12 + S22 <= (2 + 2 m1/m2 + 2 m2/m1) S12 on random discrete spaces.
ComparabilityReport division_of_regions_check(std::uint64_t seed, int trials = 200, double ratio = 0.0);

}  // namespace degen
