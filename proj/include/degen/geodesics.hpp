#pragma once
#include <array>
#include <vector>

#include "degen/geometry.hpp"

namespace degen {

// Turning parameter carried as an offset: Lambda = -ln(lambda) = F(anchor) - delta
// with delta >= 0. delta = 0 means the turning abscissa is the anchor itself.
// Every integrand is written through v = (f/lambda)^2 = exp(-2 D(u)) with
// D(u) = F(u) - F(anchor) + delta, so nothing underflows near the degeneracy.
struct Turn {
  double anchor = 0.0;
  double delta = 0.0;
  static Turn at(double X) { return {X, 0.0}; }
  double Lambda(const Geometry& g) const { return g.F(anchor) - delta; }
};

enum class GeoKind {
  Arc,     // 1/sqrt(1-v)            : dt/dx
  Height,  // v/sqrt(1-v)            : lambda^-1 dy/dx
  Gap,     // 1/sqrt(1-v) - 1
  Inner,   // v/(1-v)^{3/2}          : only for b strictly left of the turning point
  Curv     // F''/F'^2 /sqrt(1-v)
};

QuadratureSpec geodesic_quadrature();

// Integral of the chosen kernel over [a,b], 0 <= |a| ... a may be negative
// (split at 0 by evenness); b >= 0 must not exceed the turning abscissa.
double geo_integral(const Geometry& g, const Turn& T, double a, double b, GeoKind kind,
                    const QuadratureSpec& q = geodesic_quadrature());
// Log of the same for the positive kernels Height and Gap (may return -inf).
double geo_log_integral(const Geometry& g, const Turn& T, double a, double b, GeoKind kind,
                        const QuadratureSpec& q = geodesic_quadrature());

// y(x) along the geodesic from the origin with parameter lambda.
double geodesic_height(const Geometry& g, double lambda, double x);
// t(x): arc length from the origin.
double arc_length(const Geometry& g, double lambda, double x);

struct GeodesicSample {
  double x, y, t;
};

struct GeodesicRecord {
  double lambda = 0.0;
  double X = 0.0;
  double Y = 0.0;
  double R_len = 0.0;
  double Y_prime = 0.0;     // quadrature
  double Y_prime_fd = 0.0;  // centred difference of Y
  std::vector<GeodesicSample> samples;
};

GeodesicRecord turning_data(const Geometry& g, double lambda, int nsamples = 64);

struct BallShape {
  double x1 = 0.0;
  double r = 0.0;
  double r_star = 0.0;
  double h = 0.0;
  double log_h = 0.0;
  double gap = 0.0;          // r - r_star, computed directly
  double height_ratio = 0.0; // h / (f(x1+r*)(r-r*))
};

BallShape ball_shape(const Geometry& g, double x1, double r);

double h_star(const Geometry& g, double x1, double t);
double log_h_star(const Geometry& g, double x1, double t);

struct Point2 {
  double x1, x2;
};

enum class DistanceKind { Horizontal, Region1, Region2, UpperBoundOnly };
const char* to_string(DistanceKind k);

struct DistanceResult {
  double d = 0.0;
  DistanceKind kind = DistanceKind::Horizontal;
  double turn_X = 0.0;      // anchor of the turning parameter
  double turn_delta = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;  // taxicab
};

DistanceResult control_distance_2d(const Geometry& g, Point2 p, Point2 q);
// Same solve with the vertical separation given as its logarithm (-inf for none),
// for heights below the double range.
DistanceResult control_distance_2d_log(const Geometry& g, double p1, double q1, double log_dy);

// Points ordered (x1, middle block..., x_last); the 2D part is (x1, x_last).
double control_distance_nd(const Geometry& g, const std::vector<double>& p, const std::vector<double>& q);

struct DHat {
  double d = 0.0;
  double d_hat = 0.0;
  double d_star = 0.0;
  double ratio = 0.0;  // d_hat / (d - d_star)
};

DHat d_hat(const Geometry& g, const std::vector<double>& x, const std::vector<double>& y);

// Two-column geodesic family used by the distance and the ball oracle.
// Columns a, b with |a| <= b.
namespace twocol {
double r1_gap(const Geometry& g, double a, double b, double delta);
double r1_log_height(const Geometry& g, double a, double b, double delta);
double r2_length(const Geometry& g, double a, double b, double X);
double r2_log_height(const Geometry& g, double a, double b, double X);
// Reduce an unordered pair to |a| <= b, b >= 0.
std::array<double, 2> reduce(double c1, double c2);
}  // namespace twocol

// Log of the boundary height of B((x1,0), r) above column u (-inf outside).
double ball_column_log_height(const Geometry& g, double x1, double r, double u);

}  // namespace degen
