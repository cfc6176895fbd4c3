#pragma once
#include "degen/geodesics.hpp"

namespace degen {

enum class Regime { Small, Large };
const char* to_string(Regime r);

// Volumes are carried as logarithms; the neck makes plain values underflow.
struct BallVolumeResult {
  double center_x1 = 0.0;
  double radius = 0.0;
  int dim = 2;
  double log_formula = 0.0;
  double log_oracle = 0.0;
  bool has_oracle = false;
  Regime regime = Regime::Small;
  double formula() const;
  double oracle() const;
  double ratio() const;  // formula / oracle
};

// Resolution of the column oracle: number of geometric panel levels per
// segment end and Gauss order per panel. refine() doubles both.
struct OracleGrid {
  int levels = 10;
  int order = 8;
  OracleGrid refine() const { return {2 * levels, 2 * order}; }
};

double radial_integral(const Geometry& g, const ScalarFn& w, double r0);

// log of the 2D area by integrating 2*phi(u) over columns, optionally split at
// the abscissa `split` (returns left and right parts too).
struct ColumnArea {
  double log_total = 0.0;
  double log_left = 0.0;   // u <= split
  double log_right = 0.0;  // u > split
};
ColumnArea column_area(const Geometry& g, double x1, double r, double split, const OracleGrid& grid = {});

BallVolumeResult area_2d(const Geometry& g, double center_x1, double r, bool oracle = false,
                         const OracleGrid& grid = {});

// Shell reduction over the middle block for n >= 3.
BallVolumeResult volume_nd(const Geometry& g, double center_x1, double r, int n, bool oracle = false,
                           const OracleGrid& grid = {}, int shell_nodes = 24);

double log_formula_2d(const Geometry& g, double x1, double r, Regime* regime = nullptr);
double log_formula_nd(const Geometry& g, double x1, double r, int n, Regime* regime = nullptr);

struct ThickParts {
  double b_plus = 0.0;   // fractions of the total; b_plus + b_minus = 1
  double b_minus = 0.0;
  double log_total = 0.0;
  double r_star = 0.0;
};
ThickParts thick_part_measures(const Geometry& g, double x1, double r, const OracleGrid& grid = {});

struct LaplaceTail {
  double lhs = 0.0;         // scaled by 1/f(z1)
  double rhs = 0.0;         // scaled by 1/f(z1)
  double lhs_inner = 0.0;   // integral over [0, eps/|F'(z1)|] only, same scaling
  double ratio() const { return lhs / rhs; }
  double inner_ratio() const { return lhs_inner / rhs; }
};
LaplaceTail laplace_tail_check(const Geometry& g, double z1, double r, double beta);

struct JacobianProbe {
  int region = 1;
  double x = 0.0;
  double y = 0.0;
  double jacobian = 0.0;       // |det| from the closed form
  double jacobian_ibp = 0.0;   // integrated-by-parts form
  double matrix_det = 0.0;     // |det| of the assembled first-derivative matrix
  double fd_det = 0.0;         // |det| of a finite-difference Jacobian of (r,lambda) -> (x,y)
  double estimate = 0.0;
  double ratio() const { return jacobian / estimate; }
};
JacobianProbe jacobian_probe(const Geometry& g, double r, double lambda);

// (x, y) at arc length r along the geodesic leaving the origin with parameter lambda
Point2 polar_point(const Geometry& g, double r, double lambda);

}  // namespace degen
